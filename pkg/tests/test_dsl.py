"""The model-document language: lexing, parsing, validation, rendering.

Oracles: parsed expression values are compared against hand-built objects;
rendering is checked to be a fixed point of parse-then-render (the canonical
form reproduces itself byte for byte).
"""

from fractions import Fraction

import pytest

from algebroid.courant import GeneralizedSection
from algebroid.dsl import parse_document, render_document, render_value
from algebroid.errors import DslError, NotInvertible
from algebroid.exterior import KForm, KVector, de_rham, wedge
from algebroid.poly import Poly
from algebroid.symplectic import ConstantSymplectic

from conftest import fixture_path


def parse(text):
    return parse_document(text)


def x(i):
    return Poly.variable(i)


class TestExpressions:
    def test_polynomial_binding(self):
        doc = parse("var x0 x1\nfn f = x0^2 - 2/3*x1 + 1\n")
        assert doc.lookup("f").value == x(0) ** 2 - Fraction(2, 3) * x(1) + 1

    def test_form_binding(self):
        doc = parse("var x0 x1 x2\nform a = x0 * dx[1] ^^ dx[2] - dx[0] ^^ dx[1]\n")
        expected = wedge(
            KForm.from_poly(x(0)), wedge(KForm.coordinate(1), KForm.coordinate(2))
        ) - wedge(KForm.coordinate(0), KForm.coordinate(1))
        assert doc.lookup("a").value == expected

    def test_vector_binding(self):
        doc = parse("var x0 x1\nvector X = x1 * e[0] - 3 * e[1]\n")
        assert doc.lookup("X").value == KVector.blade((0,), x(1)) - (
            KVector.blade((1,), Poly.constant(3))
        )

    def test_multivector_binding(self):
        doc = parse("var x0 x1 x2\nmultivector P = e[0] ^^ e[1] + x2 * e[0] ^^ e[2]\n")
        expected = KVector.blade((0, 1)) + KVector.blade((0, 2), x(2))
        assert doc.lookup("P").value == expected

    def test_section_binding(self):
        doc = parse("var x0 x1\nsection s = (e[0] - x1 * e[1], x0 * dx[1])\n")
        expected = GeneralizedSection(
            KVector.coordinate(0) - KVector.blade((1,), x(1)),
            KForm.blade((1,), x(0)),
        )
        assert doc.lookup("s").value == expected

    def test_section_with_zero_component(self):
        doc = parse("var x0\nsection s = (e[0], 0)\n")
        assert doc.lookup("s").value == GeneralizedSection.of_vector(
            KVector.coordinate(0)
        )

    def test_d_operator_inside_expression(self):
        doc = parse("var x0 x1\nform a = d[x0*x1]\n")
        assert doc.lookup("a").value == de_rham(x(0) * x(1))
        doc2 = parse("var x0 x1 x2\nform b = d[x0 * dx[1]]\n")
        assert doc2.lookup("b").value == de_rham(KForm.blade((1,), x(0)))

    def test_name_reference(self):
        doc = parse("var x0 x1\nfn f = x0 + x1\nfn g = f^2 - f\n")
        f = x(0) + x(1)
        assert doc.lookup("g").value == f * f - f

    def test_rational_powers_and_precedence(self):
        doc = parse("var x0 x1\nfn f = -x0^2 + 1/2 * x1 * x0 - -3\n")
        assert doc.lookup("f").value == -(x(0) ** 2) + Fraction(1, 2) * x(1) * x(0) + 3

    def test_standard_symplectic(self):
        doc = parse("var x0 x1\nsymplectic std\n")
        assert doc.symplectic.kind == "standard"

    def test_explicit_symplectic(self):
        doc = parse(
            "var x0 x1\n"
            "symplectic explicit support {0, 1} matrix [[0, 1/2], [-1/2, 0]]\n"
        )
        w = doc.symplectic
        assert w.kind == "explicit"
        assert w.entry(0, 1) == Fraction(1, 2)

    def test_unsorted_explicit_support_is_permuted(self):
        doc = parse(
            "var x0 x1 x2\n"
            "symplectic explicit support {2, 0} matrix [[0, 1], [-1, 0]]\n"
        )
        w = doc.symplectic
        # entry(0, 2) sits at the permuted position of the original (2, 0) slot
        assert w.entry(0, 2) == Fraction(-1)
        assert w.entry(2, 0) == Fraction(1)

    def test_singular_explicit_matrix(self):
        with pytest.raises(NotInvertible):
            parse(
                "var x0 x1\n"
                "symplectic explicit support {0, 1} matrix [[0, 0], [0, 0]]\n"
            )

    def test_comments_and_blank_lines(self):
        doc = parse("# a model\nvar x0   # trailing\n\nfn f = x0\n")
        assert doc.lookup("f").value == x(0)


class TestValidation:
    def cases(self):
        return [
            ("var x0\nfn f = x0 +\n", 2, None),
            ("var x0\nfn f = y\n", 2, None),
            ("var x0\nform a = dx[0] + dx[0] ^^ dx[1]\n", 2, None),
            ("var x0\nfn f = dx[0]\n", 2, None),
            ("var x0\nvector X = x0\n", 2, None),
            ("var x0\nfn f = x0 ^ x0\n", 2, None),
        ]

    def test_error_positions(self):
        for text, line, column in self.cases():
            with pytest.raises(DslError) as err:
                parse(text)
            assert err.value.line == line
            if column is not None:
                assert err.value.column == column

    def test_unexpected_character_position(self):
        with pytest.raises(DslError) as err:
            parse("var x0\nfn f = x0 @ 2\n")
        assert err.value.line == 2
        assert err.value.column == 11

    def test_undeclared_coordinate(self):
        with pytest.raises(DslError):
            parse("var x0\nfn f = x5\n")
        with pytest.raises(DslError):
            parse("var x0\nform a = dx[5]\n")

    def test_duplicate_binding(self):
        with pytest.raises(DslError):
            parse("var x0\nfn f = x0\nfn f = x0\n")

    def test_second_symplectic_rejected(self):
        with pytest.raises(DslError):
            parse("var x0 x1\nsymplectic std\nsymplectic std\n")

    def test_zero_binding_rejected(self):
        with pytest.raises(DslError) as err:
            parse("var x0\nform a = dx[0] - dx[0]\n")
        assert "zero" in str(err.value)
        with pytest.raises(DslError):
            parse("var x0\nvector X = e[0] - e[0]\n")

    def test_zero_fn_allowed(self):
        doc = parse("var x0\nfn f = x0 - x0\n")
        assert doc.lookup("f").value.is_zero()

    def test_keyword_collision(self):
        with pytest.raises(DslError):
            parse("var x0\nfn form = x0\n")

    def test_wrong_kind_for_binding(self):
        with pytest.raises(DslError):
            parse("var x0\nfn f = e[0]\n")
        with pytest.raises(DslError):
            parse("var x0 x1\nform a = e[0] ^^ e[1]\n")


class TestRendering:
    def test_render_value_round_trips(self):
        doc = parse(
            "var x0 x1 x2 x3\n"
            "fn f = x0*x1 + 1/2*x2^2\n"
            "form a = x0 * dx[1] ^^ dx[2]\n"
            "vector X = x1 * e[0] - e[3]\n"
            "multivector P = e[0] ^^ e[1] + x2 * e[2] ^^ e[3]\n"
            "section s = (e[0], x0 * dx[1])\n"
        )
        for binding in doc.bindings:
            text = render_value(binding.value)
            round_doc = parse(
                f"var x0 x1 x2 x3\n{binding.kind} probe = {text}\n"
            )
            assert round_doc.lookup("probe").value == binding.value

    def test_document_fixed_point(self):
        text = (
            "var x0 x1 x2 x3\n"
            "symplectic std\n"
            "fn f = x0*x1 + 1/2*x2^2\n"
            "form a = x0 * dx[1] ^^ dx[2]\n"
            "vector X = x1 * e[0] - e[3]\n"
        )
        rendered = render_document(parse(text))
        assert render_document(parse(rendered)) == rendered

    def test_explicit_symplectic_fixed_point(self):
        text = (
            "var x0 x1 x2\n"
            "symplectic explicit support {0, 1} matrix [[0, 1/2], [-1/2, 0]]\n"
            "fn c = x2\n"
        )
        rendered = render_document(parse(text))
        assert render_document(parse(rendered)) == rendered

    def test_fixture_corpus_round_trips(self):
        parseable = [
            "std_basic.adsl",
            "std_small.adsl",
            "explicit_block.adsl",
            "tangent_sections.adsl",
            "cotangent_sections.adsl",
            "courant_sections.adsl",
            "dirac_std.adsl",
            "nonclosed_form.adsl",
        ]
        for name in parseable:
            source = fixture_path(name).read_text()
            doc = parse(source)
            rendered = render_document(doc)
            assert render_document(parse(rendered)) == rendered

    def test_error_fixtures_raise(self):
        for name in ("syntax_error.adsl", "unbound_name.adsl", "grade_mismatch.adsl"):
            with pytest.raises(DslError):
                parse(fixture_path(name).read_text())
        with pytest.raises(NotInvertible):
            parse(fixture_path("degenerate_form.adsl").read_text())


class TestDocumentStructure:
    def test_var_lines_merge(self):
        doc = parse("var x0 x2\nvar x1\nfn f = x0 + x1 + x2\n")
        assert doc.var_indices == (0, 1, 2)

    def test_contains_and_lookup(self):
        doc = parse("var x0\nfn f = x0\n")
        assert "f" in doc
        assert "g" not in doc
        assert doc.lookup("f").kind == "fn"
