"""Algebroid structures: axiom checks, the Chevalley-Eilenberg differential,
and the contravariant differential of a constant symplectic structure.

Oracles:

* the tangent structure's CE differential must agree with the exterior
  derivative evaluated on fields (both sides computed by independent code
  paths);
* the cotangent structure's CE differential must agree with the
  materialized contravariant differential;
* d_CE squared is checked through nested closures, so the composite is
  evaluated without ever materializing a cochain.
"""

import pytest

from algebroid.algebroids import (
    AlgebroidStructure,
    ce_differential,
    ce_value,
    check_algebroid_axioms,
    contravariant_differential,
    cotangent_algebroid,
    tangent_algebroid,
)
from algebroid.errors import ArityError
from algebroid.exterior import (
    KForm,
    KVector,
    de_rham,
    lie_bracket,
    schouten_bracket,
    vector_apply,
    wedge,
)
from algebroid.poly import Poly
from algebroid.sampling import Sampler
from algebroid.symplectic import (
    ConstantSymplectic,
    bivector_sharp,
    hamiltonian_vf,
    poisson_bracket,
)

from conftest import graded_zero_sum, sgn

STD = ConstantSymplectic.standard()
SUPPORT = (0, 1, 2, 3)


def sample_sections(sampler, structure, count, degree=2):
    if structure.section_kind == "vector":
        return [sampler.vector_field(SUPPORT, degree) for _ in range(count)]
    return [sampler.oneform(SUPPORT, degree) for _ in range(count)]


class TestAxiomChecks:
    def test_tangent_passes(self):
        s = Sampler(401)
        sections = sample_sections(s, tangent_algebroid(), 4)
        functions = [s.nonzero_poly(SUPPORT, 2) for _ in range(3)]
        report = check_algebroid_axioms(tangent_algebroid(), sections, functions)
        assert report.passed
        assert sorted(c.axiom for c in report.checks) == [
            "anchor-homomorphism",
            "antisymmetry",
            "jacobi",
            "leibniz",
        ]
        assert report.first_failure is None

    def test_cotangent_passes(self):
        s = Sampler(402)
        structure = cotangent_algebroid(STD)
        sections = sample_sections(s, structure, 4)
        functions = [s.nonzero_poly(SUPPORT, 2) for _ in range(3)]
        report = check_algebroid_axioms(structure, sections, functions)
        assert report.passed

    def test_cotangent_with_degenerate_block_passes(self):
        # the lenient sharp treats off-block directions as absent
        w = ConstantSymplectic.explicit((0, 1), [[0, 1], [-1, 0]])
        structure = cotangent_algebroid(w)
        s = Sampler(403)
        sections = [s.oneform((0, 1, 2), 2) for _ in range(3)]
        functions = [s.nonzero_poly((0, 1, 2), 2) for _ in range(2)]
        report = check_algebroid_axioms(structure, sections, functions)
        assert report.passed

    def test_zero_bracket_fails_leibniz_with_witness(self):
        broken = AlgebroidStructure(
            name="broken",
            section_kind="vector",
            anchor=lambda section: section,
            bracket=lambda a, b: KVector.zero(1),
        )
        s = Sampler(404)
        sections = [s.vector_field(SUPPORT, 2) for _ in range(3)]
        functions = [s.nonzero_poly(SUPPORT, 2) for _ in range(2)]
        report = check_algebroid_axioms(broken, sections, functions)
        assert not report.passed
        failed = {c.axiom for c in report.checks if not c.passed}
        assert "leibniz" in failed
        assert report.first_failure is not None
        assert report.first_failure.witness

    def test_corrupted_anchor_fails_homomorphism(self):
        broken = AlgebroidStructure(
            name="broken",
            section_kind="vector",
            anchor=lambda section: section * Poly.constant(2),
            bracket=lie_bracket,
        )
        s = Sampler(405)
        sections = [s.vector_field(SUPPORT, 2) for _ in range(3)]
        functions = [s.nonzero_poly(SUPPORT, 2) for _ in range(2)]
        report = check_algebroid_axioms(broken, sections, functions)
        assert not report.passed
        failed = {c.axiom for c in report.checks if not c.passed}
        assert "anchor-homomorphism" in failed or "leibniz" in failed


class TestCeDifferential:
    def test_degree_zero_is_anchor_application(self):
        s = Sampler(406)
        structure = tangent_algebroid()
        for _ in range(30):
            f = s.poly(SUPPORT, 3)
            x = s.vector_field(SUPPORT, 2)
            assert ce_differential(structure, f, [x]) == vector_apply(x, f)

    def test_degree_one_formula(self):
        # (d phi)(s1, s2) = a(s1) phi(s2) - a(s2) phi(s1) - phi([s1, s2])
        s = Sampler(407)
        structure = tangent_algebroid()
        a = s.kform(1, SUPPORT, 2)
        for _ in range(20):
            x = s.vector_field(SUPPORT, 2)
            y = s.vector_field(SUPPORT, 2)
            lhs = ce_differential(structure, a, [x, y])
            rhs = (
                vector_apply(x, a.evaluate(y))
                - vector_apply(y, a.evaluate(x))
                - a.evaluate(lie_bracket(x, y))
            )
            assert lhs == rhs

    def test_tangent_matches_de_rham(self):
        s = Sampler(408)
        structure = tangent_algebroid()
        for _ in range(40):
            k = s.rng.randint(0, 2)
            form = s.kform(k, SUPPORT, 2)
            fields = [s.vector_field(SUPPORT, 2) for _ in range(k + 1)]
            assert ce_differential(structure, form, fields) == de_rham(
                form
            ).evaluate(*fields)

    def test_cotangent_matches_contravariant(self):
        s = Sampler(409)
        structure = cotangent_algebroid(STD)
        for _ in range(40):
            k = s.rng.randint(0, 2)
            field = s.kvector(k, SUPPORT, 2)
            forms = [s.oneform(SUPPORT, 2) for _ in range(k + 1)]
            assert ce_differential(structure, field, forms) == (
                contravariant_differential(STD, field).evaluate(*forms)
            )

    def test_square_zero_via_nested_closures(self):
        # evaluate d(d phi) without materializing d phi
        s = Sampler(410)
        structure = tangent_algebroid()
        for _ in range(15):
            k = s.rng.randint(0, 1)
            form = s.kform(k, SUPPORT, 2)

            def d_phi(*sections):
                return ce_differential(structure, form, list(sections))

            fields = [s.vector_field(SUPPORT, 2) for _ in range(k + 2)]
            value = ce_value(structure, k + 1, d_phi, fields)
            assert value.is_zero()

    def test_wrong_section_count(self):
        structure = tangent_algebroid()
        with pytest.raises(ArityError):
            ce_differential(structure, KForm.blade((0,)), [])

    def test_wrong_section_kind(self):
        structure = tangent_algebroid()
        with pytest.raises(Exception):
            ce_differential(structure, Poly.variable(0), [KForm.coordinate(0)])


class TestContravariantDifferential:
    def test_on_functions_is_minus_hamiltonian(self):
        s = Sampler(411)
        for _ in range(30):
            f = s.poly(SUPPORT, 3)
            assert contravariant_differential(STD, f) == -hamiltonian_vf(STD, f)

    def test_square_zero(self):
        s = Sampler(412)
        for _ in range(40):
            field = s.kvector(s.rng.randint(0, 2), SUPPORT, 2)
            assert contravariant_differential(
                STD, contravariant_differential(STD, field)
            ).is_zero()

    def test_wedge_antiderivation(self):
        s = Sampler(413)
        for _ in range(40):
            p = s.rng.randint(0, 2)
            a = s.kvector(p, SUPPORT, 2)
            b = s.kvector(s.rng.randint(0, 2), SUPPORT, 2)
            pieces = [
                wedge(contravariant_differential(STD, a), b),
                wedge(a, contravariant_differential(STD, b)) * sgn(p),
                -contravariant_differential(STD, wedge(a, b)),
            ]
            assert graded_zero_sum(pieces)

    def test_bracket_compatibility(self):
        # sigma[P, Q] = -[sigma P, Q] - (-1)^p [P, sigma Q]
        s = Sampler(414)
        for _ in range(40):
            p = s.rng.randint(0, 2)
            a = s.kvector(p, SUPPORT, 2)
            b = s.kvector(s.rng.randint(0, 2), SUPPORT, 2)
            pieces = [
                contravariant_differential(STD, schouten_bracket(a, b)),
                schouten_bracket(contravariant_differential(STD, a), b),
                schouten_bracket(a, contravariant_differential(STD, b)) * sgn(p),
            ]
            assert graded_zero_sum(pieces)

    def test_poisson_compatibility(self):
        # sigma f, evaluated on dg, is -{f, g}
        s = Sampler(415)
        for _ in range(30):
            f = s.poly(SUPPORT, 2)
            g = s.poly(SUPPORT, 2)
            value = contravariant_differential(STD, f).evaluate(de_rham(g))
            assert value == -poisson_bracket(STD, f, g)

    def test_degenerate_block_uses_lenient_sharp(self):
        w = ConstantSymplectic.explicit((0, 1), [[0, 1], [-1, 0]])
        f = Poly.variable(2)  # off-block: sigma f = 0
        assert contravariant_differential(w, f).is_zero()
        g = Poly.variable(0)
        assert contravariant_differential(w, g) == -bivector_sharp(
            w, de_rham(g)
        )
