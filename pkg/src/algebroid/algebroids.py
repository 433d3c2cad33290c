"""Lie algebroid structures over polynomial models.

An ``AlgebroidStructure`` packages a space of sections (grade-1 KVectors,
grade-1 KForms, or generalized sections), an anchor into vector fields, and
a bracket on sections.  ``check_algebroid_axioms`` verifies, on concrete
sections and functions, the four defining identities:

1. antisymmetry of the bracket;
2. the Jacobi identity;
3. the anchor is a homomorphism onto the Lie bracket of vector fields;
4. the Leibniz rule  [s, f t] = f [s, t] + anchor(s)(f) t.

``ce_differential`` is the Chevalley-Eilenberg differential of such a
structure on alternating polynomial cochains, and
``contravariant_differential`` is its closed form for the cotangent
structure of a constant symplectic form, extended to multivector fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from algebroid.errors import ArityError, GradeError
from algebroid.exterior import KForm, KVector, lie_bracket, vector_apply
from algebroid.poly import Poly
from algebroid.symplectic import (
    ConstantSymplectic,
    bivector_sharp,
    poisson_oneform_bracket,
)


@dataclass(frozen=True)
class AlgebroidStructure:
    """A section space with an anchor and a bracket."""

    name: str
    section_kind: str  # "vector" | "form" | "generalized"
    anchor: object  # section -> grade-1 KVector
    bracket: object  # (section, section) -> section


def tangent_algebroid() -> AlgebroidStructure:
    """Vector fields with the identity anchor and the Lie bracket."""
    return AlgebroidStructure(
        name="tangent",
        section_kind="vector",
        anchor=lambda section: section,
        bracket=lie_bracket,
    )


def cotangent_algebroid(w: ConstantSymplectic) -> AlgebroidStructure:
    """One-forms with the bivector sharp anchor and the Koszul bracket."""
    return AlgebroidStructure(
        name="cotangent",
        section_kind="form",
        anchor=lambda section: bivector_sharp(w, section),
        bracket=lambda a, b: poisson_oneform_bracket(w, a, b),
    )


def _section_is_zero(value) -> bool:
    return value.is_zero()


@dataclass
class AxiomCheck:
    axiom: str
    passed: bool
    witness: str = None


@dataclass
class AxiomReport:
    passed: bool
    checks: list
    first_failure: AxiomCheck = None


def check_algebroid_axioms(structure, sections, functions) -> AxiomReport:
    """Verify the four algebroid axioms on the given sections and functions.

    Each axiom is checked on every applicable tuple; the report records one
    entry per axiom with the first counterexample as witness.
    """
    sections = list(sections)
    functions = [f if isinstance(f, Poly) else Poly.constant(f) for f in functions]
    bracket = structure.bracket
    anchor = structure.anchor
    checks = []

    failure = None
    for i in range(len(sections)):
        for j in range(i, len(sections)):
            defect = bracket(sections[i], sections[j]) + bracket(
                sections[j], sections[i]
            )
            if not _section_is_zero(defect):
                failure = f"[s{i}, s{j}] + [s{j}, s{i}] = {defect}"
                break
        if failure:
            break
    checks.append(AxiomCheck("antisymmetry", failure is None, failure))

    failure = None
    for i in range(len(sections)):
        for j in range(i + 1, len(sections)):
            for k in range(j + 1, len(sections)):
                s1, s2, s3 = sections[i], sections[j], sections[k]
                defect = (
                    bracket(s1, bracket(s2, s3))
                    + bracket(s2, bracket(s3, s1))
                    + bracket(s3, bracket(s1, s2))
                )
                if not _section_is_zero(defect):
                    failure = f"jacobiator(s{i}, s{j}, s{k}) = {defect}"
                    break
            if failure:
                break
        if failure:
            break
    checks.append(AxiomCheck("jacobi", failure is None, failure))

    failure = None
    for i in range(len(sections)):
        for j in range(i + 1, len(sections)):
            defect = anchor(bracket(sections[i], sections[j])) - lie_bracket(
                anchor(sections[i]), anchor(sections[j])
            )
            if not _section_is_zero(defect):
                failure = f"anchor([s{i}, s{j}]) - [anchor(s{i}), anchor(s{j})] = {defect}"
                break
        if failure:
            break
    checks.append(AxiomCheck("anchor-homomorphism", failure is None, failure))

    failure = None
    for i in range(len(sections)):
        for j in range(len(sections)):
            for fi, f in enumerate(functions):
                lhs = bracket(sections[i], f * sections[j])
                rhs = f * bracket(sections[i], sections[j]) + vector_apply(
                    anchor(sections[i]), f
                ) * sections[j]
                defect = lhs - rhs
                if not _section_is_zero(defect):
                    failure = (
                        f"[s{i}, f{fi} s{j}] - f{fi} [s{i}, s{j}]"
                        f" - anchor(s{i})(f{fi}) s{j} = {defect}"
                    )
                    break
            if failure:
                break
        if failure:
            break
    checks.append(AxiomCheck("leibniz", failure is None, failure))

    first_failure = next((c for c in checks if not c.passed), None)
    return AxiomReport(
        passed=first_failure is None, checks=checks, first_failure=first_failure
    )


_COCHAIN_KIND = {"vector": KForm, "form": KVector}
_SECTION_KIND = {"vector": KVector, "form": KForm}


def _validate_sections(structure, sections):
    expected = _SECTION_KIND.get(structure.section_kind)
    if expected is None:
        raise TypeError(
            f"cochains over {structure.section_kind!r} sections are not supported"
        )
    for section in sections:
        if type(section) is not expected or section.grade != 1:
            raise GradeError(
                f"sections of the {structure.name} structure must be grade-1 "
                f"{expected.__name__}s"
            )


def ce_value(structure, k, value_fn, sections) -> Poly:
    """The Chevalley-Eilenberg formula on an arbitrary k-cochain evaluator.

    ``value_fn`` takes k sections and returns a Poly; ``sections`` has
    length k + 1.  Exposed separately so iterated differentials can be
    formed by nesting closures without materializing cochains.
    """
    sections = list(sections)
    if len(sections) != k + 1:
        raise ArityError(f"a {k}-cochain differential takes {k + 1} sections")
    _validate_sections(structure, sections)
    total = Poly.zero()
    for i, section in enumerate(sections):
        rest = sections[:i] + sections[i + 1 :]
        inner = value_fn(*rest)
        piece = vector_apply(structure.anchor(section), inner)
        if i & 1:
            piece = -piece
        total = total + piece
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            bracketed = structure.bracket(sections[i], sections[j])
            rest = [bracketed] + [
                sections[l] for l in range(k + 1) if l != i and l != j
            ]
            value = value_fn(*rest)
            if (i + j) & 1:
                value = -value
            total = total + value
    return total


def ce_differential(structure, cochain, sections) -> Poly:
    """(d_A cochain)(sections) for an alternating polynomial cochain.

    The cochain is a KForm for vector-kind sections, a KVector for
    form-kind sections, or a bare Poly in grade 0.
    """
    if isinstance(cochain, (Poly, int, Fraction)):
        cochain = _COCHAIN_KIND[structure.section_kind].from_poly(
            cochain if isinstance(cochain, Poly) else Poly.constant(cochain)
        )
    expected = _COCHAIN_KIND.get(structure.section_kind)
    if expected is None:
        raise TypeError(
            f"cochains over {structure.section_kind!r} sections are not supported"
        )
    if type(cochain) is not expected:
        raise GradeError(
            f"cochains of the {structure.name} structure must be {expected.__name__}s"
        )
    return ce_value(structure, cochain.grade, cochain.evaluate, sections)


def contravariant_differential(w: ConstantSymplectic, field) -> KVector:
    """The differential induced by a constant symplectic structure on
    multivector fields: the Chevalley-Eilenberg differential of its
    cotangent structure, materialized on the coordinate coframe.

    For a function f it returns the grade-1 field with dx_j-component
    sharp(dx_j)(f); in general the coefficient on a blade J is the
    alternating sum over positions of sharp(dx_{j_i}) applied to the
    coefficient of J minus that index.  Coframe brackets vanish for a
    constant 2-form, so no bracket terms appear.
    """
    if isinstance(field, (Poly, int, Fraction)):
        field = KVector.from_poly(
            field if isinstance(field, Poly) else Poly.constant(field)
        )
    if type(field) is not KVector:
        raise GradeError("contravariant_differential acts on KVectors")
    grade = field.grade

    candidates = set()
    for blade, coeff in field.terms.items():
        partners = set()
        for var in coeff.variables():
            if w.kind == "standard":
                partners.add(var ^ 1)
            elif var in w.block:
                a = w.block.index(var)
                for b in range(len(w.block)):
                    if w.inverse[a][b]:
                        partners.add(w.block[b])
        for j in partners:
            if j not in blade:
                pos = sum(1 for value in blade if value < j)
                candidates.add(blade[:pos] + (j,) + blade[pos:])

    out = {}
    for target in sorted(candidates):
        total = Poly.zero()
        for pos, j in enumerate(target):
            source = target[:pos] + target[pos + 1 :]
            coeff = field.terms.get(source)
            if coeff is None:
                continue
            components = w.sharp_components(j)
            if not components:
                continue
            piece = Poly.zero()
            for index, scale in components:
                partial = coeff.partial(index)
                if not partial.is_zero():
                    piece = piece + partial * scale
            if piece.is_zero():
                continue
            if pos & 1:
                piece = -piece
            total = total + piece
        if not total.is_zero():
            out[target] = total
    return KVector._raw(grade + 1, out)
