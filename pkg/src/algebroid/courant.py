"""The generalized tangent structure TM + T*M: pairing, Dorfman and Courant
brackets, and Dirac structures given as graphs of 2-forms.

A generalized section is a pair (X, a) of a vector field and a 1-form.
Conventions:

- pairing(s1, s2) = a1(X2) + a2(X1);
- dorfman_bracket((X, a), (Y, b)) = ([X, Y], L_X b - i_Y da);
- courant_bracket = the antisymmetrization,
  ([X, Y], L_X b - L_Y a + (1/2) d(a(Y) - b(X)));
- delta_operator(f) = (0, d f), which satisfies
  pairing(delta(f), s) = anchor(s)(f).

The graph of a 2-form w collects the sections (X, i_X w).  For a closed w
the graph is involutive; in general
courant(graph X, graph Y) - graph([X, Y]) = (0, i_Y i_X dw), which
``check_dirac`` verifies trial by trial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from algebroid import linalg
from algebroid.algebroids import AlgebroidStructure, check_algebroid_axioms
from algebroid.errors import GradeError
from algebroid.exterior import (
    KForm,
    KVector,
    de_rham,
    interior_product,
    lie_bracket,
    lie_derivative,
    vector_apply,
)
from algebroid.poly import Poly
from algebroid.sampling import Sampler
from algebroid.symplectic import ConstantSymplectic, flat


class GeneralizedSection:
    """A pair (vector field, 1-form)."""

    __slots__ = ("vector", "form")

    def __init__(self, vector: KVector, form: KForm):
        if type(vector) is not KVector or vector.grade != 1:
            raise GradeError("the vector part must be a grade-1 KVector")
        if type(form) is not KForm or form.grade != 1:
            raise GradeError("the form part must be a grade-1 KForm")
        self.vector = vector
        self.form = form

    @classmethod
    def zero(cls) -> "GeneralizedSection":
        return cls(KVector.zero(1), KForm.zero(1))

    @classmethod
    def of_vector(cls, vector: KVector) -> "GeneralizedSection":
        return cls(vector, KForm.zero(1))

    @classmethod
    def of_form(cls, form: KForm) -> "GeneralizedSection":
        return cls(KVector.zero(1), form)

    def is_zero(self) -> bool:
        return self.vector.is_zero() and self.form.is_zero()

    def __eq__(self, other) -> bool:
        if type(other) is not GeneralizedSection:
            return NotImplemented
        return self.vector == other.vector and self.form == other.form

    __hash__ = None

    def __add__(self, other):
        if type(other) is not GeneralizedSection:
            return NotImplemented
        return GeneralizedSection(self.vector + other.vector, self.form + other.form)

    def __neg__(self):
        return GeneralizedSection(-self.vector, -self.form)

    def __sub__(self, other):
        if type(other) is not GeneralizedSection:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return GeneralizedSection(self.vector * other, self.form * other)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"({self.vector}, {self.form})"

    def __repr__(self) -> str:
        return f"GeneralizedSection({self})"


def _check_section(value, what):
    if type(value) is not GeneralizedSection:
        raise TypeError(f"{what} must be a GeneralizedSection")


def tm_pairing(s1: GeneralizedSection, s2: GeneralizedSection) -> Poly:
    """The symmetric pairing a1(X2) + a2(X1)."""
    _check_section(s1, "tm_pairing's first argument")
    _check_section(s2, "tm_pairing's second argument")
    return s1.form.evaluate(s2.vector) + s2.form.evaluate(s1.vector)


def dorfman_bracket(
    s1: GeneralizedSection, s2: GeneralizedSection
) -> GeneralizedSection:
    """([X, Y], L_X b - i_Y da)."""
    _check_section(s1, "dorfman_bracket's first argument")
    _check_section(s2, "dorfman_bracket's second argument")
    return GeneralizedSection(
        lie_bracket(s1.vector, s2.vector),
        lie_derivative(s1.vector, s2.form)
        - interior_product(s2.vector, de_rham(s1.form)),
    )


def courant_bracket(
    s1: GeneralizedSection, s2: GeneralizedSection
) -> GeneralizedSection:
    """([X, Y], L_X b - L_Y a + (1/2) d(a(Y) - b(X)))."""
    _check_section(s1, "courant_bracket's first argument")
    _check_section(s2, "courant_bracket's second argument")
    correction = s1.form.evaluate(s2.vector) - s2.form.evaluate(s1.vector)
    return GeneralizedSection(
        lie_bracket(s1.vector, s2.vector),
        lie_derivative(s1.vector, s2.form)
        - lie_derivative(s2.vector, s1.form)
        + de_rham(correction) * Fraction(1, 2),
    )


def delta_operator(function: Poly) -> GeneralizedSection:
    """delta(f) = (0, d f)."""
    if isinstance(function, (int, Fraction)):
        function = Poly.constant(function)
    return GeneralizedSection(KVector.zero(1), de_rham(function))


def anchor(section: GeneralizedSection) -> KVector:
    return section.vector


@dataclass
class CourantCheck:
    axiom: str
    passed: bool
    witness: str = None


@dataclass
class CourantReport:
    passed: bool
    checks: list
    first_failure: CourantCheck = None


def check_courant_axioms(
    sections,
    functions,
    *,
    bracket=dorfman_bracket,
    pairing=tm_pairing,
) -> CourantReport:
    """Verify the three Courant axioms on concrete sections:

    1. [s1, [s2, s3]] = [[s1, s2], s3] + [s2, [s1, s3]];
    2. anchor(s1)(pairing(s2, s3)) = pairing([s1, s2], s3) + pairing(s2, [s1, s3]);
    3. [s1, s2] + [s2, s1] = delta(pairing(s1, s2));

    plus the defining property of delta, pairing(delta(f), s) = anchor(s)(f),
    on the supplied functions.  ``bracket`` and ``pairing`` are injectable so
    deliberately corrupted structures can be probed.
    """
    sections = list(sections)
    functions = [f if isinstance(f, Poly) else Poly.constant(f) for f in functions]
    checks = []
    n = len(sections)

    failure = None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                s1, s2, s3 = sections[i], sections[j], sections[k]
                defect = (
                    bracket(s1, bracket(s2, s3))
                    - bracket(bracket(s1, s2), s3)
                    - bracket(s2, bracket(s1, s3))
                )
                if not defect.is_zero():
                    failure = f"leibniz-jacobi defect on (s{i}, s{j}, s{k}): {defect}"
                    break
            if failure:
                break
        if failure:
            break
    checks.append(CourantCheck("bracket-jacobi", failure is None, failure))

    failure = None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                s1, s2, s3 = sections[i], sections[j], sections[k]
                lhs = vector_apply(anchor(s1), pairing(s2, s3))
                rhs = pairing(bracket(s1, s2), s3) + pairing(s2, bracket(s1, s3))
                if lhs != rhs:
                    failure = (
                        f"pairing invariance fails on (s{i}, s{j}, s{k}): "
                        f"{lhs - rhs}"
                    )
                    break
            if failure:
                break
        if failure:
            break
    checks.append(CourantCheck("pairing-invariance", failure is None, failure))

    failure = None
    for i in range(n):
        for j in range(n):
            s1, s2 = sections[i], sections[j]
            defect = bracket(s1, s2) + bracket(s2, s1) - delta_operator(
                pairing(s1, s2)
            )
            if not defect.is_zero():
                failure = f"symmetric part defect on (s{i}, s{j}): {defect}"
                break
        if failure:
            break
    checks.append(CourantCheck("symmetric-part", failure is None, failure))

    failure = None
    for fi, f in enumerate(functions):
        for i in range(n):
            lhs = pairing(delta_operator(f), sections[i])
            rhs = vector_apply(anchor(sections[i]), f)
            if lhs != rhs:
                failure = f"pairing(delta(f{fi}), s{i}) - anchor(s{i})(f{fi}) = {lhs - rhs}"
                break
        if failure:
            break
    checks.append(CourantCheck("delta-defining", failure is None, failure))

    first_failure = next((c for c in checks if not c.passed), None)
    return CourantReport(
        passed=first_failure is None, checks=checks, first_failure=first_failure
    )


class DiracStructure:
    """The graph of a 2-form: sections (X, i_X w).

    The 2-form is a ConstantSymplectic (possibly on a block smaller than the
    ambient support, giving a subbundle strictly contained in its orthogonal
    complement) or a grade-2 KForm (possibly non-closed, in which case the
    graph fails involutivity with a computable defect).
    """

    def __init__(self, form):
        if not isinstance(form, ConstantSymplectic):
            if type(form) is not KForm or form.grade != 2:
                raise GradeError(
                    "a Dirac structure is the graph of a ConstantSymplectic "
                    "or a grade-2 KForm"
                )
        self.form = form

    def flatten(self, field: KVector) -> KForm:
        if isinstance(self.form, ConstantSymplectic):
            return flat(self.form, field)
        return interior_product(field, self.form)

    def generate(self, field: KVector) -> GeneralizedSection:
        """The graph section over a vector field."""
        return GeneralizedSection(field, self.flatten(field))

    def generator_indices(self, support):
        """Indices whose coordinate fields generate the subbundle fiber."""
        if isinstance(self.form, ConstantSymplectic):
            if self.form.kind == "standard":
                return self.form.closure(support)
            return self.form.block
        return tuple(sorted(set(support) | self.form.support()))

    def curvature(self) -> KForm:
        """d of the defining 2-form (zero exactly when the graph is involutive)."""
        if isinstance(self.form, ConstantSymplectic):
            return KForm.zero(3)
        return de_rham(self.form)


def dirac_algebroid(structure: DiracStructure) -> AlgebroidStructure:
    """The algebroid the Courant bracket induces on graph sections."""
    return AlgebroidStructure(
        name="dirac",
        section_kind="generalized",
        anchor=anchor,
        bracket=courant_bracket,
    )


@dataclass
class ComplementReport:
    ambient_indices: tuple
    fiber_dimension: int
    dim_subbundle: int
    dim_complement: int
    isotropic: bool
    equals_complement: bool
    witness: GeneralizedSection = None


def orthogonal_complement(structure: DiracStructure, support) -> ComplementReport:
    """The orthogonal complement of a constant graph inside the ambient fiber.

    The fiber over the generic point is spanned by the coordinate frame and
    coframe over the pairing-closure of ``support``; the subbundle is
    generated by graph sections of the structure's own block.  Everything is
    exact integer linear algebra.
    """
    if not isinstance(structure.form, ConstantSymplectic):
        raise TypeError(
            "orthogonal_complement needs a constant-coefficient structure; "
            "polynomial graphs are handled by check_dirac"
        )
    w = structure.form
    ambient = tuple(sorted(set(w.closure(support)) | set(support)))
    generators = tuple(i for i in structure.generator_indices(support) if i in ambient)
    n = len(ambient)
    position = {index: k for k, index in enumerate(ambient)}

    basis_rows = []
    for i in generators:
        row = [Fraction(0)] * (2 * n)
        row[position[i]] = Fraction(1)
        for j in ambient:
            value = w.entry(i, j)
            if value:
                row[n + position[j]] = value
        basis_rows.append(row)

    # pairing matrix in block form [[0, I], [I, 0]]
    def pair_with(row):
        return row[n:] + row[:n]

    constraint_rows = [pair_with(row) for row in basis_rows]
    perp_basis = (
        linalg.nullspace(constraint_rows, 2 * n)
        if constraint_rows
        else [tuple(int(i == j) for j in range(2 * n)) for i in range(2 * n)]
    )
    dim_sub = linalg.rank(basis_rows, 2 * n) if basis_rows else 0
    dim_perp = len(perp_basis)

    isotropic = True
    for row in basis_rows:
        paired = pair_with(row)
        for other in basis_rows:
            if sum(a * b for a, b in zip(paired, other)):
                isotropic = False
                break
        if not isotropic:
            break

    equals = dim_sub == dim_perp and all(
        linalg.row_space_contains(basis_rows, list(vec), 2 * n) for vec in perp_basis
    ) if basis_rows else dim_perp == 0
    witness = None
    if not equals:
        for vec in perp_basis:
            if not basis_rows or not linalg.row_space_contains(
                basis_rows, list(vec), 2 * n
            ):
                vector = KVector(
                    1,
                    {
                        (ambient[k],): Fraction(vec[k])
                        for k in range(n)
                        if vec[k]
                    },
                )
                form = KForm(
                    1,
                    {
                        (ambient[k],): Fraction(vec[n + k])
                        for k in range(n)
                        if vec[n + k]
                    },
                )
                witness = GeneralizedSection(vector, form)
                break
    return ComplementReport(
        ambient_indices=ambient,
        fiber_dimension=2 * n,
        dim_subbundle=dim_sub,
        dim_complement=dim_perp,
        isotropic=isotropic,
        equals_complement=equals,
        witness=witness,
    )


@dataclass
class DiracReport:
    seed: int
    trials: int
    isotropy_failures: list
    involutivity_failures: list
    defect_matches_prediction: bool
    axioms: object
    passed: bool


def check_dirac(
    structure: DiracStructure,
    trials: int,
    seed: int,
    support=None,
    degree: int = 2,
) -> DiracReport:
    """Randomized isotropy and involutivity checks on graph sections, then
    the algebroid axioms on a sampled triple.

    Involutivity compares courant(graph X, graph Y) with graph([X, Y]); the
    form-part defect is also compared against the predicted i_Y i_X (dw).
    """
    sampler = Sampler(seed)
    if support is None:
        if isinstance(structure.form, ConstantSymplectic):
            if structure.form.kind == "standard":
                support = (0, 1, 2, 3)
            else:
                support = structure.form.block
        else:
            support = tuple(sorted(structure.form.support()))
    support = tuple(sorted(set(support)))
    if not support:
        raise ValueError("check_dirac needs a nonempty sampling support")

    curvature = structure.curvature()
    isotropy_failures = []
    involutivity_failures = []
    defect_ok = True
    for _ in range(trials):
        x = sampler.vector_field(support, degree)
        y = sampler.vector_field(support, degree)
        s1 = structure.generate(x)
        s2 = structure.generate(y)
        value = tm_pairing(s1, s2)
        if not value.is_zero():
            isotropy_failures.append((x, y, value))
        bracket = courant_bracket(s1, s2)
        expected = structure.generate(lie_bracket(x, y))
        defect = bracket - expected
        predicted = interior_product(y, interior_product(x, curvature)) if not curvature.is_zero() else KForm.zero(1)
        if not (defect.vector.is_zero() and (defect.form - predicted).is_zero()):
            defect_ok = False
        if not defect.is_zero():
            involutivity_failures.append((x, y, defect.form))

    section_samples = [
        structure.generate(sampler.vector_field(support, degree)) for _ in range(3)
    ]
    functions = [sampler.nonzero_poly(support, degree) for _ in range(2)]
    axioms = check_algebroid_axioms(
        dirac_algebroid(structure), section_samples, functions
    )
    passed = (
        not isotropy_failures
        and not involutivity_failures
        and defect_ok
        and axioms.passed
    )
    return DiracReport(
        seed=seed,
        trials=trials,
        isotropy_failures=isotropy_failures,
        involutivity_failures=involutivity_failures,
        defect_matches_prediction=defect_ok,
        axioms=axioms,
        passed=passed,
    )
