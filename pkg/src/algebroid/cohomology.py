"""Truncated cochain complexes and their cohomology by exact linear algebra.

A ``TruncationSpec`` fixes a finite coordinate support and a coefficient
degree bound D.  Grade-k cochains are spanned by (blade over the support,
monomial of degree <= bound) pairs.  Every differential handled here lowers
the coefficient degree by exactly one, so the degree window rule is:

- cocycles at grade k are taken with coefficient degree <= D;
- coboundaries at grade k are images of grade-(k-1) cochains with
  coefficient degree <= D + 1 (those images land inside degree <= D).

The quotient dimension is nullity(d restricted to degree <= D) minus
rank(d from degree <= D + 1).  All ranks and kernels are exact (fraction-
free elimination over the integers after row scaling).

Three complexes are supported:

- ``"lp"``: multivector fields with the contravariant differential of a
  constant symplectic structure;
- ``"ce-tangent"``: the Chevalley-Eilenberg complex of the tangent
  structure (polynomial forms with the exterior derivative);
- ``"ce-cotangent"``: the Chevalley-Eilenberg complex of the cotangent
  structure of a constant symplectic form (cochains are multivectors,
  evaluated on coordinate coframes).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb

from algebroid import linalg
from algebroid.algebroids import (
    ce_differential,
    contravariant_differential,
    cotangent_algebroid,
    tangent_algebroid,
)
from algebroid.errors import TruncationTooLarge
from algebroid.exterior import KForm, KVector
from algebroid.poly import Poly
from algebroid.sampling import Sampler, monomials_up_to
from algebroid.symplectic import ConstantSymplectic

DEFAULT_MAX_BASIS = 20000

COMPLEXES = ("lp", "ce-tangent", "ce-cotangent")


@dataclass(frozen=True)
class TruncationSpec:
    """A finite support and a coefficient degree bound."""

    support: tuple
    degree: int

    def __post_init__(self):
        support = tuple(sorted(set(self.support)))
        if any(i < 0 for i in support):
            raise ValueError("support indices are natural numbers")
        if self.degree < 0:
            raise ValueError("the degree bound must be nonnegative")
        object.__setattr__(self, "support", support)


def blade_basis(support, grade):
    return list(combinations(tuple(sorted(set(support))), grade))


def _domain_size(spec, grade, degree):
    nmono = sum(
        comb(len(spec.support) + d - 1, d) for d in range(degree + 1)
    )
    return comb(len(spec.support), grade) * nmono


def _guard_basis(spec, grade, degree, max_basis):
    size = _domain_size(spec, grade, degree)
    if size > max_basis:
        raise TruncationTooLarge(
            f"grade {grade} at degree {degree} needs {size} basis elements "
            f"(limit {max_basis})"
        )
    return size


def _validate_support(complex_name, w, spec):
    if complex_name not in COMPLEXES:
        raise ValueError(f"unknown complex {complex_name!r}")
    if complex_name == "ce-tangent":
        return
    if not isinstance(w, ConstantSymplectic):
        raise TypeError(f"the {complex_name} complex needs a ConstantSymplectic")
    if not w.is_closed_support(spec.support):
        if w.kind == "standard":
            raise ValueError(
                "the truncation support must be closed under the standard pairing"
            )
        raise ValueError(
            "the truncation support must contain the explicit block"
        )


def _differential(complex_name, w):
    """A map (grade, blade, monomial) -> image object of grade + 1."""
    if complex_name == "lp":

        def image(grade, blade, mono):
            return contravariant_differential(
                w, KVector._raw(grade, {blade: Poly({mono: 1})})
            )

        return image

    if complex_name == "ce-tangent":
        structure = tangent_algebroid()
        cochain_cls, section_cls = KForm, KVector
    else:
        structure = cotangent_algebroid(w)
        cochain_cls, section_cls = KVector, KForm

    def image(grade, blade, mono, _structure=structure):
        cochain = cochain_cls._raw(grade, {blade: Poly({mono: 1})})
        support = _image_support(blade, mono, w, complex_name)
        out = {}
        for target in combinations(support, grade + 1):
            value = ce_differential(
                _structure, cochain, [section_cls.coordinate(j) for j in target]
            )
            if not value.is_zero():
                out[target] = value
        return cochain_cls._raw(grade + 1, out)

    return image


def _image_support(blade, mono, w, complex_name):
    touched = set(blade)
    for var, _ in mono:
        touched.add(var)
    if complex_name == "ce-tangent":
        return tuple(sorted(touched))
    return w.closure(touched)


def _assemble_matrix(complex_name, w, spec, grade, degree, threads=None, permute=None):
    """Rows of the differential matrix from grade/degree, plus the domain size.

    Rows are indexed by (target blade, target monomial) pairs encountered in
    the images; columns by the domain basis (blade-major, monomials in
    canonical order).  Entries are exact rationals.
    """
    blades = blade_basis(spec.support, grade)
    monos = monomials_up_to(spec.support, degree)
    domain = [(blade, mono) for blade in blades for mono in monos]
    if permute is not None:
        permute.shuffle(domain)
    image = _differential(complex_name, w)

    def column(item):
        blade, mono = item
        return image(grade, blade, mono)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            images = list(pool.map(column, domain))
    else:
        images = [column(item) for item in domain]

    row_index = {}
    entries = []
    for col, value in enumerate(images):
        for blade, coeff in value.sorted_terms():
            for mono, scalar in coeff.sorted_terms():
                key = (blade, mono)
                row = row_index.get(key)
                if row is None:
                    row = len(row_index)
                    row_index[key] = row
                entries.append((row, col, scalar))
    rows = [[0] * len(domain) for _ in range(len(row_index))]
    for row, col, scalar in entries:
        rows[row][col] = scalar
    return rows, len(domain)


@dataclass
class GradeDims:
    cocycles: int
    coboundaries: int
    dim: int


@dataclass
class CohomologyReport:
    complex_name: str
    support: tuple
    degree: int
    grades: dict  # grade -> GradeDims
    domain_sizes: dict  # grade -> basis size at the cocycle window

    def table(self):
        return {k: (v.cocycles, v.coboundaries, v.dim) for k, v in sorted(self.grades.items())}


def compute_cohomology(
    complex_name,
    w,
    spec: TruncationSpec,
    grades,
    max_basis: int = DEFAULT_MAX_BASIS,
    threads: int = None,
    _permute=None,
) -> CohomologyReport:
    """Cocycle, coboundary, and quotient dimensions per requested grade."""
    _validate_support(complex_name, w, spec)
    grades = sorted(set(grades))
    if any(g < 0 for g in grades):
        raise ValueError("grades are nonnegative")
    if threads is None:
        threads = int(os.environ.get("ALGEBROID_THREADS", "1") or "1")

    out = {}
    sizes = {}
    rank_cache = {}

    def matrix_rank(grade, degree):
        key = (grade, degree)
        if key not in rank_cache:
            _guard_basis(spec, grade, degree, max_basis)
            rows, ncols = _assemble_matrix(
                complex_name, w, spec, grade, degree, threads=threads, permute=_permute
            )
            rank_cache[key] = (linalg.rank(rows, ncols) if ncols else 0, ncols)
        return rank_cache[key]

    for grade in grades:
        rank_here, ncols_here = matrix_rank(grade, spec.degree)
        sizes[grade] = ncols_here
        cocycles = ncols_here - rank_here
        if grade == 0:
            coboundaries = 0
        else:
            rank_prev, _ = matrix_rank(grade - 1, spec.degree + 1)
            coboundaries = rank_prev
        quotient = cocycles - coboundaries
        # image sits inside the kernel (d^2 = 0), so the quotient is a dimension
        if quotient < 0:
            raise AssertionError(
                "coboundaries exceeded cocycles; the degree window is inconsistent"
            )
        out[grade] = GradeDims(cocycles, coboundaries, quotient)
    return CohomologyReport(
        complex_name=complex_name,
        support=spec.support,
        degree=spec.degree,
        grades=out,
        domain_sizes=sizes,
    )


def casimir_space(w: ConstantSymplectic, spec: TruncationSpec, max_basis: int = DEFAULT_MAX_BASIS):
    """A canonical basis of the degree-bounded kernel of the differential on
    functions (grade-0 cocycles of the "lp" complex)."""
    _validate_support("lp", w, spec)
    _guard_basis(spec, 0, spec.degree, max_basis)
    monos = monomials_up_to(spec.support, spec.degree)
    rows, ncols = _assemble_matrix("lp", w, spec, 0, spec.degree)
    kernel = (
        linalg.nullspace(rows, ncols)
        if rows
        else [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    )
    basis = []
    for vector in kernel:
        poly = Poly({monos[i]: value for i, value in enumerate(vector) if value})
        basis.append(poly)
    return basis


@dataclass
class H1Report:
    dim_closed_fields: int
    dim_exact_fields: int
    dim_quotient: int
    support: tuple
    degree: int


def h1_decomposition(
    w: ConstantSymplectic, spec: TruncationSpec, max_basis: int = DEFAULT_MAX_BASIS
) -> H1Report:
    """Grade-1 cocycles modulo exact fields for the "lp" complex.

    Cocycles are the degree-bounded fields annihilated by the differential;
    exact fields are differentials of functions one degree higher.
    """
    _validate_support("lp", w, spec)
    _guard_basis(spec, 1, spec.degree, max_basis)
    _guard_basis(spec, 0, spec.degree + 1, max_basis)
    rows1, ncols1 = _assemble_matrix("lp", w, spec, 1, spec.degree)
    rank1 = linalg.rank(rows1, ncols1) if ncols1 else 0
    closed = ncols1 - rank1
    rows0, ncols0 = _assemble_matrix("lp", w, spec, 0, spec.degree + 1)
    exact = linalg.rank(rows0, ncols0) if ncols0 else 0
    return H1Report(
        dim_closed_fields=closed,
        dim_exact_fields=exact,
        dim_quotient=closed - exact,
        support=spec.support,
        degree=spec.degree,
    )


@dataclass
class AgreementReport:
    seed: int
    trials_per_grade: int
    operator_grades: tuple
    mismatches: list
    lp_table: dict
    ce_table: dict
    tables_equal: bool
    passed: bool


def check_lp_ce_agreement(
    w: ConstantSymplectic,
    spec: TruncationSpec,
    grades,
    trials: int,
    seed: int,
    max_basis: int = DEFAULT_MAX_BASIS,
    threads: int = None,
) -> AgreementReport:
    """Check that the contravariant differential is the Chevalley-Eilenberg
    differential of the cotangent structure, then compare the two truncated
    cohomology tables.

    The operator identity is sampled: for each cochain grade k in 0..2, it
    draws random grade-k multivectors and (k+1)-tuples of 1-forms and
    compares both evaluations exactly.  The tables are computed by the same
    exact pipeline on both complexes.
    """
    sampler = Sampler(seed)
    structure = cotangent_algebroid(w)
    mismatches = []
    operator_grades = (0, 1, 2)
    for grade in operator_grades:
        for _ in range(trials):
            field = sampler.kvector(grade, spec.support, spec.degree)
            args = [
                sampler.oneform(spec.support, spec.degree)
                for _ in range(grade + 1)
            ]
            lhs = ce_differential(structure, field, args)
            rhs = contravariant_differential(w, field).evaluate(*args)
            if lhs != rhs:
                mismatches.append((grade, field, args, lhs - rhs))
    lp = compute_cohomology("lp", w, spec, grades, max_basis, threads)
    ce = compute_cohomology("ce-cotangent", w, spec, grades, max_basis, threads)
    tables_equal = lp.table() == ce.table()
    return AgreementReport(
        seed=seed,
        trials_per_grade=trials,
        operator_grades=operator_grades,
        mismatches=mismatches,
        lp_table=lp.table(),
        ce_table=ce.table(),
        tables_equal=tables_equal,
        passed=not mismatches and tables_equal,
    )
