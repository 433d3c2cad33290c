"""Constant-coefficient symplectic structures and the Poisson calculus they induce.

A ``ConstantSymplectic`` is a closed 2-form with constant rational
coefficients, in one of two kinds:

- ``standard()``: the countable pairing sum_i dx_{2i} ^ dx_{2i+1}, never
  materialized as a whole; each computation touches a finite block and the
  pairing is expanded lazily over it.
- ``explicit(indices, matrix)``: an antisymmetric rational matrix on a
  finite index block.  The matrix must be invertible on its block (checked
  eagerly); coordinates outside the block are simply unpaired.

Musical conventions, fixed once:

- ``flat(w, X) = interior(X, w)``;
- ``sharp(w, a)`` is the unique X with ``interior(X, w) = -a`` (equivalently
  X = W^{-1} a in matrix form), so ``flat(sharp(a)) = -a``;
- ``hamiltonian_vf(w, f) = sharp(w, d f)``;
- ``poisson_bracket(w, f, g) = w(X_f, X_g)``.

``sharp`` is strict: it raises NotInvertible when the 1-form touches an
unpaired coordinate.  ``bivector_sharp`` is the induced Poisson bivector's
anchor: identical on the paired block, zero on unpaired coordinates.  The
Poisson-side machinery (cotangent brackets, contravariant differentials,
Casimir and cohomology computations) goes through ``bivector_sharp`` so
degenerate blocks still carry their Poisson calculus.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from algebroid import linalg
from algebroid.errors import GradeError, NotInvertible
from algebroid.exterior import KForm, KVector, de_rham, interior_product, lie_derivative
from algebroid.poly import Poly


def _invert_antisymmetric(matrix):
    """Inverse of a square Fraction matrix, or None when singular."""
    n = len(matrix)
    work = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    row = 0
    for col in range(n):
        pivot = next((i for i in range(row, n) if work[i][col]), None)
        if pivot is None:
            return None
        work[row], work[pivot] = work[pivot], work[row]
        scale = work[row][col]
        work[row] = [value / scale for value in work[row]]
        for i in range(n):
            if i != row and work[i][col]:
                factor = work[i][col]
                work[i] = [a - factor * b for a, b in zip(work[i], work[row])]
        row += 1
    return [line[n:] for line in work]


class ConstantSymplectic:
    """A constant closed 2-form, standard pairing or explicit block."""

    __slots__ = ("kind", "block", "matrix", "inverse", "_columns")

    def __init__(self, kind, block=None, matrix=None, inverse=None):
        self.kind = kind
        self.block = block
        self.matrix = matrix
        self.inverse = inverse
        self._columns = None

    @classmethod
    def standard(cls) -> "ConstantSymplectic":
        return cls("standard")

    @classmethod
    def explicit(cls, indices, matrix) -> "ConstantSymplectic":
        block = tuple(sorted(indices))
        if len(set(block)) != len(block):
            raise ValueError("explicit block indices must be distinct")
        if any(i < 0 for i in block):
            raise ValueError("coordinate indices are natural numbers")
        n = len(block)
        rows = [[Fraction(value) for value in row] for row in matrix]
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError("matrix shape must match the block")
        for i in range(n):
            if rows[i][i]:
                raise ValueError("matrix must have a zero diagonal")
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError("matrix must be antisymmetric")
        if n == 0:
            return cls("explicit", block, rows, [])
        inverse = _invert_antisymmetric(rows)
        if inverse is None:
            kernel = linalg.nullspace(rows, n)
            witness = KVector(
                1, {(block[i],): Fraction(v) for i, v in enumerate(kernel[0]) if v}
            )
            error = NotInvertible(
                f"the matrix is singular on its block; kernel contains {witness}"
            )
            error.witness = witness
            raise error
        return cls("explicit", block, rows, inverse)

    # -- entries and pairing ------------------------------------------------

    def entry(self, i: int, j: int) -> Fraction:
        """The coefficient w(e_i, e_j)."""
        if self.kind == "standard":
            if j == i + 1 and i % 2 == 0:
                return Fraction(1)
            if j == i - 1 and i % 2 == 1:
                return Fraction(-1)
            return Fraction(0)
        try:
            a = self.block.index(i)
            b = self.block.index(j)
        except ValueError:
            return Fraction(0)
        return self.matrix[a][b]

    def partner(self, i: int):
        """The index paired with i, or None when i is unpaired."""
        if self.kind == "standard":
            return i ^ 1
        return i if i in self.block else None

    def closure(self, indices) -> tuple:
        """Smallest index set containing ``indices`` and closed under pairing."""
        out = set(indices)
        if self.kind == "standard":
            out |= {i ^ 1 for i in out}
        else:
            out |= set(self.block)
        return tuple(sorted(out))

    def is_closed_support(self, indices) -> bool:
        indices = set(indices)
        if self.kind == "standard":
            return all(i ^ 1 in indices for i in indices)
        return set(self.block) <= indices

    def paired_indices(self, indices):
        """The subset of ``indices`` on which the form is nondegenerate."""
        if self.kind == "standard":
            return tuple(sorted(set(indices) | {i ^ 1 for i in indices}))
        return self.block

    def materialize(self, cover) -> KForm:
        """The 2-form as a KForm, restricted to blades meeting ``cover``."""
        terms = {}
        if self.kind == "standard":
            pairs = sorted({i // 2 for i in cover})
            for p in pairs:
                terms[(2 * p, 2 * p + 1)] = Poly.one()
        else:
            n = len(self.block)
            for a in range(n):
                for b in range(a + 1, n):
                    if self.matrix[a][b]:
                        terms[(self.block[a], self.block[b])] = Poly.constant(
                            self.matrix[a][b]
                        )
        return KForm(2, terms)

    def sharp_components(self, j: int):
        """Components of sharp(dx_j) as [(index, Fraction)], or None if unpaired."""
        if self.kind == "standard":
            return [(j + 1, Fraction(1))] if j % 2 == 0 else [(j - 1, Fraction(-1))]
        if j not in self.block:
            return None
        if self._columns is None:
            self._columns = {}
        cached = self._columns.get(j)
        if cached is None:
            col = self.block.index(j)
            cached = [
                (self.block[a], self.inverse[a][col])
                for a in range(len(self.block))
                if self.inverse[a][col]
            ]
            self._columns[j] = cached
        return cached

    def __repr__(self):
        if self.kind == "standard":
            return "ConstantSymplectic(standard)"
        return f"ConstantSymplectic(explicit, block={self.block})"


def _check_oneform(value, what):
    if type(value) is not KForm or value.grade != 1:
        raise GradeError(f"{what} must be a grade-1 KForm")


def _check_vector(value, what):
    if type(value) is not KVector or value.grade != 1:
        raise GradeError(f"{what} must be a grade-1 KVector")


def flat(w: ConstantSymplectic, field: KVector) -> KForm:
    """flat(X) = interior(X, w)."""
    _check_vector(field, "flat's argument")
    terms = {}
    for (i,), component in field.terms.items():
        if w.kind == "standard":
            images = [(i + 1, Fraction(1))] if i % 2 == 0 else [(i - 1, Fraction(-1))]
        else:
            if i not in w.block:
                continue
            a = w.block.index(i)
            images = [
                (w.block[b], w.matrix[a][b])
                for b in range(len(w.block))
                if w.matrix[a][b]
            ]
        for target, scale in images:
            acc = terms.get((target,), Poly.zero()) + component * scale
            if acc.is_zero():
                terms.pop((target,), None)
            else:
                terms[(target,)] = acc
    return KForm(1, terms)


def _sharp_with(w, oneform, lenient):
    terms = {}
    for (j,), component in oneform.terms.items():
        images = w.sharp_components(j)
        if images is None:
            if lenient:
                continue
            error = NotInvertible(
                f"the 2-form is singular on the needed support: dx[{j}] is unpaired"
            )
            error.witness = j
            raise error
        for target, scale in images:
            acc = terms.get((target,), Poly.zero()) + component * scale
            if acc.is_zero():
                terms.pop((target,), None)
            else:
                terms[(target,)] = acc
    return KVector(1, terms)


def sharp(w: ConstantSymplectic, oneform: KForm) -> KVector:
    """The unique X with interior(X, w) = -a; raises NotInvertible off the block."""
    _check_oneform(oneform, "sharp's argument")
    return _sharp_with(w, oneform, lenient=False)


def bivector_sharp(w: ConstantSymplectic, oneform: KForm) -> KVector:
    """The Poisson bivector's anchor: sharp on the block, zero on unpaired indices."""
    _check_oneform(oneform, "bivector_sharp's argument")
    return _sharp_with(w, oneform, lenient=True)


def hamiltonian_vf(w: ConstantSymplectic, function: Poly) -> KVector:
    """X_f = sharp(d f)."""
    return sharp(w, de_rham(function))


def poisson_bracket(w: ConstantSymplectic, f: Poly, g: Poly) -> Poly:
    """{f, g} = w(X_f, X_g), evaluated on the materialized 2-form."""
    xf = hamiltonian_vf(w, f)
    xg = hamiltonian_vf(w, g)
    cover = sorted(xf.support() | xg.support())
    return w.materialize(cover).evaluate(xf, xg)


def induced_pairing(w: ConstantSymplectic, a: KForm, b: KForm) -> Poly:
    """The pairing b(sharp(a)) of 1-forms induced by the 2-form."""
    _check_oneform(a, "induced_pairing's first argument")
    _check_oneform(b, "induced_pairing's second argument")
    return b.evaluate(sharp(w, a))


def _koszul_bracket(w, a, b, lenient):
    xa = _sharp_with(w, a, lenient)
    xb = _sharp_with(w, b, lenient)
    pairing = b.evaluate(xa)
    return lie_derivative(xa, b) - lie_derivative(xb, a) - de_rham(pairing)


def oneform_bracket(w: ConstantSymplectic, a: KForm, b: KForm) -> KForm:
    """{a, b} = L_{sharp a} b - L_{sharp b} a - d(pairing(a, b))."""
    _check_oneform(a, "oneform_bracket's first argument")
    _check_oneform(b, "oneform_bracket's second argument")
    return _koszul_bracket(w, a, b, lenient=False)


def poisson_oneform_bracket(w: ConstantSymplectic, a: KForm, b: KForm) -> KForm:
    """The Koszul bracket through the Poisson bivector (defined off the block too)."""
    _check_oneform(a, "poisson_oneform_bracket's first argument")
    _check_oneform(b, "poisson_oneform_bracket's second argument")
    return _koszul_bracket(w, a, b, lenient=True)


@dataclass
class WeakSymplecticReport:
    """Outcome of check_weak_symplectic."""

    passed: bool
    closed: bool
    closed_witness: object  # KForm of grade 3, or None
    injective: bool
    injective_witness: object  # KVector of grade 1, or None
    rank: int
    dimension: int
    generic: bool
    caveats: list


def check_weak_symplectic(target, support) -> WeakSymplecticReport:
    """Check closedness and injectivity of flat over a finite support.

    ``target`` is a ConstantSymplectic or a grade-2 KForm.  Injectivity is
    of the map X -> interior(X, target) restricted to fields spanned by the
    support coordinates; the matrix may have polynomial entries, in which
    case the rank is the generic one and the non-constant pivots are
    reported as caveats.
    """
    support = tuple(sorted(set(support)))
    if isinstance(target, ConstantSymplectic):
        form = target.materialize(support)
        columns = sorted(set(support) | set(target.closure(support)))
    else:
        if type(target) is not KForm or target.grade != 2:
            raise GradeError("check_weak_symplectic needs a grade-2 KForm")
        form = target
        columns = sorted(set(support) | form.support())

    closed_defect = de_rham(form)
    closed = closed_defect.is_zero()

    # Row i of the matrix holds the components of interior(e_i, form).
    rows = []
    for i in support:
        image = interior_product(KVector.coordinate(i), form)
        rows.append([image.coefficient((j,)) for j in columns])
    n = len(support)
    m = len(columns)
    if n == 0:
        rank_ = 0
        caveats = []
        kernel = []
    else:
        rank_, pivot_entries = linalg.rank_generic(rows, m)
        caveats = [p for p in pivot_entries if not p.is_constant()]
        kernel = [] if rank_ == n else _row_kernel_witness(rows, n, m)
    injective = rank_ == n
    witness = None
    if not injective and kernel:
        witness = KVector(
            1, {(support[i],): kernel[0][i] for i in range(n) if not kernel[0][i].is_zero()}
        )
    return WeakSymplecticReport(
        passed=closed and injective,
        closed=closed,
        closed_witness=None if closed else closed_defect,
        injective=injective,
        injective_witness=witness,
        rank=rank_,
        dimension=n,
        generic=bool(caveats),
        caveats=caveats,
    )


def _row_kernel_witness(rows, n, m):
    """Left-kernel vectors of an n-by-m Poly matrix (kernel of the transpose)."""
    transposed = [[rows[i][j] for i in range(n)] for j in range(m)]
    return linalg.nullspace_generic(transposed, n)
