"""Sparse multivariate polynomials over the exact rationals.

The coordinate arena is countable: variables are indexed by natural numbers
and rendered ``x0, x1, x2, ...``.  A monomial is a tuple of
``(variable, exponent)`` pairs, strictly increasing in the variable index,
with every exponent >= 1; the empty tuple is the constant monomial.  A
polynomial maps monomials to nonzero ``fractions.Fraction`` coefficients.
Zero coefficients are never stored, so every value is a canonical form and
``==`` is exact structural equality.  Any single polynomial touches only
finitely many variables even though the arena is unbounded.

Instances are treated as immutable: no method mutates ``self``, and callers
must not poke at ``terms`` in place.
"""

from __future__ import annotations

from fractions import Fraction

# (variable index, exponent) pairs, strictly increasing, exponents >= 1.
Monomial = tuple

CONSTANT_MONOMIAL = ()


def monomial_degree(mono) -> int:
    return sum(e for _, e in mono)


def monomial_mul(a, b):
    """Merge two monomials, adding exponents of shared variables."""
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va < vb:
            out.append(a[i])
            i += 1
        elif vb < va:
            out.append(b[j])
            j += 1
        else:
            out.append((va, ea + eb))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def monomial_div(a, b):
    """Return a/b as a monomial, or None when b does not divide a."""
    if not b:
        return a
    quot = []
    i = 0
    for vb, eb in b:
        while i < len(a) and a[i][0] < vb:
            quot.append(a[i])
            i += 1
        if i == len(a) or a[i][0] != vb or a[i][1] < eb:
            return None
        left = a[i][1] - eb
        if left:
            quot.append((vb, left))
        i += 1
    quot.extend(a[i:])
    return tuple(quot)


def monomial_key(mono):
    """Canonical display order: total degree first, then the pair tuple.

    This is the order of ``sorted_terms`` and of the renderer.  It is a
    total order but not a monomial order (it is not compatible with
    multiplication), so division must not use it; see
    ``monomial_division_key``.
    """
    return (monomial_degree(mono), mono)


def monomial_division_key(mono):
    """True graded-lex order (x0 > x1 > ...), compatible with multiplication.

    Ties in total degree are broken by the exponent vector read
    lexicographically from the lowest variable index; encoding each pair as
    ``(-variable, exponent)`` makes plain tuple comparison implement exactly
    that.  ``exact_div`` relies on this key: a leading term chosen by a
    non-multiplicative order need not stay leading inside products, which
    derails long division on exactly divisible inputs.
    """
    return (monomial_degree(mono), tuple((-v, e) for v, e in mono))


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an int or Fraction coefficient, got {value!r}")


class Poly:
    """A polynomial with exact rational coefficients.

    >>> p = Poly.variable(0) + 1
    >>> q = Poly.variable(0) - 1
    >>> str(p * q)
    '-1 + x0^2'
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        cleaned = {}
        if terms:
            for mono, coeff in dict(terms).items():
                coeff = _as_fraction(coeff)
                if not coeff:
                    continue
                mono = tuple(mono)
                last = -1
                for var, exp in mono:
                    if var <= last or exp < 1:
                        raise ValueError(f"malformed monomial {mono!r}")
                    last = var
                cleaned[mono] = coeff
        self.terms = cleaned

    @classmethod
    def _raw(cls, terms):
        # Internal fast path: terms already canonical, zeros already stripped.
        self = object.__new__(cls)
        self.terms = terms
        return self

    @classmethod
    def zero(cls) -> "Poly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "Poly":
        return cls._raw({CONSTANT_MONOMIAL: Fraction(1)})

    @classmethod
    def constant(cls, value) -> "Poly":
        value = _as_fraction(value)
        return cls._raw({CONSTANT_MONOMIAL: value} if value else {})

    @classmethod
    def variable(cls, index: int, power: int = 1) -> "Poly":
        if index < 0:
            raise ValueError("variable indices are natural numbers")
        if power < 0:
            raise ValueError("negative powers are not representable")
        if power == 0:
            return cls.one()
        return cls._raw({((index, power),): Fraction(1)})

    # -- predicates ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {CONSTANT_MONOMIAL}

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.constant(other).terms
        return NotImplemented

    __hash__ = None

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        merged = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = merged.get(mono)
            if acc is None:
                merged[mono] = coeff
            else:
                acc = acc + coeff
                if acc:
                    merged[mono] = acc
                else:
                    del merged[mono]
        return Poly._raw(merged)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            coeff = _as_fraction(other)
            if not coeff:
                return Poly.zero()
            return Poly._raw({m: c * coeff for m, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = monomial_mul(ma, mb)
                acc = out.get(mono)
                if acc is None:
                    out[mono] = ca * cb
                else:
                    acc = acc + ca * cb
                    if acc:
                        out[mono] = acc
                    else:
                        del out[mono]
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only nonnegative integer powers are defined")
        result = Poly.one()
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus and structure ------------------------------------------

    def partial(self, index: int) -> "Poly":
        """Partial derivative with respect to x<index>."""
        out = {}
        for mono, coeff in self.terms.items():
            for pos, (var, exp) in enumerate(mono):
                if var != index:
                    continue
                if exp == 1:
                    new = mono[:pos] + mono[pos + 1 :]
                else:
                    new = mono[:pos] + ((var, exp - 1),) + mono[pos + 1 :]
                out[new] = out.get(new, Fraction(0)) + coeff * exp
                break
        return Poly._raw({m: c for m, c in out.items() if c})

    def variables(self) -> set:
        seen = set()
        for mono in self.terms:
            for var, _ in mono:
                seen.add(var)
        return seen

    def total_degree(self) -> int:
        """Largest total degree among the terms (0 for the zero polynomial)."""
        if not self.terms:
            return 0
        return max(monomial_degree(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(CONSTANT_MONOMIAL, Fraction(0))

    def coefficient(self, mono) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def sorted_terms(self):
        """Terms in the canonical (graded-lex ascending) order."""
        return sorted(self.terms.items(), key=lambda item: monomial_key(item[0]))

    def leading(self):
        """The greatest term under the division order, as (monomial, coefficient)."""
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        mono = max(self.terms, key=monomial_division_key)
        return mono, self.terms[mono]

    def exact_div(self, divisor: "Poly") -> "Poly":
        """Exact quotient self/divisor; raises ValueError when not divisible."""
        if not isinstance(divisor, Poly) or divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = dict(self.terms)
        quot = {}
        dmono, dcoeff = divisor.leading()
        while rem:
            mono = max(rem, key=monomial_division_key)
            qmono = monomial_div(mono, dmono)
            if qmono is None:
                raise ValueError("polynomials do not divide exactly")
            qcoeff = rem[mono] / dcoeff
            quot[qmono] = qcoeff
            for m2, c2 in divisor.terms.items():
                target = monomial_mul(qmono, m2)
                acc = rem.get(target, Fraction(0)) - qcoeff * c2
                if acc:
                    rem[target] = acc
                else:
                    rem.pop(target, None)
        return Poly._raw(quot)

    # -- rendering ---------------------------------------------------------

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"Poly({render_poly(self)})"


def render_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _render_monomial(mono) -> str:
    parts = []
    for var, exp in mono:
        parts.append(f"x{var}" if exp == 1 else f"x{var}^{exp}")
    return "*".join(parts)


def render_poly(poly: Poly) -> str:
    """Canonical rendering, terms in graded-lex ascending order.

    The output reparses to an equal polynomial under the model grammar.
    """
    if poly.is_zero():
        return "0"
    pieces = []
    for mono, coeff in poly.sorted_terms():
        magnitude = abs(coeff)
        if not mono:
            body = render_fraction(magnitude)
        elif magnitude == 1:
            body = _render_monomial(mono)
        else:
            body = render_fraction(magnitude) + "*" + _render_monomial(mono)
        pieces.append((coeff < 0, body))
    first_negative, first_body = pieces[0]
    text = ("-" if first_negative else "") + first_body
    for negative, body in pieces[1:]:
        text += (" - " if negative else " + ") + body
    return text
