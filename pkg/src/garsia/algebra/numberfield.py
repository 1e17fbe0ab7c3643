"""Arithmetic in Q[x]/(p(x)) for a monic integer modulus.

Elements are integer coefficient vectors of length deg(p) with a single
positive denominator, kept in lowest terms; reduction, products and
inverses are exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Union

from ..errors import ModulusMismatchError
from .polynomials import IntPolynomial, Rational
from .precision import PrecisionContext
from .roots import AlgebraicReal


class NumberField:
    """Q[x]/(p) with p monic; the container for FieldElement arithmetic."""

    __slots__ = ("modulus", "degree")

    def __init__(self, modulus: IntPolynomial):
        if not modulus.is_monic:
            raise ValueError(f"modulus must be monic, got {modulus}")
        if modulus.degree < 1:
            raise ValueError("modulus must have degree >= 1")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "degree", modulus.degree)

    def __setattr__(self, name, value):
        raise AttributeError("NumberField is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(("NumberField", self.modulus))

    def __repr__(self) -> str:
        return f"NumberField({self.modulus})"

    def reduce_coeffs(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        """Exact remainder mod the monic modulus, padded to length d."""
        d = self.degree
        rem = list(coeffs)
        mod = self.modulus.coeffs
        for k in range(len(rem) - 1, d - 1, -1):
            f = rem[k]
            if f:
                rem[k] = 0
                for j in range(d):
                    rem[k - d + j] -= f * mod[j]
        rem = rem[:d]
        return tuple(rem) + (0,) * (d - len(rem))

    def element(self, coeffs: Sequence[int], den: int = 1) -> FieldElement:
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        cs = self.reduce_coeffs(list(coeffs))
        if den < 0:
            cs, den = tuple(-c for c in cs), -den
        g = math.gcd(den, *cs) if any(cs) else den
        if g > 1:
            cs = tuple(c // g for c in cs)
            den //= g
        if not any(cs):
            den = 1
        return FieldElement(self, cs, den)

    def from_int_polynomial(self, q: IntPolynomial) -> FieldElement:
        return self.element(q.coeffs)

    def from_rational(self, r: Rational) -> FieldElement:
        r = Fraction(r)
        return self.element((r.numerator,) + (0,) * (self.degree - 1),
                            r.denominator)

    @property
    def zero(self) -> FieldElement:
        return self.element((0,))

    @property
    def one(self) -> FieldElement:
        return self.element((1,))

    @property
    def generator(self) -> FieldElement:
        """The class of x, i.e. beta itself."""
        return self.element((0, 1))


class FieldElement:
    """(c_0 + c_1 x + ... + c_{d-1} x^{d-1}) / den, canonical form."""

    __slots__ = ("field", "coeffs", "den")

    def __init__(self, field: NumberField, coeffs: tuple[int, ...], den: int):
        # canonicalization lives in NumberField.element
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.field == other.field and self.den == other.den
                and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((self.coeffs, self.den))

    def numerator_poly(self) -> IntPolynomial:
        return IntPolynomial(self.coeffs)

    def as_fraction(self) -> Fraction:
        """The exact rational value, if the element is a constant."""
        if any(self.coeffs[1:]):
            raise ValueError(f"{self} is not rational")
        return Fraction(self.coeffs[0], self.den)

    def __repr__(self) -> str:
        num = str(self.numerator_poly()) if not self.is_zero else "0"
        return num if self.den == 1 else f"({num})/{self.den}"

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ModulusMismatchError("elements from different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __add__(self, other) -> FieldElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        da, db = self.den, other.den
        cs = [a * db + b * da for a, b in zip(self.coeffs, other.coeffs)]
        return self.field.element(cs, da * db)

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, tuple(-c for c in self.coeffs), self.den)

    def __sub__(self, other) -> FieldElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> FieldElement:
        return (-self) + other

    def __mul__(self, other) -> FieldElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prod = [0] * (2 * self.field.degree - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return self.field.element(prod, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        """Multiplicative inverse via the extended Euclidean algorithm over Q.

        Raises ZeroDivisionError for zero or (with a reducible modulus) for a
        zero divisor.
        """
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero field element")
        r0 = _trim([Fraction(c) for c in self.field.modulus.coeffs])
        r1 = _trim([Fraction(c) for c in self.coeffs])
        t0: list[Fraction] = []
        t1: list[Fraction] = [Fraction(1)]
        while len(r1) > 1:
            q, r = _frac_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _frac_sub(t0, _frac_mul(q, t1))
            if not r1:
                raise ZeroDivisionError(
                    f"{self} is a zero divisor mod {self.field.modulus}")
        c = r1[0]
        inv = [t / c for t in t1]
        den = 1
        for f in inv:
            den = den * f.denominator // math.gcd(den, f.denominator)
        return self.field.element([int(f * den) for f in inv], den) * self.den

    def __truediv__(self, other) -> FieldElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> FieldElement:
        return self.inverse() * other

    def __pow__(self, k: int) -> FieldElement:
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.field.one
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def sign_at(self, beta: AlgebraicReal,
                precision: PrecisionContext | None = None) -> int:
        return element_sign(self, beta, precision)

    def eval_interval(self, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        nlo, nhi = self.numerator_poly().eval_interval(lo, hi)
        return nlo / self.den, nhi / self.den


def _trim(f: list[Fraction]) -> list[Fraction]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _frac_divmod(a: list[Fraction], b: list[Fraction]):
    """(quotient, remainder) for trimmed coefficient lists, b nonzero."""
    r = list(a)
    db, lead = len(b) - 1, b[-1]
    q = [Fraction(0)] * max(0, len(r) - db)
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        f = r[-1] / lead
        q[k] = f
        for j in range(db + 1):
            r[k + j] -= f * b[j]
        r.pop()
        _trim(r)
    return q, r


def _frac_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _frac_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    out = [x - y for x, y in zip(a, b)]
    while out and out[-1] == 0:
        out.pop()
    return out


def field_reduce(q: IntPolynomial, p: IntPolynomial) -> FieldElement:
    """Canonical remainder of q modulo the monic modulus p."""
    return NumberField(p).from_int_polynomial(q)


def element_sign(e: FieldElement, beta: AlgebraicReal,
                 precision: PrecisionContext | None = None) -> int:
    """Exact sign of e evaluated at beta.

    Requires beta's defining polynomial to equal the modulus of e.  Zero is
    decided exactly; for an irreducible modulus this coincides with the
    canonical form being zero.
    """
    if beta.poly != e.field.modulus:
        raise ModulusMismatchError(
            f"beta is a root of {beta.poly}, element lives mod {e.field.modulus}")
    if e.is_zero:
        return 0
    return beta.sign_of_poly(e.numerator_poly(), precision)
