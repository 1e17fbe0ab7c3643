"""Exact integer polynomial arithmetic.

Polynomials are immutable tuples of arbitrary-precision integer coefficients
in ascending degree order; the zero polynomial has an empty coefficient
tuple.  Everything here is exact: no floating point enters any decision.
"""

from __future__ import annotations

import functools
import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from ..errors import PolynomialParseError

Rational = Union[int, Fraction]


class IntPolynomial:
    """An integer polynomial c_0 + c_1 x + ... + c_d x^d."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        if any(not isinstance(c, int) for c in cs):
            raise TypeError("IntPolynomial requires integer coefficients")
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("IntPolynomial is immutable")

    # -- basic structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if self.is_zero:
            return 0
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x: Rational) -> Rational:
        acc: Rational = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_interval(self, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        """Exact interval Horner: encloses p([lo, hi])."""
        alo: Fraction = Fraction(0)
        ahi: Fraction = Fraction(0)
        for c in reversed(self.coeffs):
            p1, p2, p3, p4 = alo * lo, alo * hi, ahi * lo, ahi * hi
            alo = min(p1, p2, p3, p4) + c
            ahi = max(p1, p2, p3, p4) + c
        return alo, ahi

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPolynomial([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial([-c for c in self.coeffs])

    def __mul__(self, other) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial([c * other for c in self.coeffs])
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return ZERO
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def shift_up(self, k: int) -> IntPolynomial:
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return IntPolynomial((0,) * k + self.coeffs)

    def derivative(self) -> IntPolynomial:
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    # -- division -----------------------------------------------------------

    def try_divide(self, divisor: IntPolynomial) -> IntPolynomial | None:
        """Exact quotient over the integers, or None if it does not divide."""
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero:
            return ZERO
        if divisor.degree > self.degree:
            return None
        rem = list(self.coeffs)
        lead = divisor.leading
        q = [0] * (self.degree - divisor.degree + 1)
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + divisor.degree]
            if c % lead != 0:
                return None
            f = c // lead
            q[k] = f
            if f:
                for j, d in enumerate(divisor.coeffs):
                    rem[k + j] -= f * d
        if any(rem):
            return None
        return IntPolynomial(q)

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> IntPolynomial:
        """Divide out the content; the sign of the leading coefficient is kept."""
        if self.is_zero:
            return self
        c = self.content()
        return IntPolynomial([k // c for k in self.coeffs])

    def normalized(self) -> IntPolynomial:
        """Primitive part with positive leading coefficient."""
        p = self.primitive()
        return -p if p.leading < 0 else p

    def gcd(self, other: IntPolynomial) -> IntPolynomial:
        """Primitive gcd over Z, normalized to positive leading coefficient."""
        a, b = self, other
        if a.is_zero:
            return b.normalized()
        if b.is_zero:
            return a.normalized()
        fa = [Fraction(c) for c in a.coeffs]
        fb = [Fraction(c) for c in b.coeffs]
        while fb:
            fa, fb = fb, _frac_rem(fa, fb)
        return _from_fractions(fa).normalized()

    def square_free_part(self) -> IntPolynomial:
        """p / gcd(p, p'), normalized: same roots, all simple."""
        if self.degree <= 1:
            return self.normalized()
        g = self.gcd(self.derivative())
        if g.degree == 0:
            return self.normalized()
        q = _frac_div_exact([Fraction(c) for c in self.coeffs],
                            [Fraction(c) for c in g.coeffs])
        return _from_fractions(q).normalized()

    def root_bound(self) -> int:
        """Integer Cauchy bound: all real roots lie in (-B, B)."""
        if self.degree < 1:
            return 1
        lead = abs(self.leading)
        m = max(abs(c) for c in self.coeffs[:-1])
        return 1 + (m + lead - 1) // lead


ZERO = IntPolynomial(())
ONE = IntPolynomial((1,))
X = IntPolynomial((0, 1))


def monomial(k: int, c: int = 1) -> IntPolynomial:
    return IntPolynomial((0,) * k + (c,))


# -- Fraction-coefficient helpers (internal) ---------------------------------

def _frac_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Remainder of a mod b over Q, coefficients ascending."""
    r = list(a)
    db, lead = len(b) - 1, b[-1]
    while len(r) - 1 >= db and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        f = r[-1] / lead
        k = len(r) - 1 - db
        for j, c in enumerate(b):
            r[k + j] -= f * c
        r.pop()
    while r and r[-1] == 0:
        r.pop()
    return r


def _frac_div_exact(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Exact quotient a / b over Q; raises if the division is not exact."""
    r = list(a)
    db, lead = len(b) - 1, b[-1]
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        f = r[k + db] / lead
        q[k] = f
        if f:
            for j, c in enumerate(b):
                r[k + j] -= f * c
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return q


def _from_fractions(fs: Sequence[Fraction]) -> IntPolynomial:
    if not fs:
        return ZERO
    den = 1
    for f in fs:
        den = den * f.denominator // math.gcd(den, f.denominator)
    return IntPolynomial([int(f * den) for f in fs])


# -- cyclotomic polynomials ---------------------------------------------------

@functools.lru_cache(maxsize=None)
def cyclotomic(k: int) -> IntPolynomial:
    """The k-th cyclotomic polynomial, by exact division of x^k - 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    num = IntPolynomial((-1,) + (0,) * (k - 1) + (1,))
    for d in range(1, k):
        if k % d == 0:
            q = num.try_divide(cyclotomic(d))
            assert q is not None
            num = q
    return num


def euler_phi(k: int) -> int:
    result, n, p = k, k, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def cyclotomic_strip(p: IntPolynomial) -> IntPolynomial:
    """Divide out every cyclotomic factor Phi_k with phi(k) <= deg p,
    repeatedly, returning the cyclotomic-free cofactor."""
    if p.is_zero:
        raise ValueError("cannot strip the zero polynomial")
    cur = p
    changed = True
    while changed and cur.degree >= 1:
        changed = False
        d = cur.degree
        # phi(k) >= sqrt(k/2), so phi(k) <= d forces k <= 2 d^2.
        for k in range(1, 2 * d * d + 2):
            if euler_phi(k) > d:
                continue
            while True:
                q = cur.try_divide(cyclotomic(k))
                if q is None or q.is_zero:
                    break
                cur = q
                changed = True
            if cur.degree < 1:
                break
    return cur


# -- text format --------------------------------------------------------------

_TERM_RE = re.compile(
    r"""(?P<sign>[+-]?)\s*
        (?:
            (?P<coeff>\d+)\s*(?:\*\s*)?(?P<var1>x)(?:\s*\^\s*(?P<exp1>\d+))?
          | (?P<var2>x)(?:\s*\^\s*(?P<exp2>\d+))?
          | (?P<const>\d+)
        )\s*""",
    re.VERBOSE,
)


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse either human form ("x^5-2*x^4+x^3-x^2+x-1", '*' optional) or an
    ascending coefficient list ("[-1,1,-1,1,-2,1]")."""
    s = text.strip()
    if not s:
        raise PolynomialParseError("empty polynomial")
    if s.startswith("["):
        if not s.endswith("]"):
            raise PolynomialParseError(f"unterminated coefficient list: {text!r}")
        body = s[1:-1].strip()
        if not body:
            return ZERO
        try:
            return IntPolynomial(int(t.strip()) for t in body.split(","))
        except ValueError as exc:
            raise PolynomialParseError(f"bad coefficient list: {text!r}") from exc
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or m.end() == pos:
            raise PolynomialParseError(f"cannot parse polynomial near {s[pos:]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("const") is not None:
            k, c = 0, int(m.group("const"))
        elif m.group("var2") is not None:
            k = int(m.group("exp2")) if m.group("exp2") else 1
            c = 1
        else:
            k = int(m.group("exp1")) if m.group("exp1") else 1
            c = int(m.group("coeff"))
        coeffs[k] = coeffs.get(k, 0) + sign * c
        pos = m.end()
    if not coeffs:
        raise PolynomialParseError(f"cannot parse polynomial: {text!r}")
    deg = max(coeffs)
    return IntPolynomial([coeffs.get(i, 0) for i in range(deg + 1)])


def format_polynomial(p: IntPolynomial) -> str:
    """Human form, descending powers: "x^5-2*x^4+x^3-x^2+x-1"."""
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            var = "x" if k == 1 else f"x^{k}"
            body = var if a == 1 else f"{a}*{var}"
        parts.append(sign + body)
    return "".join(parts)
