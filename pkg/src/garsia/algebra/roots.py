"""Real root isolation and exact real algebraic numbers.

The toolkit is Sturm sequences with rational bisection, so every decision
(root counting, ordering, equality, signs of polynomial values at an
algebraic point) is exact.  Rational roots are detected at construction and
collapse to degenerate intervals, which keeps every non-degenerate
``AlgebraicReal`` provably irrational; several termination arguments below
rely on that.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Sequence, Union

import mpmath

from ..errors import IndeterminateError
from .polynomials import IntPolynomial, Rational, _from_fractions
from .precision import DEFAULT_PRECISION, PrecisionContext

_NEG_INF = object()
_POS_INF = object()


@functools.lru_cache(maxsize=512)
def sturm_chain(coeffs: tuple[int, ...]) -> tuple[IntPolynomial, ...]:
    """Canonical Sturm chain of a square-free polynomial.

    Remainders are computed over Q and rescaled to primitive integer
    polynomials by a positive rational, which preserves all signs.
    """
    p = IntPolynomial(coeffs)
    chain = [p, p.derivative()]
    while not chain[-1].is_zero and chain[-1].degree > 0:
        fa = [Fraction(c) for c in chain[-2].coeffs]
        fb = [Fraction(c) for c in chain[-1].coeffs]
        r = _frac_rem_signed(fa, fb)
        if not r:
            break
        chain.append(-_from_fractions(r).primitive())
    if chain[-1].is_zero:
        chain.pop()
    return tuple(chain)


def _frac_rem_signed(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    r = list(a)
    db, lead = len(b) - 1, b[-1]
    while True:
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            return r
        f = r[-1] / lead
        k = len(r) - 1 - db
        for j, c in enumerate(b):
            r[k + j] -= f * c
        r.pop()


def _sign_at(p: IntPolynomial, x) -> int:
    if x is _NEG_INF:
        s = 1 if p.leading > 0 else -1 if p.leading < 0 else 0
        return s if p.degree % 2 == 0 else -s
    if x is _POS_INF:
        return 1 if p.leading > 0 else -1 if p.leading < 0 else 0
    v = p(x)
    return (v > 0) - (v < 0)


def sign_variations(chain: Sequence[IntPolynomial], x) -> int:
    signs = [s for s in (_sign_at(p, x) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_halfopen(chain: Sequence[IntPolynomial], a, b) -> int:
    """Number of distinct real roots in (a, b]; a, b rational or +/-inf."""
    return sign_variations(chain, a) - sign_variations(chain, b)


def count_roots_open(chain: Sequence[IntPolynomial], a, b) -> int:
    n = count_roots_halfopen(chain, a, b)
    if b is not _POS_INF and chain[0](b) == 0:
        n -= 1
    return n


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return out


def _rational_roots(g: IntPolynomial) -> list[Fraction]:
    """All rational roots of g (exact, via the rational root theorem)."""
    if g.degree < 1:
        return []
    roots = []
    coeffs = g.coeffs
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
    c0, lead = coeffs[k], g.leading
    for q in _divisors(lead):
        for p in _divisors(c0):
            for r in (Fraction(p, q), Fraction(-p, q)):
                if g(r) == 0 and r not in roots:
                    roots.append(r)
    return sorted(roots)


class AlgebraicReal:
    """A real algebraic number: square-free integer polynomial plus an
    isolating rational interval with exactly one root inside.

    The enclosure only ever shrinks (nested refinement); the number itself is
    immutable.  Rational values are stored with a degenerate interval.
    """

    __slots__ = ("poly", "_lo", "_hi", "_slo")

    def __init__(self, poly: IntPolynomial, lo: Fraction, hi: Fraction,
                 _certified: bool = False):
        poly = poly.normalized()
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("empty isolating interval")
        if lo == hi:
            if poly(lo) != 0:
                raise ValueError("degenerate interval must sit on a root")
            slo = 0
        else:
            if not _certified:
                chain = sturm_chain(poly.coeffs)
                if count_roots_halfopen(chain, lo, hi) != 1 or poly(hi) == 0:
                    raise ValueError("interval does not isolate one interior root")
                r = next((r for r in _rational_roots(poly) if lo < r < hi), None)
                if r is not None:
                    lo = hi = r
            slo = _sign_at(poly, lo)
            if lo != hi and (slo == 0 or _sign_at(poly, hi) == slo):
                raise ValueError("isolating interval endpoints must bracket by sign")
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "_lo", lo)
        object.__setattr__(self, "_hi", hi)
        object.__setattr__(self, "_slo", slo)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraicReal is immutable")

    @classmethod
    def from_rational(cls, r: Rational) -> AlgebraicReal:
        r = Fraction(r)
        poly = IntPolynomial((-r.numerator, r.denominator)).normalized()
        return cls(poly, r, r)

    # -- enclosure ----------------------------------------------------------

    @property
    def lo(self) -> Fraction:
        return self._lo

    @property
    def hi(self) -> Fraction:
        return self._hi

    @property
    def width(self) -> Fraction:
        return self._hi - self._lo

    @property
    def is_rational(self) -> bool:
        return self._lo == self._hi

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational value")
        return self._lo

    def _bisect_once(self) -> None:
        lo, hi = self._lo, self._hi
        if lo == hi:
            return
        mid = (lo + hi) / 2
        sm = _sign_at(self.poly, mid)
        if sm == 0:
            object.__setattr__(self, "_lo", mid)
            object.__setattr__(self, "_hi", mid)
            object.__setattr__(self, "_slo", 0)
            return
        if sm == self._slo:
            object.__setattr__(self, "_lo", mid)
        else:
            object.__setattr__(self, "_hi", mid)

    def refine(self, eps: Rational) -> tuple[Fraction, Fraction]:
        """Shrink the enclosure to width <= eps; successive calls nest."""
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        while self._hi - self._lo > eps:
            self._bisect_once()
        return self._lo, self._hi

    def enclosure(self) -> tuple[Fraction, Fraction]:
        return self._lo, self._hi

    def sturm_count(self) -> int:
        """Sign-variation root count over the current enclosure (1 always)."""
        if self.is_rational:
            return 1
        chain = sturm_chain(self.poly.coeffs)
        return count_roots_halfopen(chain, self._lo, self._hi)

    # -- exact decisions ----------------------------------------------------

    def sign_of_poly(self, q, precision: PrecisionContext | None = None) -> int:
        """Exact sign of q(self) for an integer or rational polynomial q.

        Zero is decided exactly (gcd with the defining polynomial plus a
        root count), never by numeric coincidence.
        """
        q = _as_int_poly(q)
        if q.is_zero:
            return 0
        if self.is_rational:
            v = q(self._lo)
            return (v > 0) - (v < 0)
        precision = precision or DEFAULT_PRECISION
        for _ in range(2):
            qlo, qhi = q.eval_interval(self._lo, self._hi)
            if qlo > 0:
                return 1
            if qhi < 0:
                return -1
            self._bisect_once()
        h = self.poly.gcd(q)
        if h.degree >= 1:
            chain = sturm_chain(h.square_free_part().coeffs)
            if count_roots_halfopen(chain, self._lo, self._hi) >= 1:
                return 0
        for _ in range(precision.max_bisections):
            qlo, qhi = q.eval_interval(self._lo, self._hi)
            if qlo > 0:
                return 1
            if qhi < 0:
                return -1
            self._bisect_once()
        raise IndeterminateError(
            f"sign of {q} at {self!r} undecided after refinement budget")

    def compare(self, other: Union[AlgebraicReal, Rational],
                precision: PrecisionContext | None = None) -> int:
        """Exact trichotomy: -1, 0, +1."""
        precision = precision or DEFAULT_PRECISION
        if not isinstance(other, AlgebraicReal):
            return self._compare_rational(Fraction(other), precision)
        if self.is_rational:
            return -other._compare_rational(self._lo, precision)
        if other.is_rational:
            return self._compare_rational(other._lo, precision)
        checked_equal = False
        for _ in range(precision.max_bisections):
            if self._hi < other._lo:
                return -1
            if other._hi < self._lo:
                return 1
            if self._hi == other._lo or other._hi == self._lo:
                # interior roots cannot sit on the shared rational endpoint
                return -1 if self._hi == other._lo else 1
            if not checked_equal:
                checked_equal = True
                h = self.poly.gcd(other.poly)
                if h.degree >= 1:
                    ilo = max(self._lo, other._lo)
                    ihi = min(self._hi, other._hi)
                    if ilo <= ihi:
                        chain = sturm_chain(h.square_free_part().coeffs)
                        if count_roots_halfopen(chain, ilo, ihi) >= 1:
                            return 0
            self._bisect_once()
            other._bisect_once()
        raise IndeterminateError("compare undecided after refinement budget")

    def _compare_rational(self, r: Fraction, precision: PrecisionContext) -> int:
        if self.is_rational:
            return (self._lo > r) - (self._lo < r)
        if self.poly(r) == 0 and self._lo <= r <= self._hi:
            return 0
        for _ in range(precision.max_bisections):
            if self._hi < r:
                return -1
            if self._lo > r:
                return 1
            # r inside [lo, hi]: the root is irrational, so r != root
            if r == self._lo:
                return 1
            if r == self._hi:
                return -1
            self._bisect_once()
        raise IndeterminateError("compare undecided after refinement budget")

    def __eq__(self, other) -> bool:
        if isinstance(other, (AlgebraicReal, int, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __lt__(self, other) -> bool:
        return self.compare(other) < 0

    def __le__(self, other) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other) -> bool:
        return self.compare(other) >= 0

    __hash__ = None  # exact equality crosses representations; not hashable

    # -- numeric views ------------------------------------------------------

    def __float__(self) -> float:
        lo, hi = self.refine(Fraction(1, 10**18))
        return float((lo + hi) / 2)

    def approx(self, dps: int = 50) -> mpmath.mpf:
        lo, hi = self.refine(Fraction(1, 10**(dps + 5)))
        with mpmath.workdps(dps + 10):
            mid = (lo + hi) / 2
            return mpmath.mpf(mid.numerator) / mpmath.mpf(mid.denominator)

    def __repr__(self) -> str:
        return (f"AlgebraicReal({self.poly}, "
                f"[{float(self._lo):.6f}, {float(self._hi):.6f}])")


def _as_int_poly(q) -> IntPolynomial:
    if isinstance(q, IntPolynomial):
        return q
    coeffs = [Fraction(c) for c in q]
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return IntPolynomial([int(c * den) for c in coeffs])


def isolate_real_roots(p: IntPolynomial,
                       lo: Rational | None = None,
                       hi: Rational | None = None) -> list[AlgebraicReal]:
    """One AlgebraicReal per distinct real root of p in the open range,
    sorted ascending.  Works on the square-free part of p."""
    if p.is_zero:
        raise ValueError("cannot isolate roots of the zero polynomial")
    g = p.square_free_part()
    if g.degree < 1:
        return []
    bound = g.root_bound()
    lo = Fraction(lo) if lo is not None else Fraction(-bound)
    hi = Fraction(hi) if hi is not None else Fraction(bound)
    if lo >= hi:
        return []

    roots: list[AlgebraicReal] = []
    g_irr = g
    for r in _rational_roots(g):
        lin = IntPolynomial((-r.numerator, r.denominator))
        quot = g_irr.try_divide(lin)
        assert quot is not None, "rational root must split off integrally"
        g_irr = quot
        if lo < r < hi:
            roots.append(AlgebraicReal(lin, r, r))

    if g_irr.degree >= 1:
        # g_irr has no rational roots: no rational point ever evaluates to 0
        chain = sturm_chain(g_irr.coeffs)
        stack = [(lo, hi, count_roots_halfopen(chain, lo, hi))]
        while stack:
            a, b, cnt = stack.pop()
            if cnt == 0:
                continue
            if cnt == 1:
                roots.append(AlgebraicReal(g_irr, a, b, _certified=True))
                continue
            mid = (a + b) / 2
            cl = count_roots_halfopen(chain, a, mid)
            stack.append((a, mid, cl))
            stack.append((mid, b, cnt - cl))

    roots.sort(key=functools.cmp_to_key(lambda u, v: u.compare(v)))
    return roots


def root_in(p: IntPolynomial, lo: Rational, hi: Rational) -> AlgebraicReal:
    """The unique root of p in the open range; raises if not exactly one."""
    roots = isolate_real_roots(p, lo, hi)
    if len(roots) != 1:
        raise ValueError(
            f"expected exactly one root of {p} in ({lo}, {hi}), found {len(roots)}")
    return roots[0]
