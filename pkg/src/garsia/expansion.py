"""Length-n prefixes of beta-expansions for 1 < beta < 2, digits {0, 1}.

A word (a_1, ..., a_n) can start an expansion of x exactly when
0 <= x - sum a_k beta^-k <= beta^-n/(beta-1); the interval of such x is
[word_L, word_U].  Everything in this module (class compression, the
overlap sweep that computes m_n, the distinct-value set D_n, growth
diagnostics) is built on exact comparisons of those critical values.

Scaling convention used throughout the sweeps: multiplying every critical
value by beta^n (beta-1) > 0 sends word_L to (x-1)*A_w(x) evaluated at
beta, where A_w = sum a_k x^(n-k), and word_U to that plus exactly 1.  For
rational beta = p/q the same trick with denominators cleared makes every
critical value an integer.
"""

from __future__ import annotations

import bisect
import functools
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import mpmath

from .algebra.numberfield import FieldElement, NumberField
from .algebra.polynomials import IntPolynomial, Rational, parse_polynomial
from .algebra.precision import DEFAULT_PRECISION, PrecisionContext
from .algebra.roots import AlgebraicReal, root_in
from .errors import (BetaSpecError, BudgetExceededError, IndeterminateError,
                     IndeterminateOrderingError)

Word = tuple[int, ...]

DEFAULT_BUDGET = 2_000_000


def parse_word(text: str) -> Word:
    """Parse "0110" or "0,1,1,0" into a word."""
    bits = text.replace(",", "").replace(" ", "")
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"not a 0-1 word: {text!r}")
    return tuple(int(c) for c in bits)


def word_value_coeffs(w: Word) -> tuple[int, ...]:
    """Ascending coefficients of A_w(x) = sum a_k x^(n-k)."""
    return tuple(reversed(w))


def _scaled_L_coeffs(w: Word) -> tuple[int, ...]:
    """(x-1) * A_w(x), ascending: the beta^n(beta-1)-scaled word_L."""
    a = word_value_coeffs(w)
    out = [0] * (len(a) + 1)
    for i, c in enumerate(a):
        out[i] -= c
        out[i + 1] += c
    return tuple(out)


class BetaContext:
    """Evaluation context for a fixed beta in (1, 2).

    numeric mode: beta is an exact rational, or an algebraic number handled
    through certified interval enclosures.  symbolic mode: beta is a
    certified root of a monic square-free modulus and values live in
    Q[x]/(modulus).
    """

    __slots__ = ("mode", "beta_fraction", "beta_algebraic", "field",
                 "precision", "_inv_gen", "_tail_const", "_spec")

    def __init__(self, *, mode: str,
                 beta_fraction: Fraction | None = None,
                 beta_algebraic: AlgebraicReal | None = None,
                 precision: PrecisionContext | None = None,
                 spec: str | None = None):
        precision = precision or DEFAULT_PRECISION
        if mode not in ("numeric", "symbolic"):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == "symbolic":
            if beta_algebraic is None:
                raise BetaSpecError("symbolic mode needs an algebraic beta")
            if not beta_algebraic.poly.is_monic:
                raise BetaSpecError(
                    f"symbolic mode needs a monic modulus, got "
                    f"{beta_algebraic.poly}")
            field = NumberField(beta_algebraic.poly)
        else:
            field = None
        beta = beta_fraction if beta_fraction is not None else beta_algebraic
        if beta is None:
            raise BetaSpecError("no beta given")
        if isinstance(beta, Fraction):
            if not (1 < beta < 2):
                raise BetaSpecError(f"beta must lie in (1, 2), got {beta}")
        else:
            if beta.compare(1) <= 0 or beta.compare(2) >= 0:
                raise BetaSpecError("beta must lie in (1, 2)")
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "beta_fraction", beta_fraction)
        object.__setattr__(self, "beta_algebraic", beta_algebraic)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "precision", precision)
        object.__setattr__(self, "_inv_gen", None)
        object.__setattr__(self, "_tail_const", None)
        object.__setattr__(self, "_spec", spec)

    def __setattr__(self, name, value):
        raise AttributeError("BetaContext is immutable")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_rational(cls, value: Rational,
                      precision: PrecisionContext | None = None) -> BetaContext:
        return cls(mode="numeric", beta_fraction=Fraction(value),
                   precision=precision, spec=str(Fraction(value)))

    @classmethod
    def from_algebraic(cls, beta: AlgebraicReal, mode: str = "symbolic",
                       precision: PrecisionContext | None = None) -> BetaContext:
        if beta.is_rational:
            if mode == "symbolic":
                raise BetaSpecError("rational beta has no symbolic mode")
            return cls.from_rational(beta.as_fraction(), precision)
        return cls(mode=mode, beta_algebraic=beta, precision=precision)

    @classmethod
    def from_spec(cls, spec: str, mode: str = "auto",
                  precision: PrecisionContext | None = None) -> BetaContext:
        """Parse "1.85", "9/5" (numeric) or "poly:<polynomial>@(lo,hi)"
        (symbolic unless mode overrides)."""
        s = spec.strip()
        if s.startswith("poly:"):
            body = s[len("poly:"):]
            if "@" not in body:
                raise BetaSpecError(f"missing @(lo,hi) root selector: {spec!r}")
            ptext, sel = body.rsplit("@", 1)
            sel = sel.strip()
            if not (sel.startswith("(") and sel.endswith(")")):
                raise BetaSpecError(f"bad root selector {sel!r}")
            try:
                lo_s, hi_s = sel[1:-1].split(",")
                lo, hi = Fraction(lo_s.strip()), Fraction(hi_s.strip())
            except ValueError as exc:
                raise BetaSpecError(f"bad root selector {sel!r}") from exc
            poly = parse_polynomial(ptext.strip())
            beta = root_in(poly, lo, hi)
            use = "symbolic" if mode == "auto" else mode
            ctx = cls.from_algebraic(beta, mode=use, precision=precision)
            object.__setattr__(ctx, "_spec", spec)
            return ctx
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise BetaSpecError(f"cannot parse beta spec {spec!r}") from exc
        if mode == "symbolic":
            raise BetaSpecError("rational beta has no symbolic mode")
        return cls.from_rational(value, precision)

    # -- views ----------------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.beta_fraction is not None

    @property
    def spec_string(self) -> str:
        if self._spec:
            return self._spec
        if self.is_rational:
            return str(self.beta_fraction)
        return f"poly:{self.beta_algebraic.poly}@" \
               f"({self.beta_algebraic.lo},{self.beta_algebraic.hi})"

    def beta_enclosure(self, width: Fraction | None = None) -> tuple[Fraction, Fraction]:
        if self.is_rational:
            return self.beta_fraction, self.beta_fraction
        if width is None:
            width = Fraction(1, 2 ** self.precision.bits)
        return self.beta_algebraic.refine(width)

    def beta_mpf(self, dps: int | None = None) -> mpmath.mpf:
        dps = dps or self.precision.decimal_digits
        if self.is_rational:
            with mpmath.workdps(dps + 10):
                return (mpmath.mpf(self.beta_fraction.numerator)
                        / mpmath.mpf(self.beta_fraction.denominator))
        return self.beta_algebraic.approx(dps)

    # -- symbolic caches --------------------------------------------------------

    @property
    def generator(self) -> FieldElement:
        self._require_symbolic()
        return self.field.generator

    @property
    def inv_beta(self) -> FieldElement:
        self._require_symbolic()
        if self._inv_gen is None:
            object.__setattr__(self, "_inv_gen", self.field.generator.inverse())
        return self._inv_gen

    @property
    def tail_constant(self) -> FieldElement:
        """1/(beta-1), the right endpoint of I_beta."""
        self._require_symbolic()
        if self._tail_const is None:
            one = self.field.one
            object.__setattr__(self, "_tail_const",
                               (self.field.generator - one).inverse())
        return self._tail_const

    def _require_symbolic(self) -> None:
        if self.mode != "symbolic":
            raise ValueError("operation requires symbolic mode")

    def i_beta_right(self) -> Union[Fraction, FieldElement]:
        """1/(beta-1) in whatever exact form the mode supports."""
        if self.is_rational:
            return 1 / (self.beta_fraction - 1)
        if self.mode == "symbolic":
            return self.tail_constant
        lo, hi = self.beta_enclosure()
        return (1 / (hi - 1), 1 / (lo - 1))

    # -- exact sign helpers -----------------------------------------------------

    def sign_of_int_poly(self, coeffs: Sequence[int]) -> int:
        """Exact sign at beta of an integer polynomial in beta."""
        p = IntPolynomial(coeffs)
        if self.is_rational:
            v = p(self.beta_fraction)
            return (v > 0) - (v < 0)
        try:
            return self.beta_algebraic.sign_of_poly(p, self.precision)
        except IndeterminateError as exc:
            if self.mode == "numeric":
                raise IndeterminateOrderingError(
                    f"{exc}; retry in symbolic mode") from exc
            raise

    def to_decimal(self, value, digits: int | None = None) -> str:
        """Correctly rounded decimal rendering of an exact value."""
        digits = digits if digits is not None else self.precision.decimal_digits
        return render_decimal(value, digits, self)


# -- decimal rendering ----------------------------------------------------------


def _round_fraction(fr: Fraction, digits: int) -> str:
    scaled = fr * 10 ** digits
    n = scaled.numerator
    d = scaled.denominator
    q, r = divmod(n, d)
    if 2 * r > d or (2 * r == d and q % 2):
        q += 1
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, frac = divmod(q, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


def render_decimal(value, digits: int, ctx: BetaContext | None = None) -> str:
    """Round a Fraction, FieldElement, AlgebraicReal or enclosure pair to a
    decimal string; enclosures are refined until the rounding is unambiguous."""
    if isinstance(value, (int, Fraction)):
        return _round_fraction(Fraction(value), digits)
    if isinstance(value, FieldElement):
        if not any(value.coeffs[1:]):
            return _round_fraction(value.as_fraction(), digits)
        assert ctx is not None and ctx.mode == "symbolic"
        beta = ctx.beta_algebraic
        width = Fraction(1, 10 ** (digits + 6))
        for _ in range(ctx.precision.max_escalations + 60):
            lo, hi = beta.refine(width)
            vlo, vhi = value.eval_interval(lo, hi)
            slo, shi = _round_fraction(vlo, digits), _round_fraction(vhi, digits)
            if slo == shi:
                return slo
            width /= 2 ** 16
        raise IndeterminateError("decimal rendering did not stabilize")
    if isinstance(value, AlgebraicReal):
        if value.is_rational:
            return _round_fraction(value.as_fraction(), digits)
        width = Fraction(1, 10 ** (digits + 6))
        for _ in range(200):
            lo, hi = value.refine(width)
            slo, shi = _round_fraction(lo, digits), _round_fraction(hi, digits)
            if slo == shi:
                return slo
            width /= 2 ** 16
        raise IndeterminateError("decimal rendering did not stabilize")
    if isinstance(value, tuple) and len(value) == 2:
        lo, hi = value
        slo, shi = _round_fraction(lo, digits), _round_fraction(hi, digits)
        if slo != shi:
            raise IndeterminateError(
                f"enclosure [{lo}, {hi}] too wide for {digits} digits")
        return slo
    raise TypeError(f"cannot render {type(value).__name__}")


# -- prefix classes ---------------------------------------------------------------


@dataclass(frozen=True)
class PrefixClass:
    """An equivalence class of words of one length sharing an exact value."""

    representative: Word
    weight: int
    value_key: object          # FieldElement | Fraction | enclosure pair
    L: object                  # same kind as value_key's home
    U: object
    n: int


def word_bounds(w: Word, ctx: BetaContext):
    """Lemma-1 interval of x values whose expansions may start with w.

    Exact (FieldElement/Fraction) where the mode allows; a certified
    enclosure pair for numeric algebraic beta.
    """
    n = len(w)
    if n < 1:
        raise ValueError("word must be nonempty")
    if ctx.is_rational:
        b = ctx.beta_fraction
        L = sum(Fraction(a, 1) * b ** -(k + 1) for k, a in enumerate(w))
        U = L + b ** -n / (b - 1)
        return L, U
    if ctx.mode == "symbolic":
        inv = ctx.inv_beta
        inv_n = inv ** n
        A = ctx.field.from_int_polynomial(IntPolynomial(word_value_coeffs(w)))
        L = A * inv_n
        U = L + inv_n * ctx.tail_constant
        return L, U
    lo, hi = ctx.beta_enclosure()
    A = IntPolynomial(word_value_coeffs(w))
    # A has nonnegative coefficients: monotone increasing on (1, 2)
    Llo = A(lo) / hi ** n
    Lhi = A(hi) / lo ** n
    tail_lo = 1 / (hi ** n * (hi - 1))
    tail_hi = 1 / (lo ** n * (lo - 1))
    return (Llo, Lhi), (Llo + tail_lo, Lhi + tail_hi)


# -- the exact ordering kernel ---------------------------------------------------

class _ValueOrder:
    """Sorts integer-coefficient polynomial values at an algebraic beta.

    Cached rational enclosures decide almost every comparison; overlaps
    fall back to the exact sign (gcd-backed) of the difference polynomial.
    """

    def __init__(self, ctx: BetaContext):
        self.ctx = ctx
        self.beta = ctx.beta_algebraic
        self.beta.refine(Fraction(1, 2 ** 96))
        self.enc: dict[tuple[int, ...], tuple[Fraction, Fraction]] = {}

    def enclosure(self, key: tuple[int, ...]) -> tuple[Fraction, Fraction]:
        e = self.enc.get(key)
        if e is None:
            lo, hi = self.beta.enclosure()
            e = IntPolynomial(key).eval_interval(lo, hi)
            self.enc[key] = e
        return e

    def cmp(self, ka: tuple[int, ...], kb: tuple[int, ...]) -> int:
        if ka == kb:
            return 0
        alo, ahi = self.enclosure(ka)
        blo, bhi = self.enclosure(kb)
        if ahi < blo:
            return -1
        if bhi < alo:
            return 1
        diff = tuple(x - y for x, y in
                     itertools.zip_longest(ka, kb, fillvalue=0))
        return self.ctx.sign_of_int_poly(diff)

    def sort_events(self, events: dict[tuple[int, ...], list[int]]
                    ) -> list[tuple[tuple[int, ...], int, int]]:
        """Sort {poly-key: [start_w, end_w]} by value; keys that are exactly
        equal at beta (possible with a reducible modulus) are merged."""
        keys = sorted(events, key=functools.cmp_to_key(self.cmp))
        out: list[tuple[tuple[int, ...], int, int]] = []
        for k in keys:
            s, e = events[k]
            if out and self.cmp(out[-1][0], k) == 0:
                pk, ps, pe = out[-1]
                out[-1] = (pk, ps + s, pe + e)
            else:
                out.append((k, s, e))
        return out


# -- sweep backends ---------------------------------------------------------------

def _class_dp_symbolic(ctx: BetaContext, n: int, budget: int,
                       track_reps: bool) -> dict:
    """Value classes at length n: {reduced key: [weight, rep_mask]}.

    Keys are sum a_k x^(n-k) reduced mod the modulus (denominator-free
    because the modulus is monic).
    """
    fld = ctx.field
    d = fld.degree
    level: dict[tuple[int, ...], list[int]] = {(0,) * d: [1, 0]}
    for _ in range(n):
        nxt: dict[tuple[int, ...], list[int]] = {}
        for key, (w, rep) in level.items():
            shifted = fld.reduce_coeffs((0,) + key)  # key * x mod p
            for a in (0, 1):
                nk = shifted if a == 0 else \
                    (shifted[0] + 1,) + shifted[1:]
                rep2 = (rep << 1) | a
                cur = nxt.get(nk)
                if cur is None:
                    nxt[nk] = [w, rep2]
                else:
                    cur[0] += w
                    if track_reps and rep2 < cur[1]:
                        cur[1] = rep2
        if len(nxt) > budget:
            raise BudgetExceededError(
                f"class count {len(nxt)} exceeds budget {budget}")
        level = nxt
    return level


def _mask_to_word(mask: int, n: int) -> Word:
    return tuple((mask >> (n - 1 - k)) & 1 for k in range(n))


def _rational_scaled_values(p: int, q: int, n: int) -> list[int]:
    """All 2^n scaled word_L values (beta = p/q): (p-q) * sum a_k q^k p^(n-k)."""
    vals = [0]
    for k in range(1, n + 1):
        qk = q ** k
        vals = [v * p for v in vals] + [v * p + qk for v in vals]
    pq = p - q
    return [v * pq for v in vals]


@dataclass(frozen=True)
class ProfileRow:
    left: object
    right: object
    count: int


@dataclass(frozen=True)
class OverlapProfile:
    """m_n plus the full piecewise-constant overlap profile over I_beta."""

    n: int
    m_n: int
    witness: ProfileRow
    rows: tuple[ProfileRow, ...]
    mode: str

    def to_csv(self, ctx: BetaContext, digits: int = 12,
               exact: bool | None = None) -> str:
        lines = ["left,right,count"] if not self._with_exact(ctx, exact) else \
            ["left,right,count,left_exact,right_exact"]
        for row in self.rows:
            left = ctx.to_decimal(row.left, digits)
            right = ctx.to_decimal(row.right, digits)
            if self._with_exact(ctx, exact):
                lines.append(f"{left},{right},{row.count},"
                             f"\"{row.left}\",\"{row.right}\"")
            else:
                lines.append(f"{left},{right},{row.count}")
        return "\n".join(lines) + "\n"

    def _with_exact(self, ctx, exact):
        return ctx.mode == "symbolic" if exact is None else exact


def max_overlap(ctx: BetaContext, n: int,
                budget: int = DEFAULT_BUDGET) -> OverlapProfile:
    """m_n(beta): the maximum weighted number of words whose Lemma-1
    intervals cover a common open subinterval, with the leftmost witness
    and the full profile between consecutive distinct critical values."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if ctx.is_rational:
        return _max_overlap_rational(ctx, n, budget)
    if ctx.mode == "symbolic":
        return _max_overlap_symbolic(ctx, n, budget)
    return _max_overlap_numeric_algebraic(ctx, n, budget)


def _max_overlap_rational(ctx: BetaContext, n: int, budget: int) -> OverlapProfile:
    if 2 ** n > budget:
        raise BudgetExceededError(f"2^{n} words exceed budget {budget}")
    b = ctx.beta_fraction
    p, q = b.numerator, b.denominator
    starts = _rational_scaled_values(p, q, n)
    T = q ** (n + 1)
    cs: Counter = Counter(starts)
    ce: Counter = Counter(v + T for v in starts)
    events = sorted(set(cs) | set(ce))
    scale = Fraction(1, p ** n * (p - q))
    return _profile_from_events(
        [(v, cs.get(v, 0), ce.get(v, 0)) for v in events],
        lambda v: v * scale, n, "numeric")


def _max_overlap_symbolic(ctx: BetaContext, n: int, budget: int) -> OverlapProfile:
    level = _class_dp_symbolic(ctx, n, budget, track_reps=False)
    fld = ctx.field
    events: dict[tuple[int, ...], list[int]] = {}
    for key, (w, _) in level.items():
        L = _scaled_L_key(fld, key)
        U = (L[0] + 1,) + L[1:]
        ev = events.get(L)
        if ev is None:
            events[L] = [w, 0]
        else:
            ev[0] += w
        ev = events.get(U)
        if ev is None:
            events[U] = [0, w]
        else:
            ev[1] += w
    order = _ValueOrder(ctx)
    seq = order.sort_events(events)
    unscale = ctx.tail_constant * ctx.inv_beta ** n  # 1/(beta^n (beta-1))
    return _profile_from_events(
        seq, lambda key: fld.element(key) * unscale, n, "symbolic")


def _scaled_L_key(fld: NumberField, key: tuple[int, ...]) -> tuple[int, ...]:
    """(x-1)*key mod p for a reduced key."""
    shifted = fld.reduce_coeffs((0,) + key)
    return tuple(a - b for a, b in zip(shifted, key))


def _max_overlap_numeric_algebraic(ctx: BetaContext, n: int,
                                   budget: int) -> OverlapProfile:
    if 2 ** n > budget:
        raise BudgetExceededError(f"2^{n} words exceed budget {budget}")
    events: dict[tuple[int, ...], list[int]] = {}
    for mask in range(2 ** n):
        w = _mask_to_word(mask, n)
        L = _scaled_L_coeffs(w)
        U = (L[0] + 1,) + L[1:]
        for key, slot in ((L, 0), (U, 1)):
            ev = events.get(key)
            if ev is None:
                ev = events[key] = [0, 0]
            ev[slot] += 1
    order = _ValueOrder(ctx)
    seq = order.sort_events(events)

    def unscale(key: tuple[int, ...]):
        lo, hi = ctx.beta_enclosure()
        plo, phi = IntPolynomial(key).eval_interval(lo, hi)
        slo = hi ** n * (hi - 1)
        shi = lo ** n * (lo - 1)
        return (min(plo / slo, plo / shi), max(phi / slo, phi / shi))

    return _profile_from_events(seq, unscale, n, "numeric")


def _profile_from_events(seq, unscale, n: int, mode: str) -> OverlapProfile:
    rows: list[ProfileRow] = []
    active = 0
    best = 0
    witness_idx = -1
    values = [unscale(item[0]) for item in seq]
    for i, (key, s, e) in enumerate(seq):
        active += s - e
        if i + 1 < len(seq):
            rows.append(ProfileRow(values[i], values[i + 1], active))
            if active > best:
                best = active
                witness_idx = len(rows) - 1
    return OverlapProfile(n=n, m_n=best, witness=rows[witness_idx],
                          rows=tuple(rows), mode=mode)


# -- class enumeration -------------------------------------------------------------

def enumerate_prefix_classes(ctx: BetaContext, n: int,
                             budget: int = DEFAULT_BUDGET) -> list[PrefixClass]:
    """Partition of the 2^n words into exact-value classes, weights summing
    to 2^n, lexicographically least representatives, sorted by value.

    Symbolic mode compresses by the reduced field key; rational beta admits
    no collisions (no {0,+-1} relation has a rational root in (1,2)); a
    numeric algebraic context performs no compression.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if ctx.is_rational:
        if 2 ** n > budget:
            raise BudgetExceededError(f"2^{n} words exceed budget {budget}")
        b = ctx.beta_fraction
        p, q = b.numerator, b.denominator
        scale = Fraction(1, p ** n)
        groups: dict[int, list[int]] = {}
        tail = Fraction(q ** (n + 1), p ** n * (p - q))
        for mask in range(2 ** n):
            w = _mask_to_word(mask, n)
            v = 0
            for k, a in enumerate(w, start=1):
                v = v * p
                if a:
                    v += q ** k
            g = groups.setdefault(v, [0, mask])
            g[0] += 1
            if mask < g[1]:
                g[1] = mask
        out = []
        for v in sorted(groups):
            wt, rep = groups[v]
            L = v * scale
            out.append(PrefixClass(_mask_to_word(rep, n), wt, L, L, L + tail, n))
        return out
    if ctx.mode == "symbolic":
        level = _class_dp_symbolic(ctx, n, budget, track_reps=True)
        order = _ValueOrder(ctx)
        keys = sorted(level, key=functools.cmp_to_key(order.cmp))
        inv_n = ctx.inv_beta ** n
        tail = inv_n * ctx.tail_constant
        out = []
        for key in keys:
            wt, rep = level[key]
            val = ctx.field.element(key)
            L = val * inv_n
            out.append(PrefixClass(_mask_to_word(rep, n), wt, val, L, L + tail, n))
        return out
    # numeric algebraic: no compression
    if 2 ** n > budget:
        raise BudgetExceededError(f"2^{n} words exceed budget {budget}")
    order = _ValueOrder(ctx)
    masks = sorted(range(2 ** n),
                   key=functools.cmp_to_key(
                       lambda a, b: order.cmp(
                           word_value_coeffs(_mask_to_word(a, n)),
                           word_value_coeffs(_mask_to_word(b, n)))))
    out = []
    for mask in masks:
        w = _mask_to_word(mask, n)
        L, U = word_bounds(w, ctx)
        out.append(PrefixClass(w, 1, L, L, U, n))
    return out


# -- pointwise counting --------------------------------------------------------------

def count_valid(x, ctx: BetaContext, n: int, mode: str = "closed",
                budget: int = DEFAULT_BUDGET) -> int:
    """Weighted number of length-n words whose Lemma-1 interval contains x.

    mode "closed-pointwise"/"closed" uses closed containment, the
    diagnostic the growth profile is built from; "open-generic"/"open"
    counts strict interior containment, the quantity that is constant on
    the open subintervals between critical values.
    """
    closed = mode in ("closed", "closed-pointwise")
    if not closed and mode not in ("open", "open-generic"):
        raise ValueError(f"unknown mode {mode!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if ctx.is_rational:
        return _count_rational(x, ctx, n, closed, budget)
    if ctx.mode == "symbolic":
        return _count_symbolic(x, ctx, n, closed, budget)
    return _count_numeric_algebraic(x, ctx, n, closed, budget)


def _count_rational(x, ctx, n, closed, budget):
    if 2 ** n > budget:
        raise BudgetExceededError(f"2^{n} words exceed budget {budget}")
    b = ctx.beta_fraction
    p, q = b.numerator, b.denominator
    if isinstance(x, tuple):
        lo = _count_rational(x[0], ctx, n, closed, budget)
        hi = _count_rational(x[1], ctx, n, closed, budget)
        if lo != hi:
            raise IndeterminateError("enclosure straddles a critical value")
        return lo
    x = Fraction(x)
    X = x * p ** n * (p - q)
    starts = sorted(_rational_scaled_values(p, q, n))
    T = q ** (n + 1)
    if closed:
        return bisect.bisect_right(starts, X) - bisect.bisect_left(starts, X - T)
    return bisect.bisect_left(starts, X) - bisect.bisect_right(starts, X - T)


def _count_symbolic(x, ctx, n, closed, budget):
    fld = ctx.field
    if isinstance(x, (int, Fraction)):
        x = fld.from_rational(Fraction(x))
    if not isinstance(x, FieldElement):
        raise TypeError("symbolic mode expects a FieldElement or rational")
    # scale: X = x * beta^n (beta - 1); class key S covers x iff S<=X<=S+1
    X = x * (ctx.generator - 1) * ctx.generator ** n
    level = _class_dp_symbolic(ctx, n, budget, track_reps=False)
    xnum = X.numerator_poly()
    xden = X.den
    total = 0
    for key, (w, _) in level.items():
        S = _scaled_L_key(fld, key)
        # sign of X - S and of S + 1 - X, exactly
        d1 = _sub_scaled(xnum.coeffs, S, xden)
        s1 = ctx.sign_of_int_poly(d1)
        ok_low = (s1 >= 0) if closed else (s1 > 0)
        if not ok_low:
            continue
        Su = (S[0] + 1,) + S[1:]
        d2 = tuple(-c for c in _sub_scaled(xnum.coeffs, Su, xden))
        s2 = ctx.sign_of_int_poly(d2)
        ok_high = (s2 >= 0) if closed else (s2 > 0)
        if ok_high:
            total += w
    return total


def _sub_scaled(xnum: tuple[int, ...], s: tuple[int, ...], xden: int):
    """Coefficients of xnum - xden * s (x's numerator minus scaled key)."""
    out = list(xnum) + [0] * max(0, len(s) - len(xnum))
    for i, c in enumerate(s):
        out[i] -= xden * c
    return tuple(out)


def _count_numeric_algebraic(x, ctx, n, closed, budget):
    if 2 ** n > budget:
        raise BudgetExceededError(f"2^{n} words exceed budget {budget}")
    if isinstance(x, tuple):
        lo = _count_numeric_algebraic(x[0], ctx, n, closed, budget)
        hi = _count_numeric_algebraic(x[1], ctx, n, closed, budget)
        if lo != hi:
            raise IndeterminateError("enclosure straddles a critical value")
        return lo
    x = Fraction(x)
    total = 0
    for mask in range(2 ** n):
        w = _mask_to_word(mask, n)
        S = _scaled_L_coeffs(w)
        # X = x * beta^n (beta-1) has rational coefficients x*(x^(n+1)-x^n)
        xpoly = [0] * n + [-x, x]
        d1 = tuple(Fraction(c) - Fraction(s) for c, s in
                   itertools.zip_longest(xpoly, S, fillvalue=Fraction(0)))
        s1 = _sign_rational_poly(ctx, d1)
        if not ((s1 >= 0) if closed else (s1 > 0)):
            continue
        Su = (S[0] + 1,) + S[1:]
        d2 = tuple(Fraction(s) - Fraction(c) for c, s in
                   itertools.zip_longest(xpoly, Su, fillvalue=Fraction(0)))
        s2 = _sign_rational_poly(ctx, d2)
        if (s2 >= 0) if closed else (s2 > 0):
            total += 1
    return total


def _sign_rational_poly(ctx: BetaContext, coeffs: Sequence[Fraction]) -> int:
    den = 1
    for c in coeffs:
        c = Fraction(c)
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    return ctx.sign_of_int_poly(ints)


# -- distinct values and entropy ------------------------------------------------------

@dataclass(frozen=True)
class ValueSet:
    """D_n(beta) with multiplicities p_n(x); multiplicities sum to 2^n."""

    n: int
    entries: dict

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)


def distinct_values(ctx: BetaContext, n: int,
                    budget: int = DEFAULT_BUDGET) -> ValueSet:
    """Exact D_n with multiplicities, built incrementally level by level."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if ctx.is_rational:
        if 2 ** n > budget:
            raise BudgetExceededError(f"2^{n} values exceed budget {budget}")
        b = ctx.beta_fraction
        p, q = b.numerator, b.denominator
        scale = Fraction(1, p ** n)
        vals = [0]
        for k in range(1, n + 1):
            qk = q ** k
            vals = [v * p for v in vals] + [v * p + qk for v in vals]
        counter = Counter(vals)
        entries = {v * scale: c for v, c in counter.items()}
        return ValueSet(n, entries)
    ctx._require_symbolic()
    level = _class_dp_symbolic(ctx, n, budget, track_reps=False)
    inv_n = ctx.inv_beta ** n
    entries = {ctx.field.element(key) * inv_n: wr[0] for key, wr in level.items()}
    return ValueSet(n, entries)


def entropy_estimate(ctx: BetaContext, n: int,
                     budget: int = DEFAULT_BUDGET) -> mpmath.mpf:
    """H^(n)/(n log beta) from exact multiplicities, in working precision.

    Equals log 2/log beta exactly when all 2^n values are distinct.
    """
    vs = distinct_values(ctx, n, budget)
    mults = Counter(vs.entries.values())
    dps = ctx.precision.decimal_digits
    with mpmath.workdps(dps + 10):
        log2 = mpmath.log(2)
        acc = mpmath.mpf(0)
        for p, reps in mults.items():
            if p > 1:
                acc += reps * p * mpmath.log(p)
        H = n * log2 - acc / mpmath.mpf(2) ** n
        return H / (n * mpmath.log(ctx.beta_mpf(dps)))


# -- periodic points and growth --------------------------------------------------------

def value_of_periodic(preperiod: Word, period: Word,
                      ctx: BetaContext) -> FieldElement:
    """Exact value of the point whose expansion is preperiod then period
    repeated forever (symbolic mode)."""
    ctx._require_symbolic()
    if not period:
        raise ValueError("period must be nonempty")
    fld = ctx.field
    k, m = len(preperiod), len(period)
    inv = ctx.inv_beta
    gen = ctx.generator
    x = fld.zero
    if k:
        A = fld.from_int_polynomial(IntPolynomial(word_value_coeffs(preperiod)))
        x = A * inv ** k
    P = fld.from_int_polynomial(IntPolynomial(word_value_coeffs(period)))
    tail = P * (gen ** m - 1).inverse()
    return x + tail * inv ** k


def growth_profile(x, ctx: BetaContext, n_max: int) -> list[int]:
    """#E_n(x; beta) for n = 1..n_max at an exact point x (symbolic mode).

    Walks the finite automaton on remainders y -> beta*y - a pruned to
    I_beta; pruning is exact and loses nothing because a remainder outside
    I_beta can never return.
    """
    ctx._require_symbolic()
    fld = ctx.field
    if isinstance(x, (int, Fraction)):
        x = fld.from_rational(Fraction(x))
    gen = ctx.generator
    gm1 = gen - 1
    beta = ctx.beta_algebraic
    prec = ctx.precision

    @functools.lru_cache(maxsize=None)
    def children(coeffs: tuple[int, ...], den: int):
        y = FieldElement(fld, coeffs, den)
        out = []
        for a in (0, 1):
            z = gen * y - a
            if z.is_zero:
                out.append(z)
                continue
            s_lo = beta.sign_of_poly(z.numerator_poly(), prec)
            if s_lo < 0:
                continue
            top = gm1 * z - 1  # (beta-1) z - 1 <= 0  <=>  z <= 1/(beta-1)
            if top.is_zero or beta.sign_of_poly(top.numerator_poly(), prec) <= 0:
                out.append(z)
        return tuple(out)

    states: dict[FieldElement, int] = {x: 1}
    counts: list[int] = []
    for _ in range(n_max):
        nxt: dict[FieldElement, int] = {}
        for y, cnt in states.items():
            for z in children(y.coeffs, y.den):
                nxt[z] = nxt.get(z, 0) + cnt
        states = nxt
        counts.append(sum(states.values()))
    return counts


def separation_ratio(ctx: BetaContext, n: int,
                     budget: int = DEFAULT_BUDGET):
    """(min gap between distinct D_n values) * beta^n, exactly computed.

    For Pisot beta this stays bounded below (the separation phenomenon);
    returns a Fraction when the gap is rational, else a high-precision value.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if ctx.is_rational:
        b = ctx.beta_fraction
        q = b.denominator
        vals = sorted(set(_rational_scaled_values(b.numerator, q, n)))
        gap = min(y - x for x, y in zip(vals, vals[1:]))
        return Fraction(gap, (b.numerator - q) * q ** n)
    ctx._require_symbolic()
    level = _class_dp_symbolic(ctx, n, budget, track_reps=False)
    order = _ValueOrder(ctx)
    keys = sorted(level, key=functools.cmp_to_key(order.cmp))
    diffs = [tuple(b - a for a, b in zip(k1, k2))
             for k1, k2 in zip(keys, keys[1:])]
    best = diffs[0]
    for d in diffs[1:]:
        if order.cmp(d, best) < 0:
            best = d
    e = ctx.field.element(best)
    if not any(e.coeffs[1:]):
        return e.as_fraction()
    dps = ctx.precision.decimal_digits
    width = Fraction(1, 10 ** (dps + 5))
    lo, hi = ctx.beta_algebraic.refine(width)
    vlo, vhi = e.eval_interval(lo, hi)
    with mpmath.workdps(dps + 10):
        mid = (vlo + vhi) / 2
        return mpmath.mpf(mid.numerator) / mpmath.mpf(mid.denominator)
