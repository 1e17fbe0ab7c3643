"""Transition points of m_n: parameters beta where two critical values
coincide.

Candidate coincidence equations between length-n words are pruned by three
exact observations before any root isolation: L=L and U=U have identical
solution sets (the tail width cancels), L=U of one word never holds, and a
digitwise-dominated pair admits no solution for the L=L, L=U, U=U shapes.
Clearing denominators by x^n (x-1) turns each surviving equation into an
integer polynomial whose roots in (1, 2) are exactly the coincidence
parameters.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .algebra.pisot import is_pisot
from .algebra.polynomials import IntPolynomial
from .algebra.precision import DEFAULT_PRECISION, PrecisionContext
from .algebra.roots import AlgebraicReal, isolate_real_roots
from .errors import CapExceededError
from .expansion import BetaContext, Word, max_overlap, render_decimal

DEFAULT_LENGTH_CAP = 8

Endpoint = Union[Fraction, AlgebraicReal]


@dataclass(frozen=True)
class EquationPair:
    """One critical-value coincidence equation (a_1..a_n)_side = (b_1..b_n)_side."""

    word_a: Word
    side_a: str
    word_b: Word
    side_b: str

    def __post_init__(self):
        if self.side_a not in ("L", "U") or self.side_b not in ("L", "U"):
            raise ValueError("sides must be 'L' or 'U'")
        if len(self.word_a) != len(self.word_b):
            raise ValueError("words must have equal length")
        if (self.word_a, self.side_a) == (self.word_b, self.side_b):
            raise ValueError("the two sides must differ")

    @property
    def n(self) -> int:
        return len(self.word_a)

    def __str__(self) -> str:
        wa = "".join(map(str, self.word_a))
        wb = "".join(map(str, self.word_b))
        return f"({wa})_{self.side_a} = ({wb})_{self.side_b}"


def _mask_word(mask: int, n: int) -> Word:
    return tuple((mask >> (n - 1 - k)) & 1 for k in range(n))


def candidate_pairs(n: int) -> Iterator[EquationPair]:
    """One representative per solution-equivalent equation family.

    For digitwise comparable words only the smaller-word-U = larger-word-L
    shape survives; incomparable words keep L=L, L=U and U=L (U=U is
    solution-equivalent to L=L and is never emitted).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    size = 1 << n
    for a in range(size):
        wa = _mask_word(a, n)
        for b in range(a + 1, size):
            wb = _mask_word(b, n)
            if a & b == a:        # wa <= wb digitwise
                yield EquationPair(wa, "U", wb, "L")
            elif a & b == b:      # wb <= wa digitwise
                yield EquationPair(wa, "L", wb, "U")
            else:
                yield EquationPair(wa, "L", wb, "L")
                yield EquationPair(wa, "L", wb, "U")
                yield EquationPair(wa, "U", wb, "L")


def _word_value_poly(w: Word) -> IntPolynomial:
    return IntPolynomial(tuple(reversed(w)))


def pair_difference_poly(pair: EquationPair) -> IntPolynomial:
    """side_a - side_b with denominators cleared by x^n (x-1) > 0 on (1,2);
    the sign at beta equals the sign of the critical-value difference."""
    A = _word_value_poly(pair.word_a)
    B = _word_value_poly(pair.word_b)
    diff = (A - B) * IntPolynomial((-1, 1))
    c = (1 if pair.side_a == "U" else 0) - (1 if pair.side_b == "U" else 0)
    return diff + IntPolynomial((c,))


def pair_polynomial(pair: EquationPair) -> IntPolynomial:
    """Integer polynomial whose roots in (1, 2) are the coincidence
    parameters; content removed, leading coefficient positive."""
    d = pair_difference_poly(pair)
    if d.is_zero:
        raise ArithmeticError(f"pair {pair} yields the zero polynomial")
    return d.normalized()


@dataclass(frozen=True)
class TransitionPoint:
    """A root in (1, 2) of at least one coincidence equation."""

    value: AlgebraicReal
    sources: tuple[EquationPair, ...]
    pisot: Union[bool, None]   # None: indeterminate

    @property
    def polynomial(self) -> IntPolynomial:
        return self.value.poly

    def to_json_dict(self, digits: int = 12) -> dict:
        lo, hi = self.value.enclosure()
        return {
            "polynomial": str(self.value.poly),
            "isolating_interval": [str(lo), str(hi)],
            "approx_value": render_decimal(self.value, digits),
            "pisot": self.pisot,
            "sources_count": len(self.sources),
        }


def _pair_key(pair: EquationPair):
    return (pair.word_a, pair.side_a, pair.word_b, pair.side_b)


def _isolate_batch(args):
    """Worker: isolate roots of a batch of polynomials in (lo, hi)."""
    coeff_batch, lo, hi = args
    out = []
    for coeffs in coeff_batch:
        roots = isolate_real_roots(IntPolynomial(coeffs), lo, hi)
        out.append([(r.lo, r.hi) for r in roots])
    return out


def transitions(n: int, lo: Fraction = Fraction(1), hi: Fraction = Fraction(2),
                precision: PrecisionContext | None = None,
                workers: int = 1,
                cap: int | None = DEFAULT_LENGTH_CAP,
                journal: "Journal | None" = None) -> list[TransitionPoint]:
    """All transition points of m_n in the open range, deduped across the
    candidate equations (sources merged) and classified by the Pisot test,
    sorted ascending."""
    if cap is not None and n > cap:
        raise CapExceededError(
            f"length {n} exceeds cap {cap}; pass a higher cap or run long-run")
    precision = precision or DEFAULT_PRECISION
    lo, hi = Fraction(lo), Fraction(hi)
    lo = max(lo, Fraction(1))
    hi = min(hi, Fraction(2))

    by_poly: dict[tuple[int, ...], list[EquationPair]] = {}
    for pair in candidate_pairs(n):
        poly = pair_polynomial(pair)
        by_poly.setdefault(poly.coeffs, []).append(pair)

    poly_keys = sorted(by_poly)
    root_records: list[tuple[tuple[int, ...], Fraction, Fraction]] = []

    done_keys = set()
    if journal is not None:
        for rec in journal.completed():
            done_keys.add(tuple(rec["poly"]))
            for rlo, rhi in rec["roots"]:
                root_records.append((tuple(rec["poly"]),
                                     Fraction(rlo), Fraction(rhi)))
    todo = [k for k in poly_keys if k not in done_keys]

    if workers > 1 and len(todo) > 64:
        chunks = [todo[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_isolate_batch,
                               [(chunk, lo, hi) for chunk in chunks])
            for chunk, intervals in zip(chunks, results):
                for coeffs, ivs in zip(chunk, intervals):
                    for rlo, rhi in ivs:
                        root_records.append((coeffs, rlo, rhi))
                    if journal is not None:
                        journal.record(coeffs, ivs)
    else:
        for coeffs in todo:
            roots = isolate_real_roots(IntPolynomial(coeffs), lo, hi)
            ivs = [(r.lo, r.hi) for r in roots]
            for rlo, rhi in ivs:
                root_records.append((coeffs, rlo, rhi))
            if journal is not None:
                journal.record(coeffs, ivs)

    # rebuild AlgebraicReals and dedupe across polynomials
    cands: list[tuple[AlgebraicReal, tuple[int, ...]]] = []
    for coeffs, rlo, rhi in root_records:
        poly = IntPolynomial(coeffs).square_free_part()
        cands.append((AlgebraicReal(poly, rlo, rhi), coeffs))
    cands.sort(key=lambda t: (t[0].lo, t[0].hi))

    groups: list[list[tuple[AlgebraicReal, tuple[int, ...]]]] = []
    for root, coeffs in cands:
        placed = False
        for grp in reversed(groups):
            if grp[-1][0].compare(root) == 0:
                grp.append((root, coeffs))
                placed = True
                break
            if grp[-1][0].compare(root) < 0:
                break
        if not placed:
            groups.append([(root, coeffs)])
    groups.sort(key=lambda g: g[0][0].lo)

    points: list[TransitionPoint] = []
    for grp in groups:
        g = IntPolynomial(grp[0][1]).square_free_part()
        for _, coeffs in grp[1:]:
            g = g.gcd(IntPolynomial(coeffs))
        rep = grp[0][0]
        width = Fraction(1, 1 << 40)
        while True:
            rlo, rhi = rep.refine(width)
            located = isolate_real_roots(g, rlo, rhi)
            if len(located) == 1:
                value = located[0]
                break
            width /= 1 << 20
        pairs: list[EquationPair] = []
        seen = set()
        for _, coeffs in grp:
            for pair in by_poly[coeffs]:
                k = _pair_key(pair)
                if k not in seen:
                    seen.add(k)
                    pairs.append(pair)
        pairs.sort(key=_pair_key)
        check = is_pisot(value, precision)
        points.append(TransitionPoint(value, tuple(pairs), check.verdict))
    points.sort(key=lambda t: t.value.lo)
    return points


# -- where an inequality holds ---------------------------------------------------

def holds_on(pair: EquationPair, lo: Fraction = Fraction(1),
             hi: Fraction = Fraction(2)) -> list[tuple[Endpoint, Endpoint]]:
    """The subset of the range where side_a < side_b strictly, as a finite
    union of open intervals; each interval is certified by an exact sign
    at a rational interior point."""
    lo, hi = Fraction(lo), Fraction(hi)
    d = pair_difference_poly(pair)
    roots = isolate_real_roots(d, lo, hi)
    endpoints: list[Endpoint] = [lo] + list(roots) + [hi]
    out: list[tuple[Endpoint, Endpoint]] = []
    for a, b in zip(endpoints, endpoints[1:]):
        probe = _rational_between(a, b)
        v = d(probe)
        if v < 0:
            out.append((a, b))
    return out


def _bounds_of(e: Endpoint) -> tuple[Fraction, Fraction]:
    if isinstance(e, AlgebraicReal):
        return e.enclosure()
    return Fraction(e), Fraction(e)


def _refine_endpoint(e: Endpoint) -> None:
    if isinstance(e, AlgebraicReal):
        e.refine(e.width / 2 if e.width else Fraction(1))


def _rational_between(a: Endpoint, b: Endpoint) -> Fraction:
    """A rational strictly between two separated endpoint descriptors,
    with the fewest decimal digits that certifiably separate them."""
    for _ in range(100000):
        _, ahi = _bounds_of(a)
        blo, _ = _bounds_of(b)
        if ahi < blo:
            break
        _refine_endpoint(a)
        _refine_endpoint(b)
    else:
        raise ArithmeticError("endpoints did not separate")
    _, ahi = _bounds_of(a)
    blo, _ = _bounds_of(b)
    k = 0
    while True:
        step = 10 ** k
        j = ahi.numerator * step // ahi.denominator + 1  # floor(ahi*step)+1
        cand = Fraction(j, step)
        ok_hi = cand < blo if isinstance(b, Fraction) else cand <= blo
        if ok_hi and cand > ahi - 1:  # j chosen > ahi already
            if cand <= ahi:
                cand = Fraction(j + 1, step)
                ok_hi = cand < blo if isinstance(b, Fraction) else cand <= blo
            if ok_hi:
                # exact verification against the true neighbors
                ok_a = (cand > a) if isinstance(a, Fraction) else a.compare(cand) < 0
                ok_b = (cand < b) if isinstance(b, Fraction) else b.compare(cand) > 0
                if ok_a and ok_b:
                    return cand
        k += 1
        if k > 1000:
            raise ArithmeticError("no separating decimal found")


# -- partitions and sweep reports ---------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Open subintervals of the range between consecutive transition points,
    with one exact rational midpoint certified inside each."""

    cut_points: tuple[TransitionPoint, ...]
    subintervals: tuple[tuple[Endpoint, Endpoint], ...]
    midpoints: tuple[Fraction, ...]


def partition(points: Sequence[TransitionPoint],
              lo: Fraction = Fraction(1), hi: Fraction = Fraction(2)) -> Partition:
    lo, hi = Fraction(lo), Fraction(hi)
    endpoints: list[Endpoint] = [lo] + [t.value for t in points] + [hi]
    subs: list[tuple[Endpoint, Endpoint]] = []
    mids: list[Fraction] = []
    for a, b in zip(endpoints, endpoints[1:]):
        subs.append((a, b))
        mids.append(_rational_between(a, b))
    return Partition(tuple(points), tuple(subs), tuple(mids))


@dataclass(frozen=True)
class SweepRow:
    left: Endpoint
    right: Endpoint
    midpoint: Fraction
    m_n: int
    bound_left: object     # mpf; +inf at beta = 1
    bound_right: object
    bound_min: object


@dataclass(frozen=True)
class SweepReport:
    """m_n and the induced entropy lower bound on each subinterval of
    constant m_n."""

    n: int
    range: tuple[Fraction, Fraction]
    transitions: tuple[TransitionPoint, ...]
    rows: tuple[SweepRow, ...]

    def to_csv(self, digits: int = 12) -> str:
        lines = ["left,right,midpoint,m_n,bound_left,bound_right,bound_min"]
        for r in self.rows:
            left = render_decimal(r.left, digits)
            right = render_decimal(r.right, digits)
            lines.append(
                f"{left},{right},{r.midpoint},{r.m_n},"
                f"{_fmt_bound(r.bound_left, digits)},"
                f"{_fmt_bound(r.bound_right, digits)},"
                f"{_fmt_bound(r.bound_min, digits)}")
        return "\n".join(lines) + "\n"


def _fmt_bound(b, digits: int) -> str:
    import mpmath
    if b == mpmath.inf:
        return "inf"
    return mpmath.nstr(b, digits)


def _mn_at_rational(args):
    value, n = args
    ctx = BetaContext.from_rational(value)
    return max_overlap(ctx, n).m_n


def sweep_report(n: int, lo: Fraction = Fraction(1), hi: Fraction = Fraction(2),
                 precision: PrecisionContext | None = None,
                 workers: int = 1,
                 cap: int | None = DEFAULT_LENGTH_CAP,
                 journal: "Journal | None" = None) -> SweepReport:
    """Partition the range by the length-n transition points and report m_n
    (at an exact rational midpoint) and the certified lower bound
    log_beta(2/m_n^(1/n)) evaluated at both endpoints of each subinterval."""
    from .entropy import bound_value

    precision = precision or DEFAULT_PRECISION
    lo, hi = Fraction(lo), Fraction(hi)
    pts = transitions(n, lo, hi, precision=precision, workers=workers,
                      cap=cap, journal=journal)
    part = partition(pts, lo, hi)
    if workers > 1 and len(part.midpoints) > 8:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            ms = list(pool.map(_mn_at_rational,
                               [(mid, n) for mid in part.midpoints]))
    else:
        ms = [_mn_at_rational((mid, n)) for mid in part.midpoints]
    rows = []
    for (a, b), mid, m in zip(part.subintervals, part.midpoints, ms):
        bl = bound_value(a, n, m, precision)
        br = bound_value(b, n, m, precision)
        rows.append(SweepRow(a, b, mid, m, bl, br, min(bl, br)))
    return SweepReport(n, (lo, hi), tuple(pts), tuple(rows))


# -- resumable journal ---------------------------------------------------------------

class Journal:
    """Line-delimited JSON journal for interruptible transition runs.

    Each completed polynomial contributes one line carrying its isolated
    roots; a rerun with the same journal skips completed work.
    """

    def __init__(self, path: str):
        self.path = path
        self._fh = None

    def completed(self) -> list[dict]:
        if not os.path.exists(self.path):
            return []
        out = []
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                if rec.get("kind") == "poly":
                    out.append(rec)
        return out

    def record(self, coeffs: Sequence[int],
               intervals: Sequence[tuple[Fraction, Fraction]]) -> None:
        if self._fh is None:
            self._fh = open(self.path, "a")
        rec = {"kind": "poly", "poly": list(coeffs),
               "roots": [[str(a), str(b)] for a, b in intervals]}
        self._fh.write(json.dumps(rec) + "\n")
        self._fh.flush()

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None
