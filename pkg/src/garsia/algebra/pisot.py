"""Pisot classification and the regular Pisot polynomial families.

The test strips cyclotomic factors by trial division, decides the real
conjugates exactly by Sturm counts, and certifies complex conjugate moduli
with rational disk enclosures seeded by numeric root-finding: every disk
radius r satisfies |g(z0)/lc| <= r^deg exactly, so each disk provably
contains a root, and disjointness pins the count.  Precision escalates per
the PrecisionContext before giving up as indeterminate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath

from .polynomials import IntPolynomial, cyclotomic_strip, monomial, ONE
from .precision import DEFAULT_PRECISION, PrecisionContext
from .roots import AlgebraicReal, count_roots_halfopen, isolate_real_roots, sturm_chain


@dataclass(frozen=True)
class PisotCheck:
    """Outcome of a Pisot test.  verdict is True, False or None
    (indeterminate); stripped is the cyclotomic-free cofactor actually
    certified, recorded for auditability."""

    verdict: Union[bool, None]
    stripped: IntPolynomial
    designated: AlgebraicReal | None
    reason: str

    def __bool__(self) -> bool:
        return self.verdict is True

    @property
    def indeterminate(self) -> bool:
        return self.verdict is None


def is_pisot(obj: Union[IntPolynomial, AlgebraicReal],
             precision: PrecisionContext | None = None) -> PisotCheck:
    """Certify whether the designated real root > 1 is a Pisot number.

    For a polynomial the designated root is its unique real root > 1 (two or
    more real roots > 1 yield False); for an AlgebraicReal it is the number
    itself.  The test applies to the cyclotomic-free cofactor of the input
    polynomial; if that cofactor is reducible the verdict describes it as a
    whole (see the recorded certificate).
    """
    precision = precision or DEFAULT_PRECISION
    if isinstance(obj, AlgebraicReal):
        p = obj.poly
        designated = obj
        if designated.compare(1) <= 0:
            return PisotCheck(False, p, None, "root is not > 1")
    else:
        p = obj.normalized()
        designated = None
    if p.degree < 1:
        return PisotCheck(False, p, None, "constant polynomial")

    stripped = cyclotomic_strip(p)
    g = stripped.square_free_part()
    if g.degree < 1:
        return PisotCheck(False, stripped, None,
                          "all factors cyclotomic; no root > 1")

    real_roots = isolate_real_roots(g)
    big = [r for r in real_roots if r.compare(1) > 0]
    if designated is None:
        if not big:
            return PisotCheck(False, stripped, None, "no real root > 1")
        if len(big) > 1:
            return PisotCheck(False, stripped, big[-1],
                              "more than one real root > 1")
        designated = big[0]
    else:
        # cyclotomic stripping cannot remove a root > 1
        others = [r for r in big if r.compare(designated) != 0]
        if others:
            return PisotCheck(False, stripped, designated,
                              f"conjugate {others[0]!r} exceeds 1")

    if g.leading != 1:
        return PisotCheck(None, stripped, designated,
                          "cofactor is not monic; root may not be an "
                          "algebraic integer")

    # real conjugates must lie strictly inside (-1, 1); Phi_1, Phi_2 are
    # stripped, so g(+-1) != 0 and half-open counts are open counts here
    chain = sturm_chain(g.coeffs)
    n_ge1 = count_roots_halfopen(chain, Fraction(1), Fraction(g.root_bound()))
    if n_ge1 != 1:
        return PisotCheck(False, stripped, designated,
                          "a real conjugate has modulus >= 1")
    n_leneg1 = count_roots_halfopen(chain, Fraction(-g.root_bound()),
                                    Fraction(-1))
    if n_leneg1 != 0:
        return PisotCheck(False, stripped, designated,
                          "a real conjugate <= -1")

    n_complex_pairs = (g.degree - len(real_roots)) // 2
    if n_complex_pairs == 0:
        return PisotCheck(True, stripped, designated, "all conjugates real")

    for bits in precision.escalation_bits():
        outcome = _certify_complex_conjugates(g, real_roots, n_complex_pairs,
                                              bits)
        if outcome is not None:
            verdict, reason = outcome
            return PisotCheck(verdict, stripped, designated, reason)
    return PisotCheck(None, stripped, designated,
                      "complex conjugate moduli could not be separated from 1 "
                      "within the escalation budget")


def _certify_complex_conjugates(g, real_roots, n_pairs, bits):
    """One certification attempt; None means escalate."""
    deg = g.degree
    try:
        with mpmath.workprec(bits + 64):
            approx = mpmath.polyroots([mpmath.mpf(c) for c in reversed(g.coeffs)],
                                      maxsteps=200, extraprec=bits)
    except mpmath.libmp.NoConvergence:
        return None
    upper = [z for z in approx if mpmath.im(z) > mpmath.mpf(2) ** (-bits // 2)]
    if len(upper) != n_pairs:
        return None

    disks: list[tuple[Fraction, Fraction, Fraction]] = []  # (re, im, rho2_up)
    lead = g.leading
    for z in upper:
        re, im = _mpf_to_fraction(mpmath.re(z)), _mpf_to_fraction(mpmath.im(z))
        pv_re, pv_im = _eval_complex(g, re, im)
        r2 = (pv_re * pv_re + pv_im * pv_im) / (lead * lead)
        rho2 = _nth_root_upper(r2, deg)  # rho2 >= |g(z0)/lc|^(2/deg)
        disks.append((re, im, rho2))

    # each disk must avoid the real axis: im^2 > rho^2 also separates it
    # from its own conjugate and from every real-root interval
    for re, im, rho2 in disks:
        if im * im <= rho2:
            return None
    # pairwise disjointness, conjugates included: |dz|^2 > 2 rho_i^2 + 2 rho_j^2
    # implies |dz| > rho_i + rho_j
    centers = [(re, im, rho2) for re, im, rho2 in disks]
    centers += [(re, -im, rho2) for re, im, rho2 in disks]
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            dx = centers[i][0] - centers[j][0]
            dy = centers[i][1] - centers[j][1]
            if dx * dx + dy * dy <= 2 * (centers[i][2] + centers[j][2]):
                return None

    # with 2*n_pairs disjoint disks each containing >= 1 root, plus the
    # isolated real roots, every complex root is in exactly one disk
    all_below = True
    for re, im, rho2 in disks:
        m2 = re * re + im * im
        m_up = _sqrt_upper(m2)
        r_up = _sqrt_upper(rho2)
        if m_up + r_up < 1:
            continue
        m_lo = _sqrt_lower(m2)
        if m_lo - r_up >= 1:
            return (False, "a complex conjugate has modulus >= 1")
        all_below = False
    if all_below:
        return (True, "all conjugate moduli certified < 1")
    return None


def _mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    if man == 0:
        return Fraction(0)
    v = Fraction(man) * (Fraction(2) ** exp)
    return -v if sign else v


def _eval_complex(p: IntPolynomial, re: Fraction, im: Fraction):
    """Exact complex Horner: p(re + i*im) as a rational pair."""
    are, aim = Fraction(0), Fraction(0)
    for c in reversed(p.coeffs):
        are, aim = are * re - aim * im + c, are * im + aim * re
    return are, aim


def _sqrt_upper(x: Fraction) -> Fraction:
    n = x.numerator * x.denominator
    s = math.isqrt(n)
    if s * s < n:
        s += 1
    return Fraction(s, x.denominator)


def _sqrt_lower(x: Fraction) -> Fraction:
    n = x.numerator * x.denominator
    return Fraction(math.isqrt(n), x.denominator)


def _nth_root_upper(x: Fraction, k: int) -> Fraction:
    """A rational u with u >= x^(1/k), tight enough for disk certificates."""
    if x == 0:
        return Fraction(0)
    n = x.numerator * x.denominator ** (k - 1)
    r = round(n ** (1.0 / k)) if n < 2**52 else _int_nth_root(n, k)
    while r ** k < n:
        r += 1
    while r > 1 and (r - 1) ** k >= n:
        r -= 1
    return Fraction(r, x.denominator)


def _int_nth_root(n: int, k: int) -> int:
    hi = 1 << ((n.bit_length() + k - 1) // k + 1)
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo


# -- Amara limit points and the regular Pisot families -----------------------

def amara_limit_poly(kind: str, r: int = 1) -> IntPolynomial:
    """Defining polynomials of the limit points of the Pisot numbers in
    (1, 2): phi_r, psi_r and the isolated quartic chi."""
    if kind == "phi":
        if r < 1:
            raise ValueError("r must be >= 1")
        # x^(r+1) - 2 x^r + x - 1
        return (monomial(r + 1) - 2 * monomial(r)
                + IntPolynomial((-1, 1)))
    if kind == "psi":
        if r < 1:
            raise ValueError("r must be >= 1")
        # x^(r+1) - x^r - ... - x - 1
        return monomial(r + 1) - IntPolynomial((1,) * (r + 1))
    if kind == "chi":
        return IntPolynomial((1, 0, -2, -1, 1))
    raise ValueError(f"unknown limit kind {kind!r}")


#: perturbation polynomials of the regular Pisot families, by limit kind
REGULAR_VARIANTS = {
    "phi": (
        lambda r: monomial(r) - monomial(r - 1) + ONE,
        lambda r: monomial(r) - monomial(1) + ONE,
        lambda r: (monomial(r) + ONE) * IntPolynomial((-1, 1)),
    ),
    "psi": (
        lambda r: monomial(r + 1) - ONE,
        lambda r: IntPolynomial((1,) * r),  # (x^r - 1)/(x - 1)
    ),
    "chi": (
        lambda r: IntPolynomial((-1, -1, 1, 1)),   # x^3 + x^2 - x - 1
        lambda r: IntPolynomial((1, 0, -1, 0, 1)),  # x^4 - x^2 + 1
    ),
}


def regular_pisot_poly(kind: str, r: int, variant: int, n: int,
                       sign: int = 1) -> IntPolynomial:
    """Defining polynomial  limit(x) * x^n +/- perturbation(x)  of a regular
    Pisot number.  The result may carry cyclotomic factors and is only
    guaranteed a Pisot root for n large enough; run it through
    cyclotomic_strip and is_pisot to certify."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if n < 0:
        raise ValueError("n must be >= 0")
    variants = REGULAR_VARIANTS.get(kind)
    if variants is None:
        raise ValueError(f"unknown limit kind {kind!r}")
    if not 0 <= variant < len(variants):
        raise ValueError(f"{kind} has variants 0..{len(variants) - 1}")
    base = amara_limit_poly(kind, r)
    return base.shift_up(n) + sign * variants[variant](r)


def multinacci_poly(m: int) -> IntPolynomial:
    """x^m - x^(m-1) - ... - x - 1, the minimal polynomial of tau_m."""
    if m < 2:
        raise ValueError("m must be >= 2")
    return amara_limit_poly("psi", m - 1)


def multinacci_root(m: int) -> AlgebraicReal:
    roots = isolate_real_roots(multinacci_poly(m), 1, 2)
    assert len(roots) == 1
    return roots[0]
