"""Certified complex root isolation and rational reconstruction.

Floating point appears only inside the Aberth iteration that produces
approximations; everything after that is exact.  A Weierstrass-type a
posteriori bound turns the approximations into certified disks: with
W_i = P(z_i) / (lc(P) * prod_{j != i} (z_i - z_j)) computed in exact rational
arithmetic, every root of P lies in the union of the disks D(z_i, n*|W_i|),
and when those disks are pairwise disjoint each contains exactly one root.
Disjointness and radii are checked with exact squared comparisons, so a
returned isolation is a proof, not a heuristic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath

from ..errors import Ambiguous, PrecisionExhausted
from .balls import ComplexBall, RealBall, frac_sqrt_lb, frac_sqrt_ub, round_frac
from .intpoly import IntPoly

_OFFSETS = (0.0, 0.25, 0.37, 0.51, 0.63, 0.79)


def _mpf_to_frac(x) -> Fraction:
    # read the mantissa directly; mpmath.mpf(x) would re-round to the
    # ambient precision and silently discard accuracy.  The int() calls
    # matter: with the gmpy2 backend the mantissa is a gmpy2.mpz, which
    # must not leak into Fraction internals.
    sign, man, exp, _ = x._mpf_
    man, exp = int(man), int(exp)
    if man == 0 and exp != 0:
        raise ValueError("non-finite float in root iteration")
    v = Fraction(man)
    if exp >= 0:
        v *= 1 << exp
    else:
        v /= 1 << (-exp)
    return -v if sign else v


def _aberth(poly: IntPoly, wp: int, warm: Optional[List[complex]] = None,
            offset: float = 0.0) -> List[mpmath.mpc]:
    """Aberth-Ehrlich simultaneous iteration at wp bits of working precision.

    Deterministic: fixed initial circle (plus ladder offset) or warm-start
    points.  Returns approximations in iteration order; no certification
    happens here.
    """
    n = poly.degree

    def ev(cs, z):
        acc = mpmath.mpc(0)
        for c in reversed(cs):
            acc = acc * z + c
        return acc

    with mpmath.workprec(wp):
        # conversion must happen at working precision or big integer
        # coefficients get truncated
        coeffs = [mpmath.mpf(c) for c in poly.coefficients]
        dcoeffs = [mpmath.mpf(c) for c in poly.derivative().coefficients]
        if warm is not None:
            zs = [mpmath.mpc(z) for z in warm]
        else:
            lead = abs(coeffs[-1])
            radius = 1 + max(abs(c) for c in coeffs[:-1]) / lead
            zs = [radius * mpmath.expjpi(mpmath.mpf(2 * k + 1) / n
                                         + mpmath.mpf(0.401) + offset)
                  for k in range(n)]
        tol = mpmath.mpf(2) ** (-wp + 8)
        for _ in range(60 + 10 * n):
            max_step = mpmath.mpf(0)
            new = list(zs)
            for i in range(n):
                zi = zs[i]
                pv = ev(coeffs, zi)
                dv = ev(dcoeffs, zi)
                if dv == 0:
                    new[i] = zi + mpmath.mpc(tol, tol)
                    max_step = mpmath.mpf(1)
                    continue
                w = pv / dv
                s = mpmath.mpc(0)
                collision = False
                for j in range(n):
                    if j == i:
                        continue
                    diff = zi - zs[j]
                    if diff == 0:
                        collision = True
                        break
                    s += 1 / diff
                if collision:
                    new[i] = zi + mpmath.mpc(tol, -tol)
                    max_step = mpmath.mpf(1)
                    continue
                denom = 1 - w * s
                step = w if denom == 0 else w / denom
                new[i] = zi - step
                scale = max(mpmath.mpf(1), abs(zi))
                rel = abs(step) / scale
                if rel > max_step:
                    max_step = rel
            zs = new
            if max_step < tol:
                break
        return zs


def _eval_exact(poly: IntPoly, re: Fraction, im: Fraction) -> Tuple[Fraction, Fraction]:
    ar, ai = Fraction(0), Fraction(0)
    for c in reversed(poly.coefficients):
        ar, ai = ar * re - ai * im + c, ar * im + ai * re
    return ar, ai


def _certify(poly: IntPoly, approx: List[Tuple[Fraction, Fraction]]) -> Optional[List[ComplexBall]]:
    """Exact Weierstrass bound: disks of radius n*|W_i| around each point.

    Returns certified pairwise-disjoint balls, or None when disjointness
    fails at this precision.
    """
    n = poly.degree
    lead = Fraction(poly.leading)
    balls = []
    for i, (xr, xi) in enumerate(approx):
        pr, pi = _eval_exact(poly, xr, xi)
        dr, di = lead, Fraction(0)
        for j, (yr, yi) in enumerate(approx):
            if j == i:
                continue
            br, bi = xr - yr, xi - yi
            dr, di = dr * br - di * bi, dr * bi + di * br
        nsq = dr * dr + di * di
        if nsq == 0:
            return None
        wr = (pr * dr + pi * di) / nsq
        wi = (pi * dr - pr * di) / nsq
        rad = n * frac_sqrt_ub(wr * wr + wi * wi)
        balls.append(ComplexBall(xr, xi, rad))
    for i in range(n):
        for j in range(i + 1, n):
            if not balls[i].disjoint(balls[j]):
                return None
    return balls


def _small_enough(balls: Sequence[ComplexBall], prec: int) -> bool:
    eps = Fraction(1, 1 << prec)
    for b in balls:
        scale = max(Fraction(1), abs(b.re) + abs(b.im))
        if b.rad > eps * scale:
            return False
    return True


def _round_points(zs, bits: int) -> List[Tuple[Fraction, Fraction]]:
    out = []
    for z in zs:
        re, _ = round_frac(_mpf_to_frac(z.real), bits)
        im, _ = round_frac(_mpf_to_frac(z.imag), bits)
        out.append((re, im))
    return out


def isolate_roots(poly: IntPoly, prec: int) -> List[ComplexBall]:
    """Certified pairwise-disjoint enclosures of the distinct roots of poly.

    Each ball has radius at most 2^-prec relative to max(1, |midpoint|).
    The list is sorted by exact (real, imaginary) midpoint order, which is
    deterministic for a fixed input and precision.  Multiple roots are
    handled by isolating the squarefree part.
    """
    if poly.degree < 0:
        raise ValueError("zero polynomial has no isolated roots")
    sf = poly.squarefree_part()
    if sf.degree == 0:
        return []
    coeff_bits = max(abs(c).bit_length() for c in sf.coefficients)
    wp = max(64, 2 * prec + 32, coeff_bits + 48)
    warm: Optional[List[complex]] = None
    for attempt in range(12):
        offset = _OFFSETS[min(attempt, len(_OFFSETS) - 1)]
        zs = _aberth(sf, wp, warm=warm, offset=offset)
        pts = _round_points(zs, wp)
        balls = _certify(sf, pts)
        if balls is not None and _small_enough(balls, prec):
            return sorted(balls, key=lambda b: (b.re, b.im))
        warm = [complex(z.real, z.imag) for z in zs] if balls is not None else None
        wp *= 2
    raise PrecisionExhausted(
        f"root isolation failed for degree {sf.degree} at {wp} bits")


def refine_roots(poly: IntPoly, prev: Sequence[ComplexBall], prec: int) -> List[ComplexBall]:
    """Re-isolate at higher precision, preserving the order of prev.

    Each refined ball is matched to the unique previous ball it meets; both
    enclose the same true root, so the matching must be a bijection and any
    failure triggers escalation.
    """
    sf = poly.squarefree_part()
    coeff_bits = max(abs(c).bit_length() for c in sf.coefficients)
    wp = max(64, 2 * prec + 32, coeff_bits + 48)
    warm = [complex(float(b.re), float(b.im)) for b in prev]
    for _ in range(12):
        zs = _aberth(sf, wp, warm=warm)
        pts = _round_points(zs, wp)
        balls = _certify(sf, pts)
        if balls is not None and _small_enough(balls, prec):
            matched: List[Optional[ComplexBall]] = [None] * len(prev)
            ok = True
            for nb in balls:
                hits = [k for k, pb in enumerate(prev) if nb.intersects(pb)]
                if len(hits) != 1 or matched[hits[0]] is not None:
                    ok = False
                    break
                matched[hits[0]] = nb
            if ok and all(m is not None for m in matched):
                return [m for m in matched if m is not None]
        warm = [complex(z.real, z.imag) for z in zs]
        wp *= 2
    raise PrecisionExhausted("root refinement failed to re-match enclosures")


# --- rational reconstruction ---

def _simplest_in(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the closed interval
    [lo, hi] (ties among integers resolved toward ceil(lo))."""
    if lo > hi:
        raise ValueError("empty interval")
    fl = math.ceil(lo)
    if fl <= hi:
        return Fraction(fl)
    # now floor(lo) == floor(hi) and neither endpoint is an integer
    base = math.floor(lo)
    inner = _simplest_in(Fraction(1) / (hi - base), Fraction(1) / (lo - base))
    return base + 1 / inner


def _farey_neighbors(x: Fraction, n: int) -> Tuple[Fraction, Fraction]:
    """Immediate left and right neighbors of x in the Farey sequence of
    order n (x must have denominator <= n)."""
    p, q = x.numerator, x.denominator
    if q == 1:
        return Fraction(p * n - 1, n), Fraction(p * n + 1, n)
    pinv = pow(p % q, -1, q)
    b = n - (n - pinv) % q            # largest b <= n, b = pinv mod q
    d = n - (n + pinv) % q            # largest d <= n, d = -pinv mod q
    left = Fraction((p * b - 1) // q, b)
    right = Fraction((p * d + 1) // q, d)
    return left, right


def rational_reconstruct(ball, max_den: int) -> Optional[Fraction]:
    """The unique rational with denominator <= max_den inside the enclosure.

    Accepts a ComplexBall (imaginary part must cover zero) or RealBall.
    Returns None when the interval certifiably contains no rational of
    denominator <= max_den, and raises Ambiguous when it contains more
    than one.
    """
    if max_den < 1:
        raise ValueError("denominator bound must be positive")
    if isinstance(ball, ComplexBall):
        if not ball.imag_interval().contains_zero():
            return None
        iv = ball.real_interval()
    elif isinstance(ball, RealBall):
        iv = ball
    else:
        iv = RealBall(Fraction(ball), Fraction(0))
    lo, hi = iv.lo, iv.hi
    best = _simplest_in(lo, hi)
    if best.denominator > max_den:
        return None
    left, right = _farey_neighbors(best, max_den)
    if left >= lo or right <= hi:
        # interval endpoints can be astronomically long fractions; never
        # format them into the message
        raise Ambiguous(
            f"interval of width ~2^{(hi - lo).numerator.bit_length() - (hi - lo).denominator.bit_length()} "
            f"admits several rationals with denominator <= {max_den}")
    return best


# --- argument enclosures (candidate generation only) ---

def arg_ball(ball: ComplexBall, prec: int) -> Tuple[Fraction, Fraction]:
    """(midpoint, radius) enclosure of arg(z) over the disk.

    The radius uses arcsin(r/|m|) <= 2 r/|m| plus the evaluation error of
    atan2 at the midpoint.  Used only to seed lattice-based relation
    candidates, which are verified exactly downstream.
    """
    lb = frac_sqrt_lb(ball.abs_sq_mid()) - ball.rad
    if lb <= 0:
        raise Ambiguous("disk too close to the origin for an argument bound")
    with mpmath.workprec(prec + 16):
        a = mpmath.atan2(mpmath.mpf(ball.im.numerator) / ball.im.denominator,
                         mpmath.mpf(ball.re.numerator) / ball.re.denominator)
        mid = _mpf_to_frac(a)
    rad = 2 * ball.rad / lb + Fraction(1, 1 << prec)
    return mid, rad


def two_pi_ball(prec: int) -> Tuple[Fraction, Fraction]:
    """(midpoint, radius) enclosure of 2*pi at roughly prec bits."""
    with mpmath.workprec(prec + 16):
        mid = _mpf_to_frac(2 * mpmath.pi)
    return mid, Fraction(1, 1 << prec)
