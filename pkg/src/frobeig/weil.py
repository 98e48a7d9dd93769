"""Validation and structure of characteristic polynomials of Frobenius.

A q-Weil polynomial is monic of even degree 2g over Z, satisfies the
functional equation a_i = q^(g-i) * a_(2g-i), and has all roots of modulus
sqrt(q).  The functional equation is a finite integer check; the modulus
condition is certified through root enclosures: the map z -> q / conj(z)
permutes the true roots, so if the enclosure of q / conj(root_i) meets
exactly the enclosure of root_i itself, that root provably has modulus
sqrt(q), and if it meets a different enclosure the input is provably not
a Weil polynomial.

The module also factors the polynomial into Q-irreducibles by recombining
certified root subsets, and computes base change along finite field
extensions as an exact resultant (realized as the characteristic polynomial
of a companion matrix power).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .config import DEFAULT, Settings
from .errors import (Ambiguous, FunctionalEquationFailed,
                     InternalInconsistency, MalformedInput, NotPrimePower,
                     NotSimple, PrecisionExhausted, RootModulusFailed)
from .exactmath.balls import ComplexBall
from .exactmath.intpoly import IntPoly
from .exactmath.roots import isolate_roots, refine_roots
from .quadforms import charpoly_exact


def prime_power_decomposition(q: int) -> Tuple[int, int]:
    """(p, e) with q = p^e and p prime; NotPrimePower otherwise."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    n = q
    p = None
    d = 2
    while d * d <= n:
        if n % d == 0:
            p = d
            while n % d == 0:
                n //= d
            break
        d += 1
    if p is None:
        return q, 1          # q itself prime
    if n != 1:
        raise NotPrimePower(f"{q} has at least two prime divisors")
    e = 0
    m = q
    while m > 1:
        m //= p
        e += 1
    return p, e


@dataclass(frozen=True)
class Factor:
    """A Q-irreducible factor with its multiplicity in the input and the
    indices (into the distinct-root list) of its roots."""
    poly: IntPoly
    multiplicity: int
    root_indices: Tuple[int, ...]


@dataclass(frozen=True)
class WeilData:
    """Validated Weil polynomial with certified root data.

    roots are pairwise-disjoint enclosures of the distinct roots in
    canonical order (sorted by exact midpoint, real part then imaginary
    part).  iota is the involution z -> q/z = conj(z) as a permutation of
    root indices; its fixed points are exactly the real roots +-sqrt(q).
    """
    q: int
    p: int
    e: int
    g: int
    poly: IntPoly
    factors: Tuple[Factor, ...]
    roots: Tuple[ComplexBall, ...]
    root_mult: Tuple[int, ...]
    iota: Tuple[int, ...]
    prec: int

    @property
    def is_simple(self) -> bool:
        return len(self.factors) == 1

    @property
    def multiplicity(self) -> int:
        """Exponent m when poly = f^m with f irreducible; NotSimple else."""
        if not self.is_simple:
            raise NotSimple(
                "polynomial has several irreducible factors; multiplicity "
                "is defined for simple inputs only")
        return self.factors[0].multiplicity

    @property
    def real_root_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.iota) if i == j)

    def distinct_root_count(self) -> int:
        return len(self.roots)


def _match_permutation(images: Sequence[ComplexBall],
                       targets: Sequence[ComplexBall]) -> Optional[List[int]]:
    """For each image ball, the unique target it intersects; None when any
    image meets zero or several targets (insufficient precision)."""
    perm = []
    for img in images:
        hits = [j for j, t in enumerate(targets) if img.intersects(t)]
        if len(hits) != 1:
            return None
        perm.append(hits[0])
    if sorted(perm) != list(range(len(targets))):
        return None
    return perm


def _conjugation_permutation(roots: Sequence[ComplexBall]) -> Optional[List[int]]:
    return _match_permutation([b.conjugate() for b in roots], roots)


def _modulus_permutation(q: int, roots: Sequence[ComplexBall]) -> Optional[List[int]]:
    images = [b.conjugate().inverse().scale(q) for b in roots]
    return _match_permutation(images, roots)


def _factor_search(sf: IntPoly, balls: Sequence[ComplexBall]) -> Optional[List[Tuple[IntPoly, Tuple[int, ...]]]]:
    """Irreducible factors of the squarefree polynomial sf by recombining
    root subsets, smallest subsets first.

    Returns None when some coefficient enclosure is too wide to round to a
    unique integer (caller escalates precision).  A returned factorization
    is exact and complete: candidate polynomials are accepted only after
    exact division, and minimality of the subsets gives irreducibility.
    """
    lead = sf.leading
    remaining = list(range(len(balls)))
    found: List[Tuple[IntPoly, Tuple[int, ...]]] = []
    quotient = sf
    size = 1
    while remaining and size <= len(remaining) // 2:
        hit = None
        for subset in combinations(remaining, size):
            # expand lead * prod (X - root_i) with ball arithmetic
            coeffs = [ComplexBall.exact(lead)]
            for i in subset:
                b = balls[i]
                nxt = [ComplexBall.exact(0)] * (len(coeffs) + 1)
                for t, c in enumerate(coeffs):
                    nxt[t + 1] = nxt[t + 1] + c
                    nxt[t] = nxt[t] + c * (-b)
                coeffs = nxt
            ints = []
            for c in coeffs:
                n = c.unique_integer()      # Ambiguous propagates up
                if n is None:
                    break                   # provably non-integer: skip subset
                ints.append(n)
            else:
                cand = IntPoly(tuple(ints))
                if cand.divides(quotient):
                    hit = (cand, subset)
                    break
        if hit is None:
            size += 1
            continue
        cand, subset = hit
        found.append((cand.primitive_part(), tuple(subset)))
        quotient = quotient.exact_div(cand)
        remaining = [i for i in remaining if i not in subset]
        # factors below the current size are exhausted; stay at this size
    if remaining:
        found.append((quotient.primitive_part(), tuple(remaining)))
    return found


def q_factorization(poly: IntPoly, settings: Settings = DEFAULT,
                    balls: Optional[Sequence[ComplexBall]] = None,
                    prec: Optional[int] = None) -> Tuple[Tuple[Factor, ...], Tuple[ComplexBall, ...], int]:
    """Factor a monic integer polynomial into Q-irreducibles.

    Returns (factors, distinct root enclosures, achieved precision).  The
    root subsets behind each factor are recorded so multiplicity data per
    root is exact rather than re-derived numerically.
    """
    if poly.degree < 1:
        raise MalformedInput("cannot factor a constant polynomial")
    if poly.degree > settings.factor_degree_cap:
        raise MalformedInput(
            f"degree {poly.degree} exceeds the factorization cap "
            f"{settings.factor_degree_cap}")
    sf = poly.squarefree_part()
    if prec is None:
        prec = settings.precision_start
    if balls is None:
        balls = isolate_roots(poly, prec)
    while True:
        try:
            flat = _factor_search(sf, balls)
            break
        except Ambiguous:
            prec *= 2
            if prec > settings.precision_ceiling:
                raise PrecisionExhausted(
                    "factorization undecided at the precision ceiling")
            balls = refine_roots(poly, balls, prec)
    factors = []
    for fpoly, idxs in flat:
        mult = 0
        probe = poly
        while fpoly.divides(probe):
            probe = probe.exact_div(fpoly)
            mult += 1
        factors.append(Factor(poly=fpoly, multiplicity=mult,
                              root_indices=idxs))
    recon = IntPoly((1,))
    for f in factors:
        recon = recon * f.poly ** f.multiplicity
    if recon != poly:
        raise InternalInconsistency("factor product does not rebuild input")
    return tuple(factors), tuple(balls), prec


def validate(q: int, coefficients: Sequence[int],
             settings: Settings = DEFAULT) -> WeilData:
    """Validate a q-Weil polynomial and assemble its certified root data.

    Checks, in order: q is a prime power; the polynomial is monic of even
    degree over Z; the functional equation holds; every root has modulus
    sqrt(q) (certified, with a witness root on failure).
    """
    p, e = prime_power_decomposition(q)
    try:
        coeffs = tuple(int(c) for c in coefficients)
        if any(int(c) != c for c in coefficients):
            raise ValueError
    except (TypeError, ValueError):
        raise MalformedInput("coefficients must be integers")
    poly = IntPoly(coeffs)
    if poly.degree < 2 or poly.degree % 2 != 0:
        raise MalformedInput(
            f"degree must be a positive even integer, got {poly.degree}")
    if not poly.is_monic():
        raise MalformedInput("polynomial must be monic")
    g = poly.degree // 2
    a = poly.coefficients
    for i in range(g):
        if a[i] != q ** (g - i) * a[2 * g - i]:
            raise FunctionalEquationFailed(
                f"coefficient {i}: expected q^{g - i} * a_{2 * g - i} "
                f"= {q ** (g - i) * a[2 * g - i]}, found {a[i]}")

    prec = settings.precision_start
    balls = list(isolate_roots(poly, prec))
    while True:
        perm = _modulus_permutation(q, balls)
        conj = _conjugation_permutation(balls)
        if perm is not None and conj is not None:
            break
        prec *= 2
        if prec > settings.precision_ceiling:
            raise PrecisionExhausted(
                "root matching undecided at the precision ceiling")
        balls = refine_roots(poly, balls, prec)
    # q / conj(root) is always some root; it is the root itself exactly
    # when |root|^2 = q, so the matching must be the identity
    for i, j in enumerate(perm):
        if i != j:
            b = balls[i]
            raise RootModulusFailed(
                f"root near {complex(float(b.re), float(b.im)):.6g} has "
                f"modulus^2 != {q}",
                witness={"root_re": str(b.re), "root_im": str(b.im),
                         "abs_sq_midpoint": str(b.abs_sq_mid()),
                         "expected": str(q)})

    factors, balls_t, prec = q_factorization(poly, settings,
                                             balls=balls, prec=prec)
    mult_by_root = {}
    for f in factors:
        for idx in f.root_indices:
            mult_by_root[idx] = f.multiplicity
    root_mult = tuple(mult_by_root[i] for i in range(len(balls_t)))
    return WeilData(q=q, p=p, e=e, g=g, poly=poly, factors=factors,
                    roots=balls_t, root_mult=root_mult,
                    iota=tuple(conj), prec=prec)


def base_change(poly: IntPoly, k: int) -> IntPoly:
    """Weil polynomial after extending the base field by degree k.

    The roots become k-th powers, so the result is the characteristic
    polynomial of the k-th power of the companion matrix of the input,
    computed exactly over Z.
    """
    if k < 1:
        raise MalformedInput("extension degree must be positive")
    n = poly.degree
    if n < 1 or not poly.is_monic():
        raise MalformedInput("base change needs a monic nonconstant polynomial")
    comp = [[0] * n for _ in range(n)]
    for i in range(1, n):
        comp[i][i - 1] = 1
    for i in range(n):
        comp[i][n - 1] = -poly.coefficients[i]
    power = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    base = comp
    kk = k
    while kk:
        if kk & 1:
            power = _imat_mul(power, base)
        base = _imat_mul(base, base)
        kk >>= 1
    cp = charpoly_exact([[Fraction(x) for x in row] for row in power])
    out = []
    for c in cp:
        if c.denominator != 1:
            raise InternalInconsistency("companion charpoly not integral")
        out.append(int(c))
    return IntPoly(tuple(out))


def _imat_mul(a, b):
    n = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)]
