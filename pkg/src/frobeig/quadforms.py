"""Exact quadratic form invariants and certified signature transfer.

All matrices are rational, held as lists of Fraction rows.  Signatures are
computed by symmetric congruence diagonalization, spectra are located with
Sturm chains, and the transfer engine moves a signature from a side where
the form is positive definite to a side where it is not, through an exact
characteristic polynomial comparison.  Nothing here is numerical: every
verdict is backed by integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import (CharpolyMismatch, InternalInconsistency, MalformedInput,
                     NondegeneracyFailed, NotPositiveDefinite,
                     NotPositiveSpectrum, NotSelfAdjoint, NotSymmetric)
from .exactmath.intpoly import (qpoly_clear_denominators, qpoly_divmod,
                                qpoly_strip, yun_decomposition)

QMat = List[List[Fraction]]


def to_qmat(rows: Sequence[Sequence]) -> QMat:
    if not rows:
        raise MalformedInput("empty matrix")
    n = len(rows)
    out = []
    for row in rows:
        if len(row) != n:
            raise MalformedInput("matrix is not square")
        out.append([Fraction(x) for x in row])
    return out


def check_symmetric(mat: QMat, what: str = "matrix") -> None:
    n = len(mat)
    for i in range(n):
        for j in range(i + 1, n):
            if mat[i][j] != mat[j][i]:
                raise NotSymmetric(f"{what} differs at ({i},{j}) vs ({j},{i})")


def mat_mul_q(a: QMat, b: QMat) -> QMat:
    n = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)]


def mat_inverse(a: QMat) -> QMat:
    """Exact inverse by Gauss-Jordan; NondegeneracyFailed when singular."""
    n = len(a)
    work = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
            for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if work[r][c] != 0), None)
        if piv is None:
            raise NondegeneracyFailed("matrix is singular")
        work[c], work[piv] = work[piv], work[c]
        inv = 1 / work[c][c]
        work[c] = [x * inv for x in work[c]]
        for r in range(n):
            if r != c and work[r][c] != 0:
                f = work[r][c]
                work[r] = [x - f * y for x, y in zip(work[r], work[c])]
    return [row[n:] for row in work]


def signature(gram) -> Tuple[int, int]:
    """Signature (positive count, negative count) of a symmetric rational
    matrix, by congruence diagonalization.

    Raises NotSymmetric or, for a singular form, NondegeneracyFailed.
    """
    a = to_qmat(gram)
    check_symmetric(a)
    n = len(a)

    def sym_swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]

    def sym_add(i, j, c):
        # row_i += c row_j, then the mirrored column operation
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        for row in a:
            row[i] += c * row[j]

    pos = neg = 0
    for k in range(n):
        if a[k][k] == 0:
            j = next((t for t in range(k + 1, n) if a[t][t] != 0), None)
            if j is not None:
                sym_swap(k, j)
            else:
                j = next((t for t in range(k + 1, n) if a[k][t] != 0), None)
                if j is None:
                    raise NondegeneracyFailed(
                        f"form is degenerate (zero row at step {k})")
                sym_add(k, j, Fraction(1))   # makes a[k][k] = 2 a[k][j]
        pivot = a[k][k]
        if pivot > 0:
            pos += 1
        else:
            neg += 1
        for t in range(k + 1, n):
            if a[t][k] != 0:
                sym_add(t, k, -a[t][k] / pivot)
    return pos, neg


def is_positive_definite(gram) -> bool:
    try:
        p, q = signature(gram)
    except NondegeneracyFailed:
        return False
    return q == 0


def charpoly_exact(mat) -> List[Fraction]:
    """Characteristic polynomial det(X*I - mat), coefficients low to high,
    by the Faddeev-LeVerrier recurrence."""
    a = to_qmat(mat)
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        am = mat_mul_q(a, mk)
        ck = -sum(am[i][i] for i in range(n)) / k
        coeffs[n - k] = ck
        mk = [[am[i][j] + (ck if i == j else 0) for j in range(n)]
              for i in range(n)]
    return coeffs


# --- Sturm chains ---

def sturm_chain(p: List[Fraction]) -> List[List[Fraction]]:
    """Sturm chain of a squarefree rational polynomial (low-to-high)."""
    p0 = qpoly_strip(list(p))
    p1 = [i * c for i, c in enumerate(p0)][1:]
    chain = [p0, qpoly_strip(p1)]
    while len(chain[-1]) > 1:
        _, rem = qpoly_divmod(chain[-2], chain[-1])
        rem = qpoly_strip([-c for c in rem])
        if not rem:
            break
        chain.append(rem)
    return [c for c in chain if c]


def _variations(signs: List[int]) -> int:
    signs = [s for s in signs if s]
    return sum(1 for x, y in zip(signs, signs[1:]) if x * y < 0)


def _sign_at(poly: List[Fraction], x: Fraction) -> int:
    acc = Fraction(0)
    for c in reversed(poly):
        acc = acc * x + c
    return (acc > 0) - (acc < 0)


def _sign_at_inf(poly: List[Fraction], positive: bool) -> int:
    lead = poly[-1]
    s = (lead > 0) - (lead < 0)
    if positive:
        return s
    return s if (len(poly) - 1) % 2 == 0 else -s


def count_real_roots(p: List[Fraction], lo: Optional[Fraction] = None,
                     hi: Optional[Fraction] = None) -> int:
    """Distinct real roots of squarefree p in (lo, hi]; None means +-infinity."""
    chain = sturm_chain(p)
    at_lo = [_sign_at(c, lo) if lo is not None else _sign_at_inf(c, False)
             for c in chain]
    at_hi = [_sign_at(c, hi) if hi is not None else _sign_at_inf(c, True)
             for c in chain]
    return _variations(at_lo) - _variations(at_hi)


def real_spectrum_summary(p: List[Fraction]) -> Tuple[int, int, bool]:
    """(distinct real roots, distinct roots, all real) for a rational
    polynomial, multiplicity handled by squarefree decomposition."""
    ip = qpoly_clear_denominators(list(p))
    distinct_real = 0
    distinct = 0
    for factor, _mult in yun_decomposition(ip):
        fr = [Fraction(c) for c in factor.coefficients]
        distinct += factor.degree
        distinct_real += count_real_roots(fr)
    return distinct_real, distinct, distinct_real == distinct


def spectrum_all_real_positive(p: List[Fraction]) -> bool:
    """True when every complex root of p is a (strictly) positive real."""
    ip = qpoly_clear_denominators(list(p))
    if ip.degree < 0:
        raise MalformedInput("zero polynomial has no spectrum")
    if ip.coefficients[0] == 0:
        return False          # zero eigenvalue
    for factor, _mult in yun_decomposition(ip):
        fr = [Fraction(c) for c in factor.coefficients]
        d = factor.degree
        if d == 0:
            continue
        if count_real_roots(fr, lo=Fraction(0)) != d:
            return False
    return True


# --- certified transfer ---

@dataclass(frozen=True)
class SignatureCertificate:
    """Witness that gram and gram*u share a signature.

    The hypotheses (u self-adjoint for gram, spectrum positive real) force
    equality; the certificate also records that both signatures were
    recomputed independently and agreed.
    """
    signature: Tuple[int, int]
    u_charpoly: Tuple[Fraction, ...]


@dataclass(frozen=True)
class TransferResult:
    verdict: str                       # "SignaturesEqual"
    signature: Tuple[int, int]
    charpoly: Tuple[Fraction, ...]


@dataclass(frozen=True)
class AmFilterResult:
    multiplicity: int
    determined: bool
    candidates: Tuple[Tuple[int, int], ...]
    note: str


def constant_signature_certify(gram, u) -> SignatureCertificate:
    """Certify signature(gram) == signature(gram*u) for a deformation u.

    Requirements, all checked exactly: gram symmetric and nondegenerate,
    gram*u symmetric (u self-adjoint for the form), and the spectrum of u
    positive real.  Such a u connects the two forms through nondegenerate
    symmetric matrices, so the signature cannot jump; both signatures are
    still computed independently and compared.
    """
    g = to_qmat(gram)
    uu = to_qmat(u)
    if len(g) != len(uu):
        raise MalformedInput("matrix dimensions differ")
    check_symmetric(g, "base form")
    moved = mat_mul_q(g, uu)
    try:
        check_symmetric(moved, "transported form")
    except NotSymmetric as exc:
        raise NotSelfAdjoint(
            f"deformation is not self-adjoint for the form: {exc}") from exc
    cp = charpoly_exact(uu)
    if not spectrum_all_real_positive(cp):
        raise NotPositiveSpectrum(
            "deformation spectrum is not positive real")
    sig_base = signature(g)
    sig_moved = signature(moved)
    if sig_base != sig_moved:
        raise InternalInconsistency(
            f"certified-equal signatures differ: {sig_base} vs {sig_moved}")
    return SignatureCertificate(signature=sig_base, u_charpoly=tuple(cp))


def tannaka_transfer(side_a_base, side_a_moved, side_b_base, side_b_moved) -> TransferResult:
    """Transfer signature equality from a positive definite realization.

    side_a_* are the images of a form pair under a functor where the base
    form is positive definite; side_b_* are the images of the same pair
    under another functor.  The comparison endomorphisms u = base^-1 *
    moved must have identical characteristic polynomials on both sides
    (they realize the same abstract endomorphism); positivity on side A
    forces a positive real spectrum, which transports to side B and pins
    the signature there.
    """
    a0 = to_qmat(side_a_base)
    a1 = to_qmat(side_a_moved)
    b0 = to_qmat(side_b_base)
    b1 = to_qmat(side_b_moved)
    if not (len(a0) == len(a1) and len(b0) == len(b1) and len(a0) == len(b0)):
        raise MalformedInput("the four matrices must share one dimension")
    for m, name in ((a0, "side A base"), (a1, "side A moved"),
                    (b0, "side B base"), (b1, "side B moved")):
        check_symmetric(m, name)
    if signature(a0) != (len(a0), 0):
        raise NotPositiveDefinite("side A base form is not positive definite")
    u = mat_mul_q(mat_inverse(a0), a1)
    v = mat_mul_q(mat_inverse(b0), b1)
    cp_u = charpoly_exact(u)
    cp_v = charpoly_exact(v)
    if cp_u != cp_v:
        raise CharpolyMismatch(
            "comparison endomorphisms disagree: "
            f"{_poly_str(cp_u)} vs {_poly_str(cp_v)}")
    if not spectrum_all_real_positive(cp_u):
        raise NotPositiveSpectrum(
            "comparison endomorphism spectrum is not positive real "
            "(side A moved form cannot be positive definite)")
    cert = constant_signature_certify(b0, v)
    return TransferResult(verdict="SignaturesEqual",
                          signature=cert.signature,
                          charpoly=tuple(cp_u))


def am_filter(multiplicity: int) -> AmFilterResult:
    """Signature candidates for an exotic class pair, filtered by the
    multiplicity of the Frobenius eigenvalue.

    Odd multiplicity forces positivity, (2, 0).  Multiplicity 2 mod 4
    rules out the split signature (1, 1) by a parity argument but cannot
    separate (2, 0) from (0, 2); multiplicity 0 mod 4 eliminates nothing.
    """
    if multiplicity < 1:
        raise MalformedInput("multiplicity must be positive")
    if multiplicity % 2 == 1:
        return AmFilterResult(multiplicity=multiplicity, determined=True,
                              candidates=((2, 0),),
                              note="odd multiplicity forces positivity")
    if multiplicity % 4 == 2:
        return AmFilterResult(multiplicity=multiplicity, determined=False,
                              candidates=((2, 0), (0, 2)),
                              note="even multiplicity: parity excludes (1, 1) only")
    return AmFilterResult(multiplicity=multiplicity, determined=False,
                          candidates=((2, 0), (1, 1), (0, 2)),
                          note="multiplicity 0 mod 4: no candidate excluded")


def _poly_str(coeffs: Sequence[Fraction]) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append(f"{c}*X" if c != 1 else "X")
        else:
            terms.append(f"{c}*X^{i}" if c != 1 else f"X^{i}")
    return " + ".join(terms) if terms else "0"
