"""Integer lattice algorithms: Smith and Hermite forms, kernels, LLL.

Everything runs over Python ints / Fractions.  Matrices are lists of lists,
row-major.  The matrices that arise here are small (dimension bounded by the
degree of the input polynomial plus one), so asymptotics are irrelevant and
clarity wins; entries are kept in check by the usual pivoting strategies.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[int]]


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    oi[j] += c * bt[j]
    return out


def _swap_rows(m: Matrix, i: int, j: int) -> None:
    m[i], m[j] = m[j], m[i]


def _swap_cols(m: Matrix, i: int, j: int) -> None:
    for row in m:
        row[i], row[j] = row[j], row[i]


def smith_normal_form(mat: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Return (U, S, V) with U*mat*V = S in Smith normal form.

    U and V are unimodular; S is diagonal with non-negative entries
    satisfying the divisibility chain s_1 | s_2 | ... .
    """
    s = [list(map(int, row)) for row in mat]
    n = len(s)
    m = len(s[0]) if n else 0
    u = identity_matrix(n)
    v = identity_matrix(m)

    def row_op(i, j, c):
        # row i -= c * row j, mirrored in u
        s[i] = [a - c * b for a, b in zip(s[i], s[j])]
        u[i] = [a - c * b for a, b in zip(u[i], u[j])]

    def col_op(i, j, c):
        # col i -= c * col j, mirrored in v
        for row in s:
            row[i] -= c * row[j]
        for row in v:
            row[i] -= c * row[j]

    t = 0
    while t < min(n, m):
        # locate a nonzero pivot with smallest absolute value
        pivot = None
        for i in range(t, n):
            for j in range(t, m):
                if s[i][j] and (pivot is None
                                or abs(s[i][j]) < abs(s[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        _swap_rows(s, t, pivot[0])
        _swap_rows(u, t, pivot[0])
        _swap_cols(s, t, pivot[1])
        _swap_cols(v, t, pivot[1])

        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, n):
                if s[i][t]:
                    q = s[i][t] // s[t][t]
                    row_op(i, t, q)
                    if s[i][t]:
                        # remainder is a smaller pivot; promote it
                        _swap_rows(s, t, i)
                        _swap_rows(u, t, i)
                        dirty = True
            for j in range(t + 1, m):
                if s[t][j]:
                    q = s[t][j] // s[t][t]
                    col_op(j, t, q)
                    if s[t][j]:
                        _swap_cols(s, t, j)
                        _swap_cols(v, t, j)
                        dirty = True
        t += 1

    # sign normalization
    for i in range(min(n, m)):
        if s[i][i] < 0:
            s[i] = [-x for x in s[i]]
            u[i] = [-x for x in u[i]]

    # enforce the divisibility chain d_i | d_{i+1}
    r = 0
    while r < min(n, m) and s[r][r]:
        r += 1
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            a, b = s[i][i], s[i + 1][i + 1]
            if b % a:
                # fold row i+1 into row i and rediagonalize the 2x2 block
                s[i][i + 1] = b
                u[i] = [x + y for x, y in zip(u[i], u[i + 1])]
                _two_by_two(s, u, v, i)
                changed = True
    return u, s, v


def _two_by_two(s: Matrix, u: Matrix, v: Matrix, i: int) -> None:
    """Rediagonalize rows/cols i, i+1 of s.

    On entry the block is [[a, b], [0, b]] (the row fold just set entry
    (i, i+1) to b).  A unimodular column mix produces [[g, 0], [y*b, lcm]],
    and one row operation clears the stray subdiagonal entry.
    """
    import math
    a, b = s[i][i], s[i][i + 1]
    g = math.gcd(a, b)
    # Bezout: x*a + y*b = g
    x, y = _bezout(a, b)
    bi, ai = b // g, a // g
    for row in (s, v):
        for rr in row:
            ci, cj = rr[i], rr[i + 1]
            rr[i] = x * ci + y * cj
            rr[i + 1] = -bi * ci + ai * cj
    assert s[i][i] == g and s[i][i + 1] == 0
    c = s[i + 1][i] // g
    s[i + 1] = [p - c * q for p, q in zip(s[i + 1], s[i])]
    u[i + 1] = [p - c * q for p, q in zip(u[i + 1], u[i])]
    assert s[i + 1][i] == 0 and s[i + 1][i + 1] == a // g * b


def _bezout(a: int, b: int) -> Tuple[int, int]:
    old_r, r = a, b
    old_s, ss = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, ss = ss, old_s - q * ss
        old_t, t = t, old_t - q * t
    return old_s, old_t


def invariant_factors(mat: Sequence[Sequence[int]]) -> List[int]:
    _, s, _ = smith_normal_form(mat)
    out = []
    for i in range(min(len(s), len(s[0]) if s else 0)):
        if s[i][i]:
            out.append(s[i][i])
    return out


def hermite_column_form(mat: Sequence[Sequence[int]]) -> Matrix:
    """Column-style Hermite normal form of the column span of mat.

    Returns a matrix whose nonzero columns are the canonical basis:
    lower triangular profile, positive pivots, entries right of a pivot
    reduced into [0, pivot).  Zero columns are dropped.
    """
    a = [list(map(int, row)) for row in mat]
    if not a:
        return []
    n, m = len(a), len(a[0])
    col = 0
    for row_i in range(n):
        if col >= m:
            break
        # pick the column (>= col) minimizing |entry| in this row, nonzero
        piv = None
        for j in range(col, m):
            if a[row_i][j] and (piv is None or abs(a[row_i][j]) < abs(a[row_i][piv])):
                piv = j
        if piv is None:
            continue
        _swap_cols(a, col, piv)
        # clear the rest of the row by column gcd elimination
        while True:
            done = True
            for j in range(col + 1, m):
                if a[row_i][j]:
                    q = a[row_i][j] // a[row_i][col]
                    for r in range(n):
                        a[r][j] -= q * a[r][col]
                    if a[row_i][j]:
                        _swap_cols(a, col, j)
                        done = False
            if done:
                break
        if a[row_i][col] < 0:
            for r in range(n):
                a[r][col] = -a[r][col]
        # reduce columns left of the pivot column at this row
        for j in range(col):
            q = a[row_i][j] // a[row_i][col]
            if q:
                for r in range(n):
                    a[r][j] -= q * a[r][col]
        col += 1
    # drop zero columns, keep order (already echelon by construction)
    cols = []
    for j in range(m):
        column = [a[r][j] for r in range(n)]
        if any(column):
            cols.append(column)
    return [[c[r] for c in cols] for r in range(n)] if cols else [[] for _ in range(n)]


def kernel_lattice(mat: Sequence[Sequence[int]]) -> Matrix:
    """Basis (as columns, HNF-canonical) of {x in Z^m : mat x = 0}."""
    n = len(mat)
    m = len(mat[0]) if n else 0
    if m == 0:
        return []
    u, s, v = smith_normal_form(mat)
    rank = 0
    for i in range(min(n, m)):
        if s[i][i]:
            rank += 1
    # kernel = span of the last m - rank columns of v
    if rank == m:
        return [[] for _ in range(m)]
    gens = [[v[r][j] for j in range(rank, m)] for r in range(m)]
    return hermite_column_form(gens)


def lattice_rank(mat: Sequence[Sequence[int]]) -> int:
    _, s, _ = smith_normal_form(mat)
    return sum(1 for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i])


def lattice_saturation_index(mat: Sequence[Sequence[int]]) -> int:
    """Index of the column lattice inside its saturation (product of
    invariant factors)."""
    idx = 1
    for d in invariant_factors(mat):
        idx *= d
    return idx


def lll_reduce(basis: Sequence[Sequence[Fraction]], delta: Fraction = Fraction(3, 4)) -> List[List[Fraction]]:
    """LLL-reduce the given basis rows (exact rational arithmetic).

    Suitable for the small dimensions used here (<= ~10).  Returns a new
    list of rows.
    """
    b = [[Fraction(x) for x in row] for row in basis]
    n = len(b)
    if n == 0:
        return []

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar_sq = [Fraction(0)] * n

    def gram_schmidt():
        bstar = []
        for i in range(n):
            v = list(b[i])
            for j in range(i):
                if bstar_sq[j] == 0:
                    mu[i][j] = Fraction(0)
                    continue
                mu[i][j] = dot(b[i], bstar[j]) / bstar_sq[j]
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            bstar_sq[i] = dot(v, v)

    gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            if abs(mu[k][j]) > Fraction(1, 2):
                r = round(mu[k][j])
                b[k] = [x - r * y for x, y in zip(b[k], b[j])]
                gram_schmidt()
        if bstar_sq[k] >= (delta - mu[k][k - 1] ** 2) * bstar_sq[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            gram_schmidt()
            k = max(k - 1, 1)
    return b


def relation_candidates(angles: Sequence[Tuple[Fraction, Fraction]],
                        two_pi: Tuple[Fraction, Fraction],
                        bound: int,
                        scale_bits: int = 64) -> List[Tuple[int, ...]]:
    """Candidate integer relations sum a_i * angle_i = 0 (mod 2*pi).

    `angles` are (midpoint, radius) enclosures of the arguments; `two_pi`
    encloses 2*pi.  Builds the standard relation-finding lattice (identity
    block alongside a scaled column of angles, with an extra row for the
    2*pi ambiguity), LLL-reduces it, and returns short vectors with
    max-norm at most `bound`.

    These are candidates only: each survivor must be verified exactly by
    the caller.  Soundness of downstream results never depends on this
    list being complete.
    """
    k = len(angles)
    if k == 0:
        return []
    scale = 1 << scale_bits
    rows: List[List[Fraction]] = []
    for i, (mid, _rad) in enumerate(angles):
        row = [Fraction(1 if j == i else 0) for j in range(k)]
        row.append(Fraction(round(mid * scale)))
        rows.append(row)
    closure = [Fraction(0)] * k
    closure.append(Fraction(round(two_pi[0] * scale)))
    rows.append(closure)

    reduced = lll_reduce(rows)
    seen = set()
    out: List[Tuple[int, ...]] = []
    for row in reduced:
        vec = tuple(int(x) for x in row[:k])
        if all(x == int(x) for x in row[:k]) and any(vec):
            if max(abs(x) for x in vec) <= bound:
                for cand in (vec, tuple(-x for x in vec)):
                    if cand not in seen:
                        seen.add(cand)
                        out.append(cand)
    return sorted(out)
