"""Built-in corpus of valid Weil polynomials for tests and batch runs.

Every entry validates, builds a torsion-free eigenvalue group, and keeps
doing both under base change up to k = 6.  That last condition silently
shapes the list: a product mixing X^2+2 with X^2+-2X+2 is perfectly
valid, but its degree-4 base change has the two distinct real roots +-4,
and X^4+2X^2+4 satisfies pi^6 = q^3, so its cube has the real roots
+-2 sqrt(2).  Either way the eigenvalue group of the base change has
2-torsion and no Frobenius rank.  Entries like that belong in targeted
unit tests, not here.
"""

from dataclasses import dataclass
from math import isqrt
from typing import Tuple


@dataclass(frozen=True)
class CorpusEntry:
    q: int
    coefficients: Tuple[int, ...]
    tag: str


def _quadratic(q: int, a: int) -> CorpusEntry:
    return CorpusEntry(q, (q, -a, 1), f"quadratic q={q} a={a}")


def build_corpus() -> Tuple[CorpusEntry, ...]:
    entries = []
    # every valid quadratic trace for small q, supersingular and ordinary
    # alike, including the double-real-root boundary a^2 = 4q
    for q in (2, 3, 4, 5, 7):
        amax = isqrt(4 * q)
        for a in range(-amax, amax + 1):
            entries.append(_quadratic(q, a))
    entries.append(_quadratic(9, -6))     # (X+3)^2, root -3 fixed by iota
    entries.append(_quadratic(25, -9))    # X^2-X+5 after base change k=2

    quartics = [
        (5, (25, -5, 10, -1, 1), "product (X^2-X+5)(X^2+5)"),
        (5, (25, -5, 6, -1, 1), "irreducible, degree-8 splitting field"),
        (2, (4, -2, 3, -1, 1), "irreducible, degree-8 field, r=2"),
        (2, (4, -4, 2, -2, 1), "irreducible, torsion ratios, r=0"),
        (2, (4, -6, 5, -3, 1), "irreducible, r=1"),
        (3, (9, 0, 6, 0, 1), "square (X^2+3)^2"),
        (3, (9, 0, 5, 0, 1), "product (X^2-X+3)(X^2+X+3)"),
        (2, (4, 0, 0, 0, 1), "product (X^2-2X+2)(X^2+2X+2)"),
        (2, (4, 0, 3, 0, 1), "product (X^2-X+2)(X^2+X+2)"),
        (3, (9, 3, 6, 1, 1), "product (X^2+X+3)(X^2+3)"),
    ]
    sextics = [
        (3, (27, 0, 0, 0, 0, 0, 1), "X^6+27, twelve-fold symmetry"),
        (3, (27, 0, 27, 0, 9, 0, 1), "cube (X^2+3)^3"),
        (3, (27, 0, 24, 0, 8, 0, 1), "product (X^2+3)(X^2-X+3)(X^2+X+3)"),
        (2, (8, 0, 10, 0, 5, 0, 1), "product (X^2+2)(X^2-X+2)(X^2+X+2)"),
    ]
    for q, coeffs, tag in quartics + sextics:
        entries.append(CorpusEntry(q, coeffs, tag))
    return tuple(entries)


CORPUS = build_corpus()
