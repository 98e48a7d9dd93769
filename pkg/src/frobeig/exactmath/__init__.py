"""Exact arithmetic substrate: integer polynomials, certified complex balls,
integer lattices (Smith/Hermite forms, kernels, LLL) and certified root
isolation with rational reconstruction.

Rationals are `fractions.Fraction` throughout: the stdlib type already
guarantees the normalization this package needs (lowest terms, positive
denominator).
"""

from .intpoly import IntPoly
from .balls import ComplexBall, RealBall
from .latt import (
    smith_normal_form,
    hermite_column_form,
    kernel_lattice,
    lattice_saturation_index,
    lll_reduce,
    relation_candidates,
)
from .roots import isolate_roots, refine_roots, rational_reconstruct

__all__ = [
    "IntPoly",
    "ComplexBall",
    "RealBall",
    "smith_normal_form",
    "hermite_column_form",
    "kernel_lattice",
    "lattice_saturation_index",
    "lll_reduce",
    "relation_candidates",
    "isolate_roots",
    "refine_roots",
    "rational_reconstruct",
]
