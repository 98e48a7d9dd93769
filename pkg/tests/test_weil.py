import random
from fractions import Fraction

import pytest

from frobeig.errors import (FunctionalEquationFailed, MalformedInput,
                            NotPrimePower, NotSimple, RootModulusFailed)
from frobeig.exactmath.intpoly import IntPoly
from frobeig.weil import base_change, prime_power_decomposition, validate


class TestPrimePower:
    def test_table(self):
        assert prime_power_decomposition(2) == (2, 1)
        assert prime_power_decomposition(4) == (2, 2)
        assert prime_power_decomposition(8) == (2, 3)
        assert prime_power_decomposition(9) == (3, 2)
        assert prime_power_decomposition(25) == (5, 2)
        assert prime_power_decomposition(343) == (7, 3)

    @pytest.mark.parametrize("bad", [0, 1, 6, 12, 100, -4])
    def test_rejects(self, bad):
        with pytest.raises(NotPrimePower):
            prime_power_decomposition(bad)


class TestValidate:
    def test_ordinary_quadratic(self):
        d = validate(5, [5, -1, 1])
        assert d.q == 5 and d.p == 5 and d.e == 1 and d.g == 1
        assert d.poly == IntPoly((5, -1, 1))
        assert len(d.roots) == 2
        assert d.iota == (1, 0)
        assert d.root_mult == (1, 1)
        assert d.real_root_indices == ()
        assert d.is_simple and d.multiplicity == 1
        # canonical root order: negative imaginary part first at equal real
        assert d.roots[0].im < 0 < d.roots[1].im
        assert d.roots[0].re == d.roots[1].re == Fraction(1, 2)

    def test_supersingular_quadratic(self):
        d = validate(3, [3, 0, 1])
        assert d.iota == (1, 0)
        assert d.real_root_indices == ()
        assert d.multiplicity == 1

    def test_real_double_root(self):
        # (X+3)^2 over q=9: a single totally real eigenvalue of mult 2
        d = validate(9, [9, 6, 1])
        assert d.p == 3 and d.e == 2
        assert len(d.roots) == 1
        assert d.iota == (0,)
        assert d.real_root_indices == (0,)
        assert d.root_mult == (2,)
        assert d.is_simple and d.multiplicity == 2

    def test_real_pair(self):
        # (X^2-2)^2 over q=2: two real eigenvalues, both conjugation-fixed
        d = validate(2, [4, 0, -4, 0, 1])
        assert len(d.roots) == 2
        assert d.iota == (0, 1)
        assert d.real_root_indices == (0, 1)
        assert d.root_mult == (2, 2)
        assert d.multiplicity == 2

    def test_quartic_product_factorization(self):
        d = validate(5, [25, 0, 9, 0, 1])
        assert not d.is_simple
        got = sorted(f.poly.coefficients for f in d.factors)
        assert got == [(5, -1, 1), (5, 1, 1)]
        assert all(f.multiplicity == 1 for f in d.factors)
        with pytest.raises(NotSimple):
            d.multiplicity

    def test_cube_of_quadratic(self):
        d = validate(3, [27, 0, 27, 0, 9, 0, 1])
        assert d.is_simple and d.multiplicity == 3
        assert d.root_mult == (3, 3)
        assert [f.poly.coefficients for f in d.factors] == [(3, 0, 1)]

    def test_sextic_splitting_into_quadratics(self):
        d = validate(3, [27, 0, 0, 0, 0, 0, 1])
        got = sorted(f.poly.coefficients for f in d.factors)
        assert got == [(3, -3, 1), (3, 0, 1), (3, 3, 1)]

    def test_irreducible_sextic(self):
        d = validate(2, [8, 0, 0, -1, 0, 0, 1])
        assert d.is_simple and d.multiplicity == 1
        assert len(d.factors) == 1 and d.factors[0].poly.degree == 6
        assert d.iota == (1, 0, 3, 2, 5, 4)

    def test_functional_equation_failure(self):
        with pytest.raises(FunctionalEquationFailed):
            validate(5, [1, 0, 1])
        with pytest.raises(FunctionalEquationFailed):
            validate(2, [-2, 0, 1])  # X^2-2 alone is not self-reciprocal

    def test_root_modulus_failure_with_witness(self):
        # passes the functional equation with roots 1 and 4 off the circle
        with pytest.raises(RootModulusFailed) as exc:
            validate(4, [4, -5, 1])
        w = exc.value.witness
        assert w == {"root_re": "1", "root_im": "0",
                     "abs_sq_midpoint": "1", "expected": "4"}

    def test_malformed(self):
        with pytest.raises(MalformedInput):
            validate(5, [5, Fraction(1, 2), 1])
        with pytest.raises(MalformedInput):
            validate(5, [2, 1])          # odd degree
        with pytest.raises(MalformedInput):
            validate(5, [5, -2, 2])      # not monic
        with pytest.raises(NotPrimePower):
            validate(6, [6, -1, 1])


class TestBaseChange:
    def test_identity(self):
        p = IntPoly((5, -1, 1))
        assert base_change(p, 1) == p

    def test_oracles(self):
        assert base_change(IntPoly((3, 0, 1)), 2) == IntPoly((9, 6, 1))
        assert base_change(IntPoly((5, -1, 1)), 2) == IntPoly((25, 9, 1))
        assert base_change(IntPoly((5, -1, 1)), 6) == IntPoly((15625, 54, 1))

    def test_quartic(self):
        p = IntPoly((25, 0, 9, 0, 1))
        p2 = base_change(p, 2)
        # squares of the eigenvalues of both quadratic factors
        lhs = base_change(IntPoly((5, -1, 1)), 2) * base_change(IntPoly((5, 1, 1)), 2)
        assert p2 == lhs

    def test_stays_weil_seeded(self):
        rng = random.Random(20260819)
        qs = [2, 3, 4, 5, 7]
        for _ in range(60):
            q = rng.choice(qs)
            amax = int((4 * q) ** 0.5)
            a = rng.randint(-amax, amax)
            d = validate(q, [q, -a, 1])
            for k in (2, 3):
                pk = base_change(d.poly, k)
                dk = validate(q ** k, list(pk.coefficients))
                assert dk.g == 1
