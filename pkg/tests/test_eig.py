"""Eigenvalue group presentation, realization kernel, Frobenius rank."""

import random
from dataclasses import replace
from fractions import Fraction
from math import isqrt

import pytest

from frobeig.config import DEFAULT
from frobeig.eig import (EigElement, build_eig_group, frobenius_rank,
                         galois_action, invariants_report, realization_kernel)
from frobeig.errors import MalformedInput, TorsionDetected
from frobeig.splitfield import galois_group, splitting_field, word_value
from frobeig.weil import base_change, validate

from conftest import split_cached


def eig_cached(q, coeffs):
    data, field = split_cached(q, coeffs)
    return data, field, build_eig_group(data)


class TestEigGroup:
    def test_ordinary_quadratic_presentation(self):
        _, _, e = eig_cached(5, (5, -1, 1))
        assert e.rank == 2
        assert e.invariant_factors == (1,)
        assert e.basis_labels == ("pi_1", "q")
        assert e.q_coords == (0, 1)
        # the non-representative root is [q] - [pi]
        rep = e.orbit_reps[0]
        other = e.iota[rep]
        assert e.symbol_coords[rep] == (1, 0)
        assert e.symbol_coords[other] == (-1, 1)

    def test_real_root_eliminates_q(self):
        _, _, e = eig_cached(9, (9, 6, 1))
        assert e.rank == 1
        assert e.basis_labels == ("pi_0",)
        assert e.q_coords == (2,)
        assert e.basis_roots == (0,)

    def test_two_pairs_rank_three(self):
        _, _, e = eig_cached(5, (25, -5, 10, -1, 1))
        assert e.rank == 3
        assert len(e.orbit_reps) == 2
        assert e.basis_labels[-1] == "q"

    def test_relations_have_weight_zero(self):
        for q, coeffs in [(5, (5, -1, 1)), (9, (9, 6, 1)),
                          (5, (25, -5, 10, -1, 1)),
                          (3, (27, 0, 0, 0, 0, 0, 1))]:
            _, _, e = eig_cached(q, coeffs)
            w = (1,) * e.n_roots + (2,)
            for row in e.relation_matrix:
                assert sum(a * b for a, b in zip(w, row)) == 0

    def test_simple_no_real_rank_is_g_over_m_plus_one(self):
        for q, coeffs, g, m in [(5, (5, -1, 1), 1, 1),
                                (3, (3, 0, 1), 1, 1),
                                (3, (27, 0, 27, 0, 9, 0, 1), 3, 3)]:
            _, _, e = eig_cached(q, coeffs)
            assert e.rank == g // m + 1

    def test_two_real_roots_detected_as_torsion(self):
        data = validate(2, [4, 0, -4, 0, 1])
        with pytest.raises(TorsionDetected) as exc:
            build_eig_group(data)
        assert 2 in exc.value.invariant_factors

    def test_symbols_realize_consistently(self):
        # the basis-coordinate expression of every symbol realizes to the
        # symbol's own field element
        data, field, e = eig_cached(5, (25, -5, 10, -1, 1))
        ring = field.ring()
        for i in range(e.n_roots):
            exps = [0] * e.n_roots
            q_exp = 0
            for j, br in enumerate(e.basis_roots):
                c = e.symbol_coords[i][j]
                if br is None:
                    q_exp += c
                else:
                    exps[br] += c
            value = word_value(ring, field.root_coords, exps, data.q, q_exp)
            assert value == list(field.root_coords[i])

    def test_element_weight(self):
        _, _, e = eig_cached(5, (5, -1, 1))
        lam = e.element((3, -1))
        assert lam.weight == 3 - 2
        assert e.q_element(2).weight == 4
        with pytest.raises(MalformedInput):
            e.element((1, 2, 3))


class TestGaloisAction:
    def test_conjugation_on_supersingular(self):
        data, field, e = eig_cached(3, (3, 0, 1))
        gal = galois_group(field, data)
        conj = next(p for p in gal.perms if p != (0, 1))
        pi = e.root_element(e.orbit_reps[0])
        image = galois_action(e, conj, pi)
        assert image.coords == (-1, 1)
        assert image.weight == 1
        # and back
        assert galois_action(e, conj, image).coords == pi.coords

    def test_q_is_fixed(self):
        data, field, e = eig_cached(3, (3, 0, 1))
        gal = galois_group(field, data)
        for sigma in gal.perms:
            assert galois_action(e, sigma, e.q_element(4)).coords \
                == e.q_element(4).coords

    def test_identity_action(self):
        _, _, e = eig_cached(5, (25, -5, 10, -1, 1))
        ident = tuple(range(e.n_roots))
        lam = e.element((2, -1, 1))
        assert galois_action(e, ident, lam) == lam

    def test_weight_preserved_randomized(self):
        data, field, e = eig_cached(5, (25, -5, 10, -1, 1))
        gal = galois_group(field, data)
        rng = random.Random(20260819)
        for _ in range(200):
            coords = tuple(rng.randint(-5, 5) for _ in range(e.rank))
            lam = e.element(coords)
            sigma = gal.perms[rng.randrange(len(gal.perms))]
            assert galois_action(e, sigma, lam).weight == lam.weight

    def test_rejects_non_commuting_permutation(self):
        _, _, e = eig_cached(5, (25, -5, 10, -1, 1))
        # swaps one root of a pair with one of the other pair
        bad = (2, 1, 0, 3)
        if e.iota[2] != 1:
            with pytest.raises(MalformedInput):
                galois_action(e, bad, e.q_element())


class TestRealizationKernel:
    def test_ordinary_injective(self):
        data, field, e = eig_cached(5, (5, -1, 1))
        k = realization_kernel(data, field, e)
        assert k.rank == 0 and k.basis == ()
        assert k.complete_within_bound

    def test_supersingular_index_two_sublattice(self):
        data, field, e = eig_cached(3, (3, 0, 1))
        k = realization_kernel(data, field, e)
        assert k.basis == ((4, -2),)
        assert k.saturation_index == 2
        # the half vector realizes to -1, not 1, so it must stay out
        ring = field.ring()
        rep = e.orbit_reps[0]
        value = word_value(ring, field.root_coords,
                           [2 if i == rep else 0 for i in range(2)],
                           data.q, -1)
        assert value == ring.const(-1)

    def test_real_root_injective(self):
        data, field, e = eig_cached(9, (9, 6, 1))
        k = realization_kernel(data, field, e)
        assert k.rank == 0

    def test_product_with_supersingular_factor(self):
        data, field, e = eig_cached(5, (25, -5, 10, -1, 1))
        k = realization_kernel(data, field, e)
        assert k.rank == 1
        assert k.basis == ((4, 0, -2),)
        assert k.saturation_index == 2

    def test_generic_quartic_no_relations(self):
        data, field, e = eig_cached(5, (25, -5, 6, -1, 1))
        k = realization_kernel(data, field, e)
        assert k.rank == 0

    def test_degenerate_sextic_rank_three(self):
        data, field, e = eig_cached(3, (27, 0, 0, 0, 0, 0, 1))
        k = realization_kernel(data, field, e)
        assert k.rank == 3
        # every basis vector realizes to exactly 1
        ring = field.ring()
        one = ring.const(1)
        for vec in k.basis:
            exps = [0] * e.n_roots
            q_exp = 0
            for j, br in enumerate(e.basis_roots):
                if br is None:
                    q_exp += vec[j]
                else:
                    exps[br] += vec[j]
            assert word_value(ring, field.root_coords, exps,
                              data.q, q_exp) == one


class TestFrobeniusRank:
    def test_rank_table(self):
        table = [
            (5, (5, -1, 1), 1),
            (3, (3, 0, 1), 0),
            (9, (9, 6, 1), 0),
            (5, (25, -5, 10, -1, 1), 1),
            (5, (25, -5, 6, -1, 1), 2),
            (3, (27, 0, 0, 0, 0, 0, 1), 0),
            (3, (27, 0, 27, 0, 9, 0, 1), 0),
        ]
        for q, coeffs, want in table:
            data, field, e = eig_cached(q, coeffs)
            assert frobenius_rank(data, field, e) == want, coeffs

    def test_base_change_invariance_spot(self):
        for q, coeffs in [(3, (3, 0, 1)), (5, (5, -1, 1))]:
            data, field, e = eig_cached(q, coeffs)
            r0 = frobenius_rank(data, field, e)
            for k in (2, 3):
                bc = base_change(data.poly, k)
                data_k = validate(q ** k, list(bc.coefficients))
                field_k = splitting_field(data_k)
                e_k = build_eig_group(data_k)
                assert frobenius_rank(data_k, field_k, e_k) == r0

    def test_random_quadratics_satisfy_rank_identity(self):
        rng = random.Random(4242)
        count = 0
        while count < 25:
            q = rng.choice([2, 3, 5, 7])
            a = rng.randint(-2 * isqrt(q) - 1, 2 * isqrt(q) + 1)
            if a * a > 4 * q:
                continue
            count += 1
            data = validate(q, [q, -a, 1])
            field = splitting_field(data)
            e = build_eig_group(data)
            k = realization_kernel(data, field, e)
            r = frobenius_rank(data, field, e)
            assert r + 1 + k.rank == e.rank


class TestInvariantsReport:
    def test_ordinary(self):
        rep = invariants_report(validate(5, [5, -1, 1]))
        assert rep["g"] == 1 and rep["multiplicity"] == 1
        assert rep["frobenius_rank"] == 1 and rep["kernel_rank"] == 0
        assert rep["rank_bound_ok"] is True
        assert rep["kernel_rank_identity_ok"] is True
        assert rep["geometrically_isotypic"] is True
        assert rep["multiplicity_growth_at"] is None
        assert rep["undetermined"] == []

    def test_supersingular(self):
        rep = invariants_report(validate(3, [3, 0, 1]))
        assert rep["frobenius_rank"] == 0 and rep["kernel_rank"] == 1
        assert rep["kernel_rank_identity_ok"] is True
        assert rep["multiplicity_growth_at"] == 2

    def test_real_root_case(self):
        rep = invariants_report(validate(9, [9, 6, 1]))
        assert rep["multiplicity"] == 2
        assert rep["frobenius_rank"] == 0 and rep["kernel_rank"] == 0
        assert rep["rank_bound_ok"] is True
        assert rep["kernel_rank_identity_ok"] is None

    def test_non_simple(self):
        rep = invariants_report(validate(5, [25, -5, 10, -1, 1]))
        assert rep["simple"] is False
        assert rep["multiplicity"] is None
        assert rep["center_degree"] == 4
        assert rep["rank_bound_ok"] is None

    def test_capped_field_marks_undetermined(self):
        tight = replace(DEFAULT, degree_cap=4)
        rep = invariants_report(validate(5, [25, -5, 6, -1, 1]),
                                settings=tight)
        assert rep["frobenius_rank"] is None
        assert "frobenius_rank" in rep["undetermined"]
        assert rep["undetermined_reason"] == "DegreeCapExceeded"
        # presentation-level facts survive
        assert rep["rank_eig"] == 3 and rep["torsion_free"] is True
