import math

import numpy as np
import pytest

import entrates as er
from entrates.errors import DegenerateTargetError

from conftest import catalyst_demo_pair


GHZ4 = er.ghz_state(4)


def two_bell_pairs():
    """Bell(A, B) x Bell(C, D): S(AB) = 0 while singles are all 1."""
    return er.tensor_product(er.bell_state(("A", "B")), er.bell_state(("C", "D")))


def three_bell_star():
    """Bell pairs from A to each of B, C, D; additive subset entropies."""
    return er.merge_parties(
        er.tensor_product(
            er.bell_state(("A1", "B")),
            er.bell_state(("A2", "C")),
            er.bell_state(("A3", "D")),
        ),
        [("A", ("A1", "A2", "A3")), ("B", ("B",)), ("C", ("C",)), ("D", ("D",))],
    )


class TestMergingRateTriples:
    def test_ghz4_first_line(self):
        triples = er.merging_rate_triples(GHZ4)
        assert np.allclose(triples[0].as_tuple(), (0.0, 0.0, 1.0), atol=1e-12)

    def test_two_bell_pairs_first_line(self):
        # S(A)=1, S(AB)=0, S(ABC)=1 by brute-force profile: merging B banks
        # a full bit, merging C (entangled with D) then costs one, and the
        # residual pair with D carries one.
        triples = er.merging_rate_triples(two_bell_pairs())
        assert np.allclose(triples[0].as_tuple(), (1.0, -1.0, 1.0), atol=1e-12)

    def test_rows_sum_to_distributor_entropy(self):
        lay = er.layout("ABCD", [2, 2, 2, 2])
        for seed in range(50):
            prof = er.entropy_profile(er.random_pure_state(lay, seed))
            sa = prof.s("A")
            for t in er.merging_rate_triples(prof):
                assert abs(sum(t.as_tuple()) - sa) < 1e-9

    def test_shared_final_partner_equalities(self):
        lay = er.layout("ABCD", [2, 2, 2, 2])
        for seed in range(50):
            triples = er.merging_rate_triples(
                er.entropy_profile(er.random_pure_state(lay, seed))
            )
            e3 = [t.e3 for t in triples]
            assert e3[0] == e3[3]
            assert e3[2] == e3[5]

    def test_wrong_party_count(self):
        with pytest.raises(ValueError):
            er.merging_rate_triples(er.ghz_state(3))


class TestTripleOrdering:
    def test_ghz4(self):
        assert er.triple_ordering_holds(er.merging_rate_triples(GHZ4))

    def test_random_battery(self):
        lay = er.layout("ABCD", [2, 2, 2, 2])
        for seed in range(200):
            triples = er.merging_rate_triples(
                er.entropy_profile(er.random_pure_state(lay, seed))
            )
            assert er.triple_ordering_holds(triples)

    def test_injected_violation_detected(self):
        triples = er.merging_rate_triples(GHZ4)
        corrupted = list(triples)
        corrupted[1] = er.RateTriple(0.0, -1.0, 2.0, origin=2)  # e3 above line 1
        assert not er.triple_ordering_holds(corrupted)


class TestCatalyticLowerBound:
    def test_ghz4_to_ghz4(self):
        g = er.catalytic_lower_bound(GHZ4, GHZ4)
        assert abs(g - 1.0 / 3.0) < 1e-12

    def test_bell_star_to_ghz4(self):
        # Subset entropies of the star are additive, so every ratio is 1.
        g = er.catalytic_lower_bound(three_bell_star(), GHZ4)
        assert abs(g - 1.0) < 1e-9

    def test_zero_entropy_partner_drops_out(self):
        spectator = er.basis_state(er.SubsystemLayout(("D",), (2,)), (0,))
        phi = er.tensor_product(er.ghz_state(3), spectator)
        psi = er.tensor_product(er.ghz_state(3), spectator)
        g = er.catalytic_lower_bound(psi, phi)
        assert abs(g - 0.5) < 1e-12

    def test_fully_product_target_degenerate(self):
        product = er.basis_state(er.SubsystemLayout(("A", "B", "C", "D"), (2,) * 4), (0,) * 4)
        with pytest.raises(DegenerateTargetError):
            er.catalytic_lower_bound(GHZ4, product)


class TestPlanFourParty:
    def test_ghz4_plan(self):
        plan = er.plan_four_party(GHZ4, GHZ4)
        assert abs(plan.g - 1.0 / 3.0) < 1e-12
        for achieved, target in zip(plan.achieved.as_tuple(), plan.targets):
            assert achieved >= target - 1e-9
        assert plan.catalyst_budget == 0.0
        assert abs(sum(plan.mixture) - 1.0) < 1e-12

    def test_bell_star_no_catalyst(self):
        plan = er.plan_four_party(three_bell_star(), GHZ4)
        assert abs(plan.g - 1.0) < 1e-9
        assert plan.catalyst_budget <= 1e-9
        for achieved in plan.achieved.as_tuple():
            assert achieved >= 1.0 - 1e-9

    def test_catalyst_needed_when_merging_costs(self):
        # Hand-checked instance: S(A)=1 but S(AB1)=2, so the first two
        # orders consume a bit with B1; the planner mixes them anyway and
        # reports a one-bit catalyst.
        psi, phi = catalyst_demo_pair()
        plan = er.plan_four_party(psi, phi)
        assert abs(plan.g - 1.0 / 3.0) < 1e-9
        assert plan.case_id == 2
        assert np.allclose(plan.achieved.as_tuple(), (1 / 3, 1 / 3, 1 / 3), atol=1e-9)
        assert abs(plan.catalyst_budget - 1.0) < 1e-9
        expected_mix = (1 / 9, 2 / 9, 0.0, 0.0, 2 / 9, 4 / 9)
        assert np.allclose(plan.mixture, expected_mix, atol=1e-9)

    def test_plan_dominates_on_random_pairs(self):
        lay = er.layout("ABCD", [2, 2, 2, 2])
        for seed in range(100):
            psi = er.entropy_profile(er.random_pure_state(lay, (1, seed)))
            phi = er.entropy_profile(er.random_pure_state(lay, (2, seed)))
            plan = er.plan_four_party(psi, phi)
            for achieved, target in zip(plan.achieved.as_tuple(), plan.targets):
                assert achieved >= target - 1e-9
            recombined = np.zeros(3)
            triples = er.merging_rate_triples(psi, (plan.alice, *plan.bobs))
            for w, t in zip(plan.mixture, triples):
                assert w >= -1e-12
                recombined += w * np.asarray(t.as_tuple())
            assert np.allclose(recombined, plan.achieved.as_tuple(), atol=1e-9)

    def test_pivot_choice_is_a_diagnostic(self):
        psi, phi = catalyst_demo_pair()
        default = er.plan_four_party(psi, phi)
        for pivot in default.bobs:
            plan = er.plan_four_party(psi, phi, pivot=pivot)
            assert abs(plan.g - default.g) < 1e-12
            for achieved, target in zip(plan.achieved.as_tuple(), plan.targets):
                assert achieved >= target - 1e-9


class TestBestPlanAndUpperBound:
    def test_ghz4_upper(self):
        rate, _ = er.upper_bound_four_party(GHZ4, GHZ4)
        assert abs(rate - 1.0) < 1e-12

    def test_bell_star_exact(self):
        rate, _ = er.upper_bound_four_party(three_bell_star(), GHZ4)
        plan = er.best_four_party_plan(three_bell_star(), GHZ4)
        assert abs(rate - plan.g) < 1e-9

    def test_lower_never_exceeds_upper(self):
        lay = er.layout("ABCD", [2, 2, 2, 2])
        for seed in range(60):
            psi = er.entropy_profile(er.random_pure_state(lay, (3, seed)))
            phi = er.entropy_profile(er.random_pure_state(lay, (4, seed)))
            plan = er.best_four_party_plan(psi, phi)
            upper, _ = er.upper_bound_four_party(psi, phi)
            assert plan.g <= upper + 1e-9

    def test_tripartite_specialization_matches(self):
        # A product fourth party reduces the four-party bound to the
        # tripartite one.
        lay = er.layout("ABC", [2, 2, 2])
        spectator = er.basis_state(er.SubsystemLayout(("D",), (2,)), (0,))
        for seed in range(30):
            psi = er.random_pure_state(lay, (5, seed))
            phi = er.random_pure_state(lay, (6, seed))
            lower, _ = er.lower_bound_tri(psi, phi)
            plan = er.best_four_party_plan(
                er.tensor_product(psi, spectator), er.tensor_product(phi, spectator)
            )
            assert abs(plan.g - lower) < 1e-9


class TestOracle:
    def test_ghz4_matches_g(self):
        triples = er.merging_rate_triples(GHZ4)
        value = er.max_min_rate_oracle(triples, er.entropy_profile(GHZ4))
        assert value >= 1.0 / 3.0 - 1e-9
        assert abs(value - 1.0 / 3.0) < 1e-9

    def test_degenerate_partner_reduces_dimensions(self):
        spectator = er.basis_state(er.SubsystemLayout(("D",), (2,)), (0,))
        phi = er.entropy_profile(er.tensor_product(er.ghz_state(3), spectator))
        triples = er.merging_rate_triples(er.entropy_profile(GHZ4))
        value = er.max_min_rate_oracle(triples, phi)
        # Only two constraints remain; mixing lines with e1 + e2 = 1 gives 1/2.
        assert abs(value - 0.5) < 1e-9

    def test_oracle_never_below_g(self):
        lay = er.layout("ABCD", [2, 2, 2, 2])
        for seed in range(100):
            psi = er.entropy_profile(er.random_pure_state(lay, (7, seed)))
            phi = er.entropy_profile(er.random_pure_state(lay, (8, seed)))
            g = er.catalytic_lower_bound(psi, phi)
            value = er.max_min_rate_oracle(er.merging_rate_triples(psi), phi)
            assert value >= g - 1e-9

    def test_oracle_agrees_with_reference_lp_solver(self):
        scipy = pytest.importorskip("scipy")
        from scipy.optimize import linprog

        lay = er.layout("ABCD", [2, 2, 2, 2])
        for seed in range(25):
            psi = er.entropy_profile(er.random_pure_state(lay, (9, seed)))
            phi = er.entropy_profile(er.random_pure_state(lay, (10, seed)))
            triples = er.merging_rate_triples(psi)
            mine = er.max_min_rate_oracle(triples, phi)

            e = np.array([t.as_tuple() for t in triples])
            s = np.array([phi.s([b]) for b in lay.parties[1:]])
            # maximize t subject to E^T w >= t s, sum w = 1, w >= 0
            c = np.zeros(7)
            c[6] = -1.0
            a_ub = np.hstack([-e.T, s.reshape(3, 1)])
            a_eq = np.zeros((1, 7))
            a_eq[0, :6] = 1.0
            bounds = [(0, None)] * 6 + [(None, None)]
            res = linprog(c, A_ub=a_ub, b_ub=np.zeros(3), A_eq=a_eq,
                          b_eq=[1.0], bounds=bounds, method="highs")
            assert res.status == 0
            assert abs(mine - (-res.fun)) < 1e-7
