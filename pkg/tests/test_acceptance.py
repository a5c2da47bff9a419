"""Acceptance suite: frozen reference instances and bulk property runs.

Each test prints one PASS line when its criterion holds (run with ``-s``
to see them); the test name carries the criterion number.
"""

import time

import numpy as np

import entrates as er
from entrates.battery import run_battery

from conftest import FIXTURES, GOLDEN, bell_bell_source, double_ghz, three_bells


def _report(number: int, text: str) -> None:
    print(f"PASS criterion {number}: {text}")


def test_criterion_1_double_ghz_to_three_bells_upper_bound():
    start = time.perf_counter()
    rate, _ = er.upper_bound_tri(double_ghz(), three_bells())
    elapsed = time.perf_counter() - start
    assert abs(rate - 1.0) <= 1e-12
    assert elapsed < 1.0
    _report(1, f"upper bound {rate!r} within 1e-12 of 1.0 in {elapsed:.3f}s")


def test_criterion_2_ghz3_identity_lower_bound_not_tight():
    start = time.perf_counter()
    ghz = er.ghz_state(3)
    lower, _ = er.lower_bound_tri(ghz, ghz)
    bound = er.best_bounds(ghz, ghz)
    elapsed = time.perf_counter() - start
    assert abs(lower - 0.5) <= 1e-12
    assert bound.tight is False
    assert elapsed < 1.0
    _report(2, f"lower bound {lower!r} within 1e-12 of 0.5, tight={bound.tight}")


def test_criterion_3_tight_family_exact_rate():
    psi = bell_bell_source()
    phi = er.ghz_state(3)
    bound = er.best_bounds(psi, phi)
    assert abs(bound.lower - 1.0) <= 1e-9
    assert abs(bound.upper - 1.0) <= 1e-9
    assert bound.tight
    p1, p2 = er.entropy_profile(psi), er.entropy_profile(phi)
    ratio_min = min(p1.s([x]) / p2.s([x]) for x in ("A", "B", "C"))
    assert abs(bound.upper - ratio_min) <= 1e-12
    _report(3, f"lower = upper = {bound.upper!r}, equal to the minimum entropy ratio")


def test_criterion_4_combing_region_and_plans():
    start = time.perf_counter()
    layouts = [
        er.layout("ABC", dims)
        for dims in ((2, 2, 2), (3, 2, 2), (2, 3, 3), (3, 3, 3))
    ]
    worst_vertex = -np.inf
    worst_slack = np.inf
    for i in range(500):
        lay = layouts[i % len(layouts)]
        prof = er.entropy_profile(er.random_pure_state(lay, (4, i)))
        sa, sb, sc = prof.s("A"), prof.s("B"), prof.s("C")
        for br in er.merging_branches(prof):
            worst_vertex = max(
                worst_vertex,
                br.e_mu + br.e_nu - sa,
                br.e_mu - sb,
                br.e_nu - sc,
                -br.e_mu,
                -br.e_nu,
            )
        rng = np.random.default_rng((44, i))
        for _ in range(20):
            e_mu = rng.uniform(0.0, min(sa, sb))
            e_nu = rng.uniform(0.0, max(0.0, min(sc, sa - e_mu)))
            plan = er.plan_combing(prof, er.CombingTarget(e_mu, e_nu))
            worst_slack = min(worst_slack, plan.slack[0], plan.slack[1])
    elapsed = time.perf_counter() - start
    assert worst_vertex <= 1e-9
    assert worst_slack >= -1e-9
    assert elapsed < 60.0
    _report(
        4,
        f"500 states / 10000 plans: vertex violation {worst_vertex:.2e}, "
        f"plan slack {worst_slack:.2e}, {elapsed:.1f}s",
    )


def test_criterion_5_four_party_machinery_bulk():
    start = time.perf_counter()
    lay = er.layout("ABCD", [2, 2, 2, 2])
    worst_sum = 0.0
    worst_dominance = -np.inf
    worst_oracle_gap = np.inf
    for i in range(500):
        psi = er.entropy_profile(er.random_pure_state(lay, (51, i)))
        phi = er.entropy_profile(er.random_pure_state(lay, (52, i)))
        triples = er.merging_rate_triples(psi)
        sa = psi.s("A")
        worst_sum = max(worst_sum, max(abs(sum(t.as_tuple()) - sa) for t in triples))
        assert er.triple_ordering_holds(triples)
        plan = er.plan_four_party(psi, phi)
        worst_dominance = max(
            worst_dominance,
            max(t - a for a, t in zip(plan.achieved.as_tuple(), plan.targets)),
        )
        g = er.catalytic_lower_bound(psi, phi)
        oracle = er.max_min_rate_oracle(triples, phi)
        worst_oracle_gap = min(worst_oracle_gap, oracle - g)
    elapsed = time.perf_counter() - start
    assert worst_sum <= 1e-9
    assert worst_dominance <= 1e-9
    assert worst_oracle_gap >= -1e-9
    assert elapsed < 120.0
    _report(
        5,
        f"500 pairs: row-sum defect {worst_sum:.2e}, dominance defect "
        f"{worst_dominance:.2e}, oracle-G gap {worst_oracle_gap:.2e}, {elapsed:.1f}s",
    )


def test_criterion_6_ghz4_identity_bounds():
    ghz4 = er.ghz_state(4)
    g = er.catalytic_lower_bound(ghz4, ghz4)
    upper, _ = er.upper_bound_four_party(ghz4, ghz4)
    assert abs(g - 1.0 / 3.0) <= 1e-12
    assert abs(upper - 1.0) <= 1e-12
    _report(6, f"catalytic bound {g!r} = 1/3 and upper bound {upper!r} = 1")


def test_criterion_7_ghz_distillation_bound():
    bound = er.ghz_rate_lower(er.ghz_state(3), pivot="B", alice="A")
    assert abs(bound.rate_lower - 0.5) <= 1e-12
    assert abs(sum(bound.split.values()) - 1.0) <= 1e-12
    assert er.ghz_combing_feasible(bound.split.values())
    rates = [
        er.ghz_rate_lower(
            er.ghz_state(3), pivot="B", alice="A", e_c_override=e_c
        ).rate_lower
        for e_c in (1.0, 1.5, 2.0)
    ]
    assert rates[0] > rates[1] > rates[2]
    _report(
        7,
        f"rate {bound.rate_lower!r} with saturated split; overrides give "
        f"strictly decreasing rates {[round(r, 6) for r in rates]}",
    )


def test_criterion_8_entropy_engine_batteries():
    ssa = run_battery("ssa", 1000, (2, 2, 2, 2), seed=7)
    assert ssa.ok, ssa.render()
    sub = run_battery("subadditivity", 1000, (2, 2, 2, 2), seed=7)
    assert sub.ok, sub.render()
    _report(
        8,
        "ssa and subadditivity batteries (1000 trials, 4-party states): "
        f"0 violations above 1e-8 (worst {max(ssa.max_violation, sub.max_violation):.2e}); "
        "complement symmetry checked on 1000 pure states within the battery",
    )


def test_criterion_9_cli_golden_and_round_trips(tmp_path):
    import subprocess
    import sys

    csv_out = tmp_path / "rate.csv"
    cp = subprocess.run(
        [
            sys.executable, "-m", "entrates", "rate",
            "--from", str(FIXTURES / "ghz3.st"),
            "--to", str(FIXTURES / "ghz3.st"),
            "--csv", str(csv_out),
        ],
        capture_output=True,
        text=True,
    )
    assert cp.returncode == 0, cp.stderr
    assert cp.stdout == (GOLDEN / "rate_ghz3_ghz3.txt").read_text()
    assert csv_out.read_bytes() == (GOLDEN / "rate_ghz3_ghz3.csv").read_bytes()

    worst = 0.0
    for path in sorted(FIXTURES.glob("*.st")):
        state = er.parse_state(path)
        back = er.parse_state(er.serialize_state(state))
        worst = max(worst, er.trace_distance(state, back))
    assert worst <= 1e-12
    _report(
        9,
        f"golden table and CSV byte-exact; worst fixture round-trip "
        f"distance {worst:.2e}",
    )
