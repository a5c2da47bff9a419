"""Randomized property battery tying every module to independent checks.

Each suite draws fresh states per trial from a per-trial generator seeded
as (base seed, trial index), so serial and parallel execution produce
identical, bitwise reproducible reports.  Violations are reported in the
check's native units (bits for entropy identities, rate units otherwise)
together with the reproducing trial index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .combing import CombingTarget, combing_feasible, merging_branches, plan_combing
from .entropy import entropy_profile, profile_from_entries, von_neumann_entropy
from .fourparty import (
    best_four_party_plan,
    catalytic_lower_bound,
    max_min_rate_oracle,
    merging_rate_triples,
    plan_four_party,
    triple_ordering_holds,
    upper_bound_four_party,
)
from .ghz import best_ghz_bound, ghz_rate_lower
from .states import (
    SubsystemLayout,
    apply_local_unitary,
    basis_state,
    merge_parties,
    partial_trace,
    permute_parties,
    random_pure_state,
    random_unitary,
    tensor_product,
)
from .tripartite import best_bounds, lower_bound_tri, upper_bound_tri
from .tolerances import EQUALITY_ATOL, RATE_ATOL, ZERO_ENTROPY_ATOL

ENTROPY_SUITES = ("ssa", "subadditivity")
RATE_SUITES = ("bound-order", "combing-region", "triple-order", "quad-plan", "ghz-split")
SUITE_NAMES = ENTROPY_SUITES + RATE_SUITES

# check id -> the invariant it certifies (the coverage matrix emitted in
# every report).
COVERAGE: dict[str, dict[str, str]] = {
    "ssa": {
        "ssa": "S(XY)+S(YZ) >= S(Y)+S(XYZ) on purification-sampled mixed states",
    },
    "subadditivity": {
        "subadditivity": "S(XY) <= S(X)+S(Y) on purification-sampled mixed states",
        "complement-symmetry": "S(T) = S(complement T) on random pure states",
        "local-unitary-invariance": "entropy profile unchanged by a local unitary",
    },
    "bound-order": {
        "lower-le-upper": "constructive lower bound never exceeds the upper bound",
        "tightness-coincidence": "a single-party minimizing term forces the bounds to meet",
        "permutation-covariance": "relabeling both states leaves the bounds unchanged",
        "quad-bound-order": "best catalytic bound never exceeds the bipartition upper bound",
        "tri-quad-consistency": "the four-party bound with a trivial partner matches the tripartite bound",
    },
    "combing-region": {
        "vertex-feasibility": "both protocol branches satisfy the region inequalities",
        "plan-achieves-target": "plans dominate feasible targets and stay in the region",
        "relabel-covariance": "swapping the two partners swaps every branch pair",
    },
    "triple-order": {
        "triple-sum": "each merging-order triple sums to the distributor entropy",
        "triple-order": "third components fall monotonically within each order family",
        "triple-equalities": "orders sharing a final partner share the residual rate",
    },
    "quad-plan": {
        "plan-dominates": "the planned triple dominates the scaled targets",
        "oracle-ge-g": "the polytope optimum is at least the constructive bound",
        "mixture-valid": "mixture weights are a convex combination reproducing the triple",
    },
    "ghz-split": {
        "split-saturation": "per-pair targets saturate the unit combing budget",
        "rate-vs-upper": "the bound stays below every single-party upper ratio",
        "surrogate-monotone": "enlarging the cost value strictly lowers the bound",
        "role-max": "maximizing over roles never lowers the bound",
    },
}

_DEFAULT_TOLERANCE = {name: EQUALITY_ATOL for name in ENTROPY_SUITES}
_DEFAULT_TOLERANCE.update({name: RATE_ATOL for name in RATE_SUITES})

# The covariance checks assert exact identities, so they use a tighter bar
# than their suite.
_CHECK_TOLERANCE = {
    "permutation-covariance": 1e-12,
    "relabel-covariance": 1e-12,
}


@dataclass(frozen=True)
class BatteryFailure:
    trial: int
    check_id: str
    amount: float
    detail: str


@dataclass(frozen=True)
class BatteryReport:
    """Outcome of one suite run; empty failures means every check held."""

    suite: str
    trials: int
    dims: tuple[int, ...]
    seed: int
    tolerance: float
    check_ids: tuple[str, ...]
    failures: tuple[BatteryFailure, ...]
    max_violation: float

    @property
    def ok(self) -> bool:
        return not self.failures

    def render(self) -> str:
        """Machine-readable line-oriented report."""
        lines = [
            "battery-report 1",
            f"suite {self.suite}",
            f"dims {'x'.join(str(d) for d in self.dims)}",
            f"trials {self.trials}",
            f"seed {self.seed}",
            f"tolerance {self.tolerance:.3e}",
        ]
        for check in self.check_ids:
            lines.append(f"check {check} :: {COVERAGE[self.suite][check]}")
        lines.append(f"failures {len(self.failures)}")
        for f in self.failures:
            lines.append(
                f"failure {f.trial} {f.check_id} {f.amount:.6e} {f.detail}"
            )
        lines.append(f"max-violation {self.max_violation:.6e}")
        lines.append(f"status {'ok' if self.ok else 'violations'}")
        return "\n".join(lines) + "\n"


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng((seed, trial))


def _labels(n: int) -> tuple[str, ...]:
    return tuple("ABCDEFGH"[:n])


def _mixed_subset_entropies(lay: SubsystemLayout, rng) -> dict[frozenset, float]:
    """Entropies of every nonempty subset of a purification-sampled state."""
    anc = SubsystemLayout(lay.parties + ("_env",), lay.dims + (lay.total_dim,))
    pure = random_pure_state(anc, rng)
    rho = partial_trace(pure, lay.parties)
    values: dict[frozenset, float] = {}
    for size in range(1, lay.num_parties + 1):
        for combo in combinations(lay.parties, size):
            if size == lay.num_parties:
                values[frozenset(combo)] = von_neumann_entropy(rho)
            else:
                values[frozenset(combo)] = von_neumann_entropy(
                    partial_trace(rho, combo)
                )
    return values


def _check_ssa(trial, rng, lay, out):
    values = _mixed_subset_entropies(lay, rng)
    parties = lay.parties
    for x_size in range(1, len(parties)):
        for x in combinations(parties, x_size):
            rest1 = [p for p in parties if p not in x]
            for y_size in range(1, len(rest1) + 1):
                for y in combinations(rest1, y_size):
                    rest2 = [p for p in rest1 if p not in y]
                    for z_size in range(1, len(rest2) + 1):
                        for z in combinations(rest2, z_size):
                            if x > z:  # unordered in the outer pair
                                continue
                            s_xy = values[frozenset(x + y)]
                            s_yz = values[frozenset(y + z)]
                            s_y = values[frozenset(y)]
                            s_xyz = values[frozenset(x + y + z)]
                            amount = s_y + s_xyz - s_xy - s_yz
                            out(trial, "ssa", amount, f"X={x} Y={y} Z={z}")


def _check_subadditivity_suite(trial, rng, lay, out):
    values = _mixed_subset_entropies(lay, rng)
    parties = lay.parties
    for x_size in range(1, len(parties)):
        for x in combinations(parties, x_size):
            rest = [p for p in parties if p not in x]
            for y_size in range(1, len(rest) + 1):
                for y in combinations(rest, y_size):
                    if x > y:
                        continue
                    amount = (
                        values[frozenset(x + y)]
                        - values[frozenset(x)]
                        - values[frozenset(y)]
                    )
                    out(trial, "subadditivity", amount, f"X={x} Y={y}")

    pure = random_pure_state(lay, rng)
    prof = entropy_profile(pure)
    for subset in lay.proper_subsets():
        amount = abs(prof.s(subset) - prof.s(lay.complement(subset)))
        out(trial, "complement-symmetry", amount, f"T={subset}")

    party = lay.parties[trial % lay.num_parties]
    u = random_unitary(lay.dims[lay.axis(party)], rng)
    rotated = entropy_profile(apply_local_unitary(pure, party, u))
    worst = max(
        abs(prof.s(t) - rotated.s(t)) for t in lay.proper_subsets()
    )
    out(trial, "local-unitary-invariance", worst, f"party={party}")


def _tri_layout(lay: SubsystemLayout):
    if lay.num_parties != 3:
        raise ValueError(
            f"suite needs a three-party dims spec, got {lay.num_parties} parties"
        )


def _check_bound_order(trial, rng, lay, out):
    _tri_layout(lay)
    psi = random_pure_state(lay, rng)
    phi = random_pure_state(lay, rng)
    p1, p2 = entropy_profile(psi), entropy_profile(phi)

    lower, witnesses = lower_bound_tri(p1, p2)
    upper, _ = upper_bound_tri(p1, p2)
    out(trial, "lower-le-upper", lower - upper, f"lower={lower} upper={upper}")

    single_term = any(w.min_term != "group" for w in witnesses)
    if single_term:
        out(
            trial,
            "tightness-coincidence",
            upper - lower,
            f"witnesses={[w.describe() for w in witnesses]}",
        )

    perm = list(lay.parties)
    rng.shuffle(perm)
    p1p = entropy_profile(permute_parties(psi, perm))
    p2p = entropy_profile(permute_parties(phi, perm))
    lower_p, _ = lower_bound_tri(p1p, p2p)
    upper_p, _ = upper_bound_tri(p1p, p2p)
    amount = max(abs(lower - lower_p), abs(upper - upper_p))
    out(trial, "permutation-covariance", amount, f"perm={perm}")

    # Embed a product qubit as a fourth party: the four-party machinery
    # must reproduce the tripartite bound, and its bound ordering must hold.
    extra = basis_state(SubsystemLayout(("_d",), (2,)), (0,))
    psi4 = tensor_product(psi, extra)
    phi4 = tensor_product(phi, extra)
    q1, q2 = entropy_profile(psi4), entropy_profile(phi4)
    best_plan = best_four_party_plan(q1, q2)
    upper4, _ = upper_bound_four_party(q1, q2)
    out(
        trial,
        "quad-bound-order",
        best_plan.g - upper4,
        f"g={best_plan.g} upper={upper4}",
    )
    out(
        trial,
        "tri-quad-consistency",
        abs(best_plan.g - lower),
        f"g={best_plan.g} tri={lower}",
    )


def _check_combing_region(trial, rng, lay, out):
    _tri_layout(lay)
    psi = random_pure_state(lay, rng)
    prof = entropy_profile(psi)
    a, b, c = lay.parties
    sa, sb, sc = prof.s([a]), prof.s([b]), prof.s([c])

    branches = merging_branches(prof)
    for br in branches:
        worst = max(
            br.e_mu + br.e_nu - sa,
            br.e_mu - sb,
            br.e_nu - sc,
            -br.e_mu,
            -br.e_nu,
        )
        out(trial, "vertex-feasibility", worst, f"branch={br}")

    for k in range(20):
        e_mu = rng.uniform(0.0, min(sa, sb))
        e_nu = rng.uniform(0.0, max(0.0, min(sc, sa - e_mu)))
        target = CombingTarget(e_mu, e_nu)
        if not combing_feasible(prof, target):
            out(trial, "plan-achieves-target", 1.0, f"sampled target infeasible {target}")
            continue
        plan = plan_combing(prof, target)
        worst = max(
            -plan.slack[0],
            -plan.slack[1],
            plan.achieved.e_mu + plan.achieved.e_nu - sa,
            plan.achieved.e_mu - sb,
            plan.achieved.e_nu - sc,
        )
        out(trial, "plan-achieves-target", worst, f"k={k} target={target}")

    swapped = merging_branches(prof, roles=(a, c, b))
    direct = sorted((br.kind, br.party, br.e_mu, br.e_nu) for br in branches)
    mirrored = sorted((br.kind, br.party, br.e_nu, br.e_mu) for br in swapped)
    amount = 0.0 if len(direct) == len(mirrored) else 1.0
    for d, m in zip(direct, mirrored):
        if d[:2] != m[:2]:
            amount = 1.0
            break
        amount = max(amount, abs(d[2] - m[2]), abs(d[3] - m[3]))
    out(trial, "relabel-covariance", amount, "roles=(a,c,b)")


def _quad_layout(lay: SubsystemLayout):
    if lay.num_parties != 4:
        raise ValueError(
            f"suite needs a four-party dims spec, got {lay.num_parties} parties"
        )


def triple_order_violations(triples, sa: float) -> list[tuple[str, float, str]]:
    """Raw violations of the triple identities; used by the suite and as a
    negative-control entry point for harness self-tests."""
    issues = []
    for t in triples:
        amount = abs(sum(t.as_tuple()) - sa)
        issues.append(("triple-sum", amount, f"order={t.origin}"))
    e3 = [t.e3 for t in triples]
    for hi, lo in ((0, 1), (1, 2), (3, 4), (4, 5)):
        issues.append(
            ("triple-order", e3[lo] - e3[hi], f"orders={hi + 1},{lo + 1}")
        )
    issues.append(("triple-equalities", abs(e3[0] - e3[3]), "orders=1,4"))
    issues.append(("triple-equalities", abs(e3[2] - e3[5]), "orders=3,6"))
    return issues


def _check_triple_order(trial, rng, lay, out):
    _quad_layout(lay)
    psi = random_pure_state(lay, rng)
    prof = entropy_profile(psi)
    triples = merging_rate_triples(prof)
    if not triple_ordering_holds(triples):
        out(trial, "triple-order", 1.0, "ordering predicate failed")
    for check_id, amount, detail in triple_order_violations(
        triples, prof.s([lay.parties[0]])
    ):
        out(trial, check_id, amount, detail)


def _check_quad_plan(trial, rng, lay, out):
    _quad_layout(lay)
    psi = random_pure_state(lay, rng)
    phi = random_pure_state(lay, rng)
    p1, p2 = entropy_profile(psi), entropy_profile(phi)

    plan = plan_four_party(p1, p2)
    worst = max(t - a for a, t in zip(plan.achieved.as_tuple(), plan.targets))
    out(trial, "plan-dominates", worst, f"g={plan.g} case={plan.case_id}")

    triples = merging_rate_triples(p1)
    oracle = max_min_rate_oracle(triples, p2)
    g = catalytic_lower_bound(p1, p2)
    out(trial, "oracle-ge-g", g - oracle, f"oracle={oracle} g={g}")

    weight_sum = sum(plan.mixture)
    recombined = np.zeros(3)
    for w, t in zip(plan.mixture, merging_rate_triples(p1, (plan.alice, *plan.bobs))):
        recombined += w * np.asarray(t.as_tuple())
    amount = max(
        abs(weight_sum - 1.0),
        max(-w for w in plan.mixture),
        float(np.max(np.abs(recombined - np.asarray(plan.achieved.as_tuple())))),
    )
    out(trial, "mixture-valid", amount, f"case={plan.case_id}")


def _check_ghz_split(trial, rng, lay, out):
    if lay.num_parties < 3:
        raise ValueError("suite needs at least three parties")
    sigma = random_pure_state(lay, rng)
    bound = ghz_rate_lower(sigma)
    total = sum(bound.split.values())
    out(trial, "split-saturation", abs(total - 1.0), f"split={bound.split}")

    prof = entropy_profile(sigma)
    ratios = [
        1.0 / prof.s([p])
        for p in lay.parties
        if prof.s([p]) > ZERO_ENTROPY_ATOL
    ]
    if ratios:
        out(
            trial,
            "rate-vs-upper",
            bound.rate_lower - min(ratios),
            f"rate={bound.rate_lower}",
        )

    bigger = ghz_rate_lower(sigma, pivot=bound.pivot, alice=bound.alice,
                            e_c_override=bound.e_c_value + 0.5)
    out(
        trial,
        "surrogate-monotone",
        bigger.rate_lower - bound.rate_lower,
        f"e_c {bound.e_c_value} -> {bound.e_c_value + 0.5}",
    )

    best = best_ghz_bound(sigma)
    out(trial, "role-max", bound.rate_lower - best.rate_lower, f"best={best.rate_lower}")


_SUITE_CHECKS = {
    "ssa": _check_ssa,
    "subadditivity": _check_subadditivity_suite,
    "bound-order": _check_bound_order,
    "combing-region": _check_combing_region,
    "triple-order": _check_triple_order,
    "quad-plan": _check_quad_plan,
    "ghz-split": _check_ghz_split,
}


def run_battery(
    suite: str,
    trials: int,
    dims,
    seed: int,
    tolerance: float | None = None,
) -> BatteryReport:
    """Run one suite and collect violations.

    ``dims`` is the per-party dimension list of the sampled states; which
    party counts are admissible depends on the suite.  Results are
    deterministic functions of (suite, trials, dims, seed).
    """
    if suite not in _SUITE_CHECKS:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITE_NAMES}")
    dims = tuple(int(d) for d in dims)
    lay = SubsystemLayout(_labels(len(dims)), dims)
    tol = _DEFAULT_TOLERANCE[suite] if tolerance is None else tolerance

    failures: list[BatteryFailure] = []
    max_violation = -math.inf

    def out(trial, check_id, amount, detail):
        nonlocal max_violation
        amount = float(amount)
        max_violation = max(max_violation, amount)
        if amount > _CHECK_TOLERANCE.get(check_id, tol):
            failures.append(BatteryFailure(trial, check_id, amount, detail))

    check = _SUITE_CHECKS[suite]
    for trial in range(trials):
        check(trial, _trial_rng(seed, trial), lay, out)

    return BatteryReport(
        suite=suite,
        trials=trials,
        dims=dims,
        seed=seed,
        tolerance=tol,
        check_ids=tuple(COVERAGE[suite]),
        failures=tuple(failures),
        max_violation=max_violation,
    )
