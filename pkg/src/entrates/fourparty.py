"""Catalytic conversion planning between four-party pure states.

One party (the distributor, "Alice") merges the other three parties'
shares into her lab one at a time.  Each of the six merging orders leaves
a triple of entanglement rates (e1, e2, e3) between Alice and the three
partners; entries can be negative, meaning that order consumes
entanglement which a catalyst must front.  Every triple sums to the
distributor's entropy, and time-sharing the orders reaches any convex
combination.

The achievable figure of merit is

    G = min over nonempty partner subsets X of
        S(psi^X) / sum_{b in X} S(phi^b),

and a five-case analysis over where G * S(phi^{b3}) falls among the third
components of the six triples produces an explicit two-stage mixture whose
triple dominates (G*S(phi^{b1}), G*S(phi^{b2}), G*S(phi^{b3}))
componentwise.  An exhaustive vertex-enumeration oracle for the underlying
max-min linear program provides an independent check (the construction
attains G, the polytope optimum may be larger).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .entropy import EntropyProfile, as_profile
from .errors import DegenerateTargetError, InternalConsistencyError
from .tolerances import RATE_ATOL, ZERO_ENTROPY_ATOL

MIXED_ORIGIN = "mixed"

# Merging order realized by each line: the listed partners are merged into
# the distributor in sequence and the last one keeps the residual pair.
_ORDERS = (
    (0, 1, 2),
    (0, 2, 1),
    (2, 0, 1),
    (1, 0, 2),
    (1, 2, 0),
    (2, 1, 0),
)


@dataclass(frozen=True)
class RateTriple:
    """Entanglement rates between the distributor and each partner.

    ``origin`` tags the merging order (1..6) or "mixed" for a time-shared
    combination.  Negative entries are catalyst consumption.
    """

    e1: float
    e2: float
    e3: float
    origin: int | str

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.e1, self.e2, self.e3)

    def min_entry(self) -> float:
        return min(self.as_tuple())


@dataclass(frozen=True)
class OrderExecution:
    """One merging order run on a fraction ``weight`` of the copies."""

    weight: float
    order: tuple[str, str, str]
    rates: RateTriple


@dataclass(frozen=True)
class FourPartyPlan:
    """Time-sharing plan meeting the catalytic bound.

    ``bobs`` fixes the partner order used by triple components and the
    ``mixture`` weights (one weight per merging order as returned by
    :func:`merging_rate_triples` for that partner order).  ``achieved``
    dominates ``targets`` componentwise; ``catalyst_budget`` is the worst
    per-copy entanglement any executed order consumes before returning it.
    """

    g: float
    bound_witness: tuple[str, ...]
    case_id: int
    alice: str
    bobs: tuple[str, str, str]
    mixture: tuple[float, ...]
    achieved: RateTriple
    targets: tuple[float, float, float]
    catalyst_budget: float
    executions: tuple[OrderExecution, ...]
    compression_rates: dict[str, float]
    teleport_budgets: dict[str, float]


def _four_roles(
    profile: EntropyProfile, roles: tuple[str, str, str, str] | None
) -> tuple[str, str, str, str]:
    parties = profile.layout.parties
    if len(parties) != 4:
        raise ValueError(
            f"four-party planning needs exactly four parties, got {len(parties)}"
        )
    if roles is None:
        return parties
    if sorted(roles) != sorted(parties):
        raise ValueError(f"roles {roles} are not a permutation of {parties}")
    return roles


def merging_rate_triples(
    psi, roles: tuple[str, str, str, str] | None = None
) -> list[RateTriple]:
    """The six rate triples, one per merging order.

    With distributor a and partners (b1, b2, b3), merging a partner whose
    share is still entangled with a's lab banks (or costs) singlets at the
    conditional-entropy rate; the last partner keeps the residual bipartite
    pair.  Each triple sums to S(psi^a).
    """
    prof = as_profile(psi)
    a, b1, b2, b3 = _four_roles(prof, roles)
    sa = prof.s([a])
    sab1 = prof.s([a, b1])
    sab2 = prof.s([a, b2])
    sab3 = prof.s([a, b3])
    sab1b2 = prof.s([a, b1, b2])
    sab1b3 = prof.s([a, b1, b3])
    sab2b3 = prof.s([a, b2, b3])
    rows = [
        (sa - sab1, sab1 - sab1b2, sab1b2),
        (sa - sab1, sab1b3, sab1 - sab1b3),
        (sab3 - sab1b3, sab1b3, sa - sab3),
        (sab2 - sab1b2, sa - sab2, sab1b2),
        (sab2b3, sa - sab2, sab2 - sab2b3),
        (sab2b3, sab3 - sab2b3, sa - sab3),
    ]
    return [RateTriple(*row, origin=j + 1) for j, row in enumerate(rows)]


def triple_ordering_holds(triples, tol: float = RATE_ATOL) -> bool:
    """Check the monotone third components guaranteed by strong subadditivity.

    The first three orders merge b1 before b2, the last three merge b2
    before b1; within each family the third component is nonincreasing.
    False indicates numerical pathology (or corrupted input), never a
    genuine counterexample.
    """
    e3 = [t.e3 for t in triples]
    return (
        e3[0] >= e3[1] - tol
        and e3[1] >= e3[2] - tol
        and e3[3] >= e3[4] - tol
        and e3[4] >= e3[5] - tol
    )


def _bound_terms(psi_prof, phi_prof, roles):
    a, b1, b2, b3 = roles
    bobs = (b1, b2, b3)
    singles = {b: phi_prof.s([b]) for b in bobs}
    terms = []
    for size in (1, 2, 3):
        for subset in combinations(bobs, size):
            num = psi_prof.s(list(subset))
            den = sum(singles[b] for b in subset)
            terms.append((subset, num, den))
    return terms


def catalytic_lower_bound(
    psi, phi, roles: tuple[str, str, str, str] | None = None
) -> float:
    """The catalytic lower bound G for a fixed distributor.

    Minimizes source-subset entropy over summed target partner entropies
    across the seven nonempty partner subsets; subsets where both sides
    vanish are excluded, a vanishing denominator under a positive
    numerator never attains the minimum.
    """
    return _catalytic_bound_with_witness(psi, phi, roles)[0]


def _catalytic_bound_with_witness(psi, phi, roles):
    psi_prof, phi_prof = as_profile(psi), as_profile(phi)
    if psi_prof.layout.parties != phi_prof.layout.parties:
        raise ValueError(
            f"states are defined on different parties: "
            f"{psi_prof.layout.parties} vs {phi_prof.layout.parties}"
        )
    roles = _four_roles(psi_prof, roles)
    best: tuple[float, tuple[str, ...]] | None = None
    for subset, num, den in _bound_terms(psi_prof, phi_prof, roles):
        if den <= ZERO_ENTROPY_ATOL:
            continue  # either excluded (num ~ 0 too) or an unbounded ratio
        ratio = num / den
        if best is None or ratio < best[0]:
            best = (ratio, subset)
    if best is None:
        raise DegenerateTargetError(
            "every partner subset is degenerate: the target carries no "
            "single-partner entanglement"
        )
    return best


def _mix_pair(lines, i, j, weights_i, third_target):
    """Convex mix of two triples whose third component hits a target."""
    ti, tj = lines[i].e3, lines[j].e3
    if abs(ti - tj) > 1e-15:
        w = (third_target - tj) / (ti - tj)
    else:
        w = 1.0
    w = min(1.0, max(0.0, w))
    weights = [0.0] * len(lines)
    weights[i] = w * weights_i
    weights[j] = (1.0 - w) * weights_i
    return weights


def _combine(lines, weights):
    e = np.zeros(3)
    for w, line in zip(weights, lines):
        e += w * np.asarray(line.as_tuple())
    return e


def plan_four_party(
    psi,
    phi,
    roles: tuple[str, str, str, str] | None = None,
    pivot: str | None = None,
) -> FourPartyPlan:
    """Build the time-sharing mixture that dominates the G-scaled targets.

    ``pivot`` selects which partner anchors the case analysis (its scaled
    target is matched first); the remaining partners keep their relative
    order.  The default anchor is the last partner.  At case boundaries
    the lowest-numbered case is reported; the constructions coincide
    there.
    """
    psi_prof, phi_prof = as_profile(psi), as_profile(phi)
    a, b1, b2, b3 = _four_roles(psi_prof, roles)
    if pivot is not None:
        if pivot not in (b1, b2, b3):
            raise ValueError(f"pivot {pivot!r} is not one of the partners")
        others = [b for b in (b1, b2, b3) if b != pivot]
        b1, b2, b3 = others[0], others[1], pivot
    bobs = (b1, b2, b3)

    g, witness = _catalytic_bound_with_witness(psi_prof, phi_prof, (a, b1, b2, b3))
    lines = merging_rate_triples(psi_prof, (a, b1, b2, b3))
    targets = tuple(g * phi_prof.s([b]) for b in bobs)
    g1, g2, g3 = targets
    e3 = [t.e3 for t in lines]

    # Where does the anchored target fall among the third components?  The
    # two order families are handled independently; boundaries resolve to
    # the smaller branch index.
    side_a = 1 if e3[1] <= g3 else (2 if e3[2] <= g3 else 3)
    side_b = 1 if e3[4] <= g3 else (2 if e3[5] <= g3 else 3)
    case_table = {(1, 1): 1, (1, 2): 2, (2, 1): 3, (2, 2): 4, (3, 3): 5}
    if (side_a, side_b) not in case_table:
        raise InternalConsistencyError(
            f"inconsistent case sides {(side_a, side_b)}; the third "
            "components violate their guaranteed ordering"
        )
    case_id = case_table[(side_a, side_b)]

    if case_id == 5:
        w1 = [0.0] * 6
        w1[2] = 1.0
        w2 = [0.0] * 6
        w2[5] = 1.0
    else:
        pair_a = (0, 1) if side_a == 1 else (1, 2)
        pair_b = (3, 4) if side_b == 1 else (4, 5)
        w1 = _mix_pair(lines, *pair_a, 1.0, g3)
        w2 = _mix_pair(lines, *pair_b, 1.0, g3)
    t1 = _combine(lines, w1)
    t2 = _combine(lines, w2)

    if t1[1] < t2[1] - RATE_ATOL:
        raise InternalConsistencyError(
            "stage-one triples violate their guaranteed second-component "
            f"ordering: {t1[1]} < {t2[1]}"
        )

    if t2[1] < g2:
        if abs(t1[1] - t2[1]) > 1e-15:
            q = (g2 - t2[1]) / (t1[1] - t2[1])
        else:
            q = 1.0
        q = min(1.0, max(0.0, q))
        weights = [q * a1 + (1.0 - q) * a2 for a1, a2 in zip(w1, w2)]
    else:
        weights = w2

    total = sum(weights)
    if abs(total - 1.0) > 1e-9:
        raise InternalConsistencyError(f"mixture weights sum to {total}")
    weights = [float(w / total) for w in weights]
    achieved_vec = _combine(lines, weights)
    achieved = RateTriple(*map(float, achieved_vec), origin=MIXED_ORIGIN)

    slack = min(a - t for a, t in zip(achieved.as_tuple(), targets))
    if slack < -RATE_ATOL:
        raise InternalConsistencyError(
            f"plan fails to dominate the scaled targets by {slack}"
        )

    executions = []
    worst = 0.0
    for w, line in zip(weights, lines):
        if w <= 1e-15:
            continue
        order = tuple(bobs[k] for k in _ORDERS[line.origin - 1])
        executions.append(OrderExecution(weight=w, order=order, rates=line))
        worst = min(worst, line.min_entry())
    catalyst_budget = max(0.0, -worst)

    return FourPartyPlan(
        g=g,
        bound_witness=witness,
        case_id=case_id,
        alice=a,
        bobs=bobs,
        mixture=tuple(weights),
        achieved=achieved,
        targets=targets,
        catalyst_budget=catalyst_budget,
        executions=tuple(executions),
        compression_rates={b: t for b, t in zip(bobs, targets)},
        teleport_budgets={b: e for b, e in zip(bobs, achieved.as_tuple())},
    )


def best_four_party_plan(psi, phi, pivot: str | None = None) -> FourPartyPlan:
    """Best plan over the four choices of distributor.

    Partners keep their layout order; ties go to the earliest party.
    """
    psi_prof, phi_prof = as_profile(psi), as_profile(phi)
    parties = psi_prof.layout.parties
    if len(parties) != 4:
        raise ValueError("four-party planning needs exactly four parties")
    if pivot is not None and pivot not in parties:
        raise ValueError(f"pivot {pivot!r} is not one of the parties {parties}")
    best: FourPartyPlan | None = None
    last_error: Exception | None = None
    for alice in parties:
        bobs = tuple(p for p in parties if p != alice)
        use_pivot = pivot if pivot in bobs else None
        try:
            plan = plan_four_party(
                psi_prof, phi_prof, roles=(alice, *bobs), pivot=use_pivot
            )
        except DegenerateTargetError as err:
            last_error = err
            continue
        if best is None or plan.g > best.g + 1e-15:
            best = plan
    if best is None:
        raise last_error if last_error is not None else DegenerateTargetError(
            "no distributor choice yields a defined bound"
        )
    return best


def upper_bound_four_party(psi, phi) -> tuple[float, tuple[str, ...]]:
    """Upper bound: minimum entropy ratio over all bipartitions.

    The witness is the side of the binding cut containing the first party.
    Cuts where both states carry no entanglement are excluded.
    """
    psi_prof, phi_prof = as_profile(psi), as_profile(phi)
    if psi_prof.layout.parties != phi_prof.layout.parties:
        raise ValueError("states are defined on different parties")
    lay = psi_prof.layout
    if lay.num_parties != 4:
        raise ValueError("upper_bound_four_party needs exactly four parties")
    first = lay.parties[0]
    best: tuple[float, tuple[str, ...]] | None = None
    for side in lay.proper_subsets():
        if first not in side:
            continue
        num, den = psi_prof.s(side), phi_prof.s(side)
        if den <= ZERO_ENTROPY_ATOL:
            continue
        ratio = num / den
        if best is None or ratio < best[0]:
            best = (ratio, side)
    if best is None:
        raise DegenerateTargetError(
            "no bipartition constrains the rate: the target is product "
            "across every cut"
        )
    return best


def max_min_rate_oracle(
    triples, phi, roles: tuple[str, str, str, str] | None = None
) -> float:
    """Polytope optimum of the max-min rate over mixtures of the six triples.

    Maximizes ``min_i (sum_j w_j E_i^j) / S(phi^{b_i})`` over the weight
    simplex by exhaustive vertex enumeration of the feasible region of the
    equivalent linear program (variables: six weights and the rate).
    Partners whose target entropy vanishes drop out of the minimum; if all
    three drop out the rate is unconstrained and +inf is returned.

    This is an independent check on the constructive planner: its value
    can exceed G but never falls below it.
    """
    phi_prof = as_profile(phi)
    _, b1, b2, b3 = _four_roles(phi_prof, roles)
    s = [phi_prof.s([b]) for b in (b1, b2, b3)]
    active = [i for i in range(3) if s[i] > ZERO_ENTROPY_ATOL]
    if not active:
        return math.inf

    e = np.array([t.as_tuple() for t in triples], dtype=float)  # (6, 3)
    if e.shape != (6, 3):
        raise ValueError("oracle needs the six base triples")

    # Variables x = (w_0..w_5, t).  Constraints:
    #   equality      sum_j w_j = 1
    #   inequalities  w_j >= 0                         (6 rows)
    #                 sum_j E_i^j w_j - s_i t >= 0     (one row per i)
    rows = []
    for j in range(6):
        r = np.zeros(7)
        r[j] = 1.0
        rows.append(r)
    for i in active:
        r = np.zeros(7)
        r[:6] = e[:, i]
        r[6] = -s[i]
        rows.append(r)
    ineq = np.array(rows)
    eq = np.zeros(7)
    eq[:6] = 1.0

    best = -math.inf
    n_rows = ineq.shape[0]
    for chosen in combinations(range(n_rows), 6):
        a_mat = np.vstack([ineq[list(chosen)], eq])
        b_vec = np.zeros(7)
        b_vec[6] = 1.0
        try:
            x = np.linalg.solve(a_mat, b_vec)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(x)):
            continue
        if np.max(np.abs(a_mat @ x - b_vec)) > 1e-8:
            continue
        if np.min(ineq @ x) < -RATE_ATOL:
            continue
        best = max(best, float(x[6]))
    if not math.isfinite(best):
        raise InternalConsistencyError(
            "vertex enumeration found no feasible vertex; the program is "
            "always feasible so this indicates a numerical failure"
        )
    return best
