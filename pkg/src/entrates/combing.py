"""Tripartite entanglement combing: feasibility region and protocol plans.

Combing transforms a tripartite pure state shared by a distinguished party
(Alice) and two partners into a product of two bipartite pure states, one
shared with each partner.  A target pair of entanglement rates
``(e_mu, e_nu)`` (bits per input copy toward the first and second partner)
is reachable by asymptotic LOCC exactly when

    e_mu + e_nu <= S(A),    e_mu <= S(B),    e_nu <= S(C),

where S(X) is the reduced entropy of party X.  The constructive side
combines two primitive protocols, quantum state merging (a partner sends
its share to Alice and the pair banks singlets at the conditional-entropy
rate) and assisted entanglement distillation (the third party helps the
other two distill), and time-shares them to sweep the whole boundary face
``e_mu + e_nu = S(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .entropy import EntropyProfile
from .errors import InfeasibleTargetError, InternalConsistencyError
from .tolerances import RATE_ATOL

MERGE = "merge"
ASSIST = "assist"


@dataclass(frozen=True)
class CombingTarget:
    """Requested entanglement per copy: ``e_mu`` with B, ``e_nu`` with C."""

    e_mu: float
    e_nu: float

    def __post_init__(self):
        if self.e_mu < 0 or self.e_nu < 0:
            raise ValueError(
                f"combing targets must be nonnegative, got ({self.e_mu}, {self.e_nu})"
            )

    def as_pair(self) -> tuple[float, float]:
        return (self.e_mu, self.e_nu)


@dataclass(frozen=True)
class CombingBranch:
    """One primitive protocol and the rate pair it achieves.

    ``kind`` is "merge" (``party`` sends its share to Alice via state
    merging) or "assist" (``party`` assists distillation between Alice and
    the remaining partner).
    """

    kind: str
    party: str
    e_mu: float
    e_nu: float

    def as_pair(self) -> tuple[float, float]:
        return (self.e_mu, self.e_nu)

    def describe(self, alice: str) -> str:
        if self.kind == MERGE:
            return f"merge {self.party} into {alice}"
        return f"assisted distillation, {self.party} assisting"


@dataclass(frozen=True)
class CombingPlan:
    """Time-sharing mix of two primitive branches reaching a target.

    Branch ``branch_a`` runs on a fraction ``p`` of the copies and
    ``branch_b`` on the rest.  ``achieved`` dominates the target
    componentwise; ``slack`` records the overshoot (exactly zero on the
    boundary face of the region).
    """

    case_id: int
    branch_a: CombingBranch
    branch_b: CombingBranch
    p: float
    target: CombingTarget
    achieved: CombingTarget
    slack: tuple[float, float]


def _roles(profile: EntropyProfile, roles: tuple[str, str, str] | None) -> tuple[str, str, str]:
    parties = profile.layout.parties
    if len(parties) != 3:
        raise ValueError(f"combing needs a tripartite profile, got {len(parties)} parties")
    if roles is None:
        return parties
    if sorted(roles) != sorted(parties):
        raise ValueError(f"roles {roles} are not a permutation of {parties}")
    return roles


def combing_feasible(
    profile: EntropyProfile,
    target: CombingTarget,
    roles: tuple[str, str, str] | None = None,
) -> bool:
    """Whether the target pair lies inside the combing region.

    ``roles`` names (Alice, B, C); by default the layout order is used.
    """
    a, b, c = _roles(profile, roles)
    e_mu, e_nu = target.as_pair()
    return (
        e_mu + e_nu <= profile.s([a]) + RATE_ATOL
        and e_mu <= profile.s([b]) + RATE_ATOL
        and e_nu <= profile.s([c]) + RATE_ATOL
    )


def _case_and_branches(
    profile: EntropyProfile, roles: tuple[str, str, str] | None
) -> tuple[int, list[CombingBranch]]:
    a, b, c = _roles(profile, roles)
    sa, sb, sc = profile.s([a]), profile.s([b]), profile.s([c])

    # Ties resolve to the lowest-numbered case; the constructions coincide
    # at every boundary so only the reported case id depends on the choice.
    if sa >= sb >= sc:
        case, branches = 1, [
            CombingBranch(MERGE, b, sa - sc, sc),
            CombingBranch(MERGE, c, sb, sa - sb),
        ]
    elif sa >= sc >= sb:
        case, branches = 1, [
            CombingBranch(MERGE, c, sb, sa - sb),
            CombingBranch(MERGE, b, sa - sc, sc),
        ]
    elif sb >= sc >= sa:
        case, branches = 2, [
            CombingBranch(ASSIST, c, sa, 0.0),
            CombingBranch(ASSIST, b, 0.0, sa),
        ]
    elif sc >= sb >= sa:
        case, branches = 2, [
            CombingBranch(ASSIST, b, 0.0, sa),
            CombingBranch(ASSIST, c, sa, 0.0),
        ]
    elif sb >= sa >= sc:
        case, branches = 3, [
            CombingBranch(MERGE, b, sa - sc, sc),
            CombingBranch(ASSIST, c, sa, 0.0),
        ]
    elif sc >= sa >= sb:
        case, branches = 3, [
            CombingBranch(MERGE, c, sb, sa - sb),
            CombingBranch(ASSIST, b, 0.0, sa),
        ]
    else:  # pragma: no cover - the six orderings are exhaustive
        raise InternalConsistencyError("entropy ordering fell through all cases")

    for br in branches:
        if br.e_mu < -RATE_ATOL or br.e_nu < -RATE_ATOL:
            raise InternalConsistencyError(
                f"negative merging gain in case {case}: {br}"
            )
    return case, branches


def merging_branches(
    profile: EntropyProfile, roles: tuple[str, str, str] | None = None
) -> list[CombingBranch]:
    """The two extreme protocol branches for the profile's entropy ordering.

    Each branch is itself a feasible point of the combing region and the
    two span the boundary face ``e_mu + e_nu = S(A)``; mixing them by
    time-sharing reaches everything in between.
    """
    return _case_and_branches(profile, roles)[1]


def plan_combing(
    profile: EntropyProfile,
    target: CombingTarget,
    roles: tuple[str, str, str] | None = None,
) -> CombingPlan:
    """Time-sharing plan reaching (or componentwise dominating) a target.

    Raises :class:`InfeasibleTargetError` when the target violates the
    region; the error names the broken inequality.  Targets on the
    boundary face are met exactly, interior targets are dominated and the
    overshoot is recorded as slack.
    """
    a, b, c = _roles(profile, roles)
    sa, sb, sc = profile.s([a]), profile.s([b]), profile.s([c])
    e_mu, e_nu = target.as_pair()

    if e_mu + e_nu > sa + RATE_ATOL:
        raise InfeasibleTargetError(
            f"total target {e_mu + e_nu!r} exceeds the Alice entropy "
            f"S({a}) = {sa!r}",
            violated="total",
        )
    if e_mu > sb + RATE_ATOL:
        raise InfeasibleTargetError(
            f"first target {e_mu!r} exceeds the merge-partner entropy "
            f"S({b}) = {sb!r}",
            violated="mu",
        )
    if e_nu > sc + RATE_ATOL:
        raise InfeasibleTargetError(
            f"second target {e_nu!r} exceeds the merge-partner entropy "
            f"S({c}) = {sc!r}",
            violated="nu",
        )

    case, branches = _case_and_branches(profile, roles)
    # Branch a is the one with the larger e_mu component; both branches sit
    # on the face e_mu + e_nu = S(A), so fixing the e_mu of the mix fixes
    # everything.
    br_a, br_b = sorted(branches, key=lambda br: br.e_mu, reverse=True)
    m_lo, m_hi = br_b.e_mu, br_a.e_mu
    m_star = min(max(m_lo, e_mu), m_hi)
    if m_hi - m_lo > RATE_ATOL:
        p = (m_star - m_lo) / (m_hi - m_lo)
    else:
        p = 1.0
    p = min(1.0, max(0.0, p))

    ach_mu = p * br_a.e_mu + (1.0 - p) * br_b.e_mu
    ach_nu = p * br_a.e_nu + (1.0 - p) * br_b.e_nu
    achieved = CombingTarget(max(0.0, ach_mu), max(0.0, ach_nu))
    slack = (achieved.e_mu - e_mu, achieved.e_nu - e_nu)
    if min(slack) < -RATE_ATOL:
        raise InternalConsistencyError(
            f"plan fails to dominate a feasible target: slack {slack}"
        )
    if not combing_feasible(profile, achieved, (a, b, c)):
        raise InternalConsistencyError(
            f"plan output {achieved} violates the combing region"
        )
    return CombingPlan(
        case_id=case,
        branch_a=br_a,
        branch_b=br_b,
        p=p,
        target=target,
        achieved=achieved,
        slack=slack,
    )
