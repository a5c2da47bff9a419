"""Conversion-rate bounds between tripartite pure states.

For pure states, every bipartite cut carries an exact conversion currency:
the reduced entropy.  Cutting a tripartite LOCC protocol along any single
party therefore upper-bounds the rate by the minimum entropy ratio.  The
lower bound is constructive: comb the source into two bipartite pairs
sized proportionally to the target's partner entropies, convert one pair
into the full target state locally, compress the partner share and
teleport it with the other pair.  The bound is the best, over the three
choices of which party plays the distributor, of

    min{ S(psi^X) / (S(phi^Y) + S(phi^Z)),  S(psi^Y)/S(phi^Y),  S(psi^Z)/S(phi^Z) }.

Whenever that minimum is attained on one of the single-party ratios, the
two bounds meet and the conversion rate is known exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .combing import CombingPlan, CombingTarget, combing_feasible, plan_combing
from .entropy import EntropyProfile, as_profile
from .errors import DegenerateTargetError, InternalConsistencyError
from .tolerances import EXACT_ATOL, RATE_ATOL, ZERO_ENTROPY_ATOL

GROUP_TERM = "group"
BIPARTITE_TERM = "bipartite"


@dataclass(frozen=True)
class LowerWitness:
    """Role assignment attaining the best lower bound.

    ``alice`` is the distributor, ``partners`` the remaining two parties in
    layout order, ``min_term`` the minimizing ratio: "group" for the
    combined-denominator term, a party label for a single-party ratio, or
    "bipartite" when the whole problem collapsed to one cut.
    """

    alice: str
    partners: tuple[str, str]
    min_term: str

    def describe(self) -> str:
        return f"{self.alice}|{''.join(self.partners)}:{self.min_term}"


@dataclass(frozen=True)
class RateBound:
    """Lower and upper bound on an asymptotic conversion rate."""

    lower: float
    upper: float
    lower_witnesses: tuple[LowerWitness, ...]
    upper_witness: str
    tight: bool
    note: str = ""

    def __post_init__(self):
        if self.lower < -RATE_ATOL:
            raise InternalConsistencyError(f"negative lower bound {self.lower}")
        if self.lower > self.upper + RATE_ATOL:
            raise InternalConsistencyError(
                f"bounds out of order: lower {self.lower} > upper {self.upper}"
            )
        if self.tight and abs(self.upper - self.lower) > RATE_ATOL:
            raise InternalConsistencyError(
                f"tight flag with gap {self.upper - self.lower}"
            )


@dataclass(frozen=True)
class TripartitePlan:
    """Constructive protocol achieving the lower bound.

    Steps, per input copy: comb the source (distributor ``roles[0]``) into
    pairs with the two partners, convert the second pair into the target
    with partner ``roles[2]`` at rate ``r``, compress the remaining target
    share at ``compress_rate`` qubits and teleport it to ``roles[1]``
    using exactly ``teleport_budget`` bits of the first pair.
    """

    r: float
    roles: tuple[str, str, str]
    combing_plan: CombingPlan
    convert_partner: str
    convert_entanglement: float
    compress_rate: float
    teleport_budget: float

    def __post_init__(self):
        if abs(self.compress_rate - self.teleport_budget) > RATE_ATOL:
            raise InternalConsistencyError(
                "compression rate and teleportation budget disagree: "
                f"{self.compress_rate} vs {self.teleport_budget}"
            )


@dataclass(frozen=True)
class ReversibilityReport:
    """Forward and backward bounds plus a definite-irreversibility verdict.

    ``reversible_possible`` is False when the bounds prove the pair cannot
    be asymptotically reversible, and None when they do not decide (this
    diagnostic never certifies reversibility).
    """

    forward: RateBound
    backward: RateBound
    reversible_possible: bool | None
    note: str = ""


def _check_same_parties(p1: EntropyProfile, p2: EntropyProfile) -> None:
    if p1.layout.parties != p2.layout.parties:
        raise ValueError(
            f"states are defined on different parties: {p1.layout.parties} "
            f"vs {p2.layout.parties}"
        )


def _ratio_terms(pairs):
    """Apply the zero-denominator policy to (tag, num, den) terms.

    A term with both entries at numerical zero is dropped (no constraint on
    either side of that cut); a zero denominator under a positive numerator
    is an unbounded ratio that can never attain a minimum.
    """
    out = []
    for tag, num, den in pairs:
        if den <= ZERO_ENTROPY_ATOL:
            if num <= ZERO_ENTROPY_ATOL:
                continue
            out.append((tag, math.inf))
        else:
            out.append((tag, num / den))
    return out


def bipartite_rate(psi, phi) -> float:
    """Exact conversion rate between bipartite pure states.

    Both inputs are states or profiles on the same two parties; the target
    must be entangled, otherwise the rate is unbounded and a
    :class:`DegenerateTargetError` redirects the caller to trivial-rate
    handling.
    """
    p1, p2 = as_profile(psi), as_profile(phi)
    _check_same_parties(p1, p2)
    if p1.layout.num_parties != 2:
        raise ValueError("bipartite_rate needs exactly two parties")
    first = p1.layout.parties[0]
    den = p2.s([first])
    if den <= ZERO_ENTROPY_ATOL:
        raise DegenerateTargetError(
            "target is a product state: any rate is achievable, no finite "
            "ratio exists"
        )
    return p1.s([first]) / den


def upper_bound_tri(psi, phi) -> tuple[float, str]:
    """Upper bound: minimum single-party entropy ratio, with its witness."""
    p1, p2 = as_profile(psi), as_profile(phi)
    _check_same_parties(p1, p2)
    if p1.layout.num_parties != 3:
        raise ValueError("upper_bound_tri needs exactly three parties")
    terms = _ratio_terms(
        (x, p1.s([x]), p2.s([x])) for x in p1.layout.parties
    )
    finite = [(tag, r) for tag, r in terms if not math.isinf(r)]
    if not finite:
        raise DegenerateTargetError(
            "no bipartition constrains the rate: the target carries no "
            "entanglement across any cut the source does"
        )
    best = min(finite, key=lambda tr: tr[1])
    return best[1], best[0]


def _assignments(parties: tuple[str, ...]):
    for alice in parties:
        partners = tuple(p for p in parties if p != alice)
        yield alice, partners


def lower_bound_tri(psi, phi) -> tuple[float, tuple[LowerWitness, ...]]:
    """Best constructive lower bound over the three role assignments.

    Returns the bound and every maximizing witness (several assignments can
    attain the maximum; all are reported).
    """
    p1, p2 = as_profile(psi), as_profile(phi)
    _check_same_parties(p1, p2)
    if p1.layout.num_parties != 3:
        raise ValueError("lower_bound_tri needs exactly three parties")

    candidates: list[tuple[float, LowerWitness]] = []
    for alice, (y, z) in _assignments(p1.layout.parties):
        terms = _ratio_terms(
            [
                (GROUP_TERM, p1.s([alice]), p2.s([y]) + p2.s([z])),
                (y, p1.s([y]), p2.s([y])),
                (z, p1.s([z]), p2.s([z])),
            ]
        )
        if not terms:
            continue
        tag, value = min(terms, key=lambda tr: tr[1])
        candidates.append((value, LowerWitness(alice, (y, z), tag)))

    if not candidates:
        raise DegenerateTargetError(
            "every denominator vanishes: both states are product across "
            "all cuts"
        )
    best = max(v for v, _ in candidates)
    if math.isinf(best):
        raise DegenerateTargetError(
            "target is product across every cut: any rate is achievable"
        )
    witnesses = tuple(w for v, w in candidates if v >= best - EXACT_ATOL)
    return best, witnesses


def best_bounds(psi, phi) -> RateBound:
    """Combined lower and upper bound with tightness detection.

    When both states are product across the same single-party cut the
    problem is bipartite and the exact rate is returned as a tight bound.
    """
    p1, p2 = as_profile(psi), as_profile(phi)
    _check_same_parties(p1, p2)
    if p1.layout.num_parties != 3:
        raise ValueError("best_bounds needs exactly three parties")

    for x in p1.layout.parties:
        if p1.s([x]) <= ZERO_ENTROPY_ATOL and p2.s([x]) <= ZERO_ENTROPY_ATOL:
            y, z = (p for p in p1.layout.parties if p != x)
            den = p2.s([y])
            if den <= ZERO_ENTROPY_ATOL:
                raise DegenerateTargetError(
                    "both states are product across every cut"
                )
            rate = p1.s([y]) / den
            return RateBound(
                lower=rate,
                upper=rate,
                lower_witnesses=(LowerWitness(x, (y, z), BIPARTITE_TERM),),
                upper_witness=y,
                tight=True,
                note=f"both states are product across {x}; exact bipartite "
                f"conversion on {y}|{z}",
            )

    upper, upper_witness = upper_bound_tri(p1, p2)
    lower, witnesses = lower_bound_tri(p1, p2)
    tight = math.isfinite(upper) and abs(upper - lower) <= RATE_ATOL
    return RateBound(
        lower=lower,
        upper=upper,
        lower_witnesses=witnesses,
        upper_witness=upper_witness,
        tight=tight,
    )


def plan_tripartite(psi, phi) -> TripartitePlan:
    """Synthesize the protocol that attains the constructive lower bound.

    Chooses the first maximizing role assignment, sizes the combing
    targets as rate times the target partner entropies, validates them
    against the combing region and emits the three-step plan.  The
    compression rate always equals the teleportation budget, so the
    banked pair is consumed exactly.
    """
    p1, p2 = as_profile(psi), as_profile(phi)
    r, witnesses = lower_bound_tri(p1, p2)
    alice, (y, z) = witnesses[0].alice, witnesses[0].partners
    e_mu = r * p2.s([y])
    e_nu = r * p2.s([z])
    target = CombingTarget(max(0.0, e_mu), max(0.0, e_nu))
    if not combing_feasible(p1, target, roles=(alice, y, z)):
        raise InternalConsistencyError(
            f"combing targets {target} violate the region for roles "
            f"({alice}, {y}, {z}); the lower bound construction is broken"
        )
    comb = plan_combing(p1, target, roles=(alice, y, z))
    return TripartitePlan(
        r=r,
        roles=(alice, y, z),
        combing_plan=comb,
        convert_partner=z,
        convert_entanglement=e_nu,
        compress_rate=r * p2.s([y]),
        teleport_budget=e_mu,
    )


def reversibility_gap(psi, phi) -> ReversibilityReport:
    """Check whether the bounds rule out asymptotic reversibility.

    Irreversibility is certified when the forward bound is tight and the
    backward upper bound falls strictly below the inverse forward rate.
    The diagnostic never certifies reversibility; when it cannot decide,
    ``reversible_possible`` is None.
    """
    forward = best_bounds(psi, phi)
    backward = best_bounds(phi, psi)
    if (
        forward.tight
        and forward.lower > ZERO_ENTROPY_ATOL
        and backward.upper < 1.0 / forward.lower - RATE_ATOL
    ):
        return ReversibilityReport(
            forward,
            backward,
            reversible_possible=False,
            note=(
                "backward upper bound "
                f"{backward.upper!r} is strictly below the inverse forward "
                f"rate {1.0 / forward.lower!r}: the transformation is not "
                "asymptotically reversible"
            ),
        )
    return ReversibilityReport(
        forward,
        backward,
        reversible_possible=None,
        note="undetermined: these bounds certify irreversibility only",
    )


def pure_bipartition_entanglement(state_or_profile) -> dict[str, float]:
    """Entanglement across every bipartition of a pure state, in bits.

    Keys are cut labels "XY|Z..." with the side containing the first party
    listed first.  For a globally pure state the exact value is the
    reduced entropy of either side, which is what mixed-state upper bounds
    accept as input.
    """
    prof = as_profile(state_or_profile)
    lay = prof.layout
    out: dict[str, float] = {}
    first = lay.parties[0]
    for side in lay.proper_subsets():
        if first not in side:
            continue
        other = lay.complement(side)
        out[f"{''.join(side)}|{''.join(other)}"] = prof.s(side)
    return out


def upper_bound_mixed(
    rho_values: Mapping[str, float], sigma_values: Mapping[str, float]
) -> tuple[float, str]:
    """Upper bound from per-bipartition entanglement values.

    Both mappings must cover the same cuts.  Values are additive
    entanglement monotones per bipartition (for pure states, the reduced
    entropy; otherwise user-supplied).  Cuts where both values vanish are
    excluded; a vanishing target value under a positive source value puts
    no constraint on the rate.
    """
    if set(rho_values) != set(sigma_values):
        raise ValueError(
            "the two value sets cover different bipartitions: "
            f"{sorted(rho_values)} vs {sorted(sigma_values)}"
        )
    if not rho_values:
        raise DegenerateTargetError("no bipartition values supplied")
    terms = _ratio_terms(
        (cut, float(rho_values[cut]), float(sigma_values[cut]))
        for cut in sorted(rho_values)
    )
    finite = [(tag, r) for tag, r in terms if not math.isinf(r)]
    if not finite:
        raise DegenerateTargetError(
            "every bipartition is excluded or unbounded; no finite upper "
            "bound exists"
        )
    best = min(finite, key=lambda tr: tr[1])
    return best[1], best[0]
