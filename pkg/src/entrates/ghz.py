"""Lower bound on distilling an arbitrary state from shared GHZ states.

Combing one copy of an N-party GHZ state yields bipartite pairs between a
distributor and each other party, subject only to the total budget of one
bit per copy.  Sizing the pair with a chosen pivot party proportionally to
the entanglement cost of the target across the pivot's cut, and the other
pairs proportionally to the respective single-party target entropies,
prepares the target at rate

    1 / (E_c(pivot | rest) + sum of the other parties' target entropies),

where the distributor's own share is produced locally and never costs
entanglement.  The entanglement cost is exact for pure targets (the
reduced entropy); for mixed targets whose pivot cut is effectively a
two-qubit system, the entanglement of formation is a computable upper
surrogate that still yields a valid (smaller) lower bound.  Anything else
must be supplied by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from collections.abc import Iterable

import numpy as np

from .entropy import binary_entropy, von_neumann_entropy
from .errors import NeedsInputError
from .states import MixedState, PureState, State, partial_trace
from .tolerances import RATE_ATOL, ZERO_ENTROPY_ATOL

SURROGATE_EXACT_PURE = "exact-pure"
SURROGATE_USER = "user-supplied"
SURROGATE_EOF = "entanglement-of-formation-two-qubit"

# Rank truncation threshold for deciding that a bipartition is effectively
# a two-qubit system.
_SUPPORT_CUTOFF = 1e-10

_PURITY_ATOL = 1e-9

_SIGMA_YY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class GhzConversionBound:
    """Result of the GHZ-to-target lower bound for one role assignment.

    ``split`` lists the per-pair combing targets (bits per GHZ copy), one
    entry per non-distributor party; they saturate the unit combing budget
    whenever the bound is finite.
    """

    parties: int
    alice: str
    pivot: str
    e_c_value: float
    surrogate_kind: str
    rate_lower: float
    split: dict[str, float]
    note: str = ""


def concurrence(rho: MixedState | np.ndarray) -> float:
    """Two-qubit concurrence via the spin-flipped spectrum."""
    m = rho.matrix if isinstance(rho, MixedState) else np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"concurrence needs a two-qubit state, got shape {m.shape}")
    r = m @ _SIGMA_YY @ m.conj() @ _SIGMA_YY
    lam = np.sqrt(np.maximum(np.linalg.eigvals(r).real, 0.0))
    lam = np.sort(lam)[::-1]
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def entanglement_of_formation(rho: MixedState | np.ndarray) -> float:
    """Two-qubit entanglement of formation from the concurrence."""
    c = concurrence(rho)
    return binary_entropy((1.0 + math.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


def _is_pure(state: State) -> bool:
    if isinstance(state, PureState):
        return True
    top = float(np.linalg.eigvalsh(state.matrix)[-1])
    return top >= 1.0 - _PURITY_ATOL


def _bipartite_matrix(state: State, pivot: str) -> tuple[np.ndarray, int, int]:
    """Density matrix reshaped as (pivot, rest, pivot, rest)."""
    lay = state.layout
    ax = lay.axis(pivot)
    rest_axes = [a for a in range(lay.num_parties) if a != ax]
    perm = [ax] + rest_axes
    dp = lay.dims[ax]
    dr = lay.total_dim // dp
    m = state.to_mixed().matrix if isinstance(state, PureState) else state.matrix
    n = lay.num_parties
    t = m.reshape(lay.dims + lay.dims)
    t = t.transpose(perm + [n + a for a in perm])
    return t.reshape(dp, dr, dp, dr), dp, dr


def effective_two_qubit(state: State, pivot: str) -> np.ndarray | None:
    """Project the pivot-versus-rest state onto its local supports.

    Returns a 4x4 density matrix when both marginal supports have rank at
    most 2 after truncating eigenvalues below the support cutoff, padding
    rank-1 sides with an unused level; returns None otherwise.
    """
    t, dp, dr = _bipartite_matrix(state, pivot)
    rho_p = np.einsum("irjr->ij", t)
    rho_r = np.einsum("iris->rs", t)
    bases = []
    for marg in (rho_p, rho_r):
        evals, evecs = np.linalg.eigh(marg)
        support = evecs[:, evals > _SUPPORT_CUTOFF]
        if support.shape[1] > 2:
            return None
        bases.append(support)
    vp, vr = bases
    eff = np.einsum("ia,irjs,jb->arbs", vp.conj(), t, vp)
    eff = np.einsum("rc,arbs,sd->acbd", vr.conj(), eff, vr)
    rp, rr = vp.shape[1], vr.shape[1]
    out = np.zeros((2, 2, 2, 2), dtype=complex)
    out[:rp, :rr, :rp, :rr] = eff
    out = out.reshape(4, 4)
    out = (out + out.conj().T) / 2.0
    tr = float(np.trace(out).real)
    if tr <= 0.0:
        return None
    return out / tr


def _resolve_cost(state: State, pivot: str, override: float | None) -> tuple[float, str]:
    if override is not None:
        if override < 0:
            raise ValueError(f"entanglement cost override must be >= 0, got {override}")
        return float(override), SURROGATE_USER
    if _is_pure(state):
        return von_neumann_entropy(partial_trace(state, [pivot])), SURROGATE_EXACT_PURE
    eff = effective_two_qubit(state, pivot)
    if eff is not None:
        return entanglement_of_formation(eff), SURROGATE_EOF
    rest = "".join(state.layout.complement([pivot]))
    raise NeedsInputError(
        f"entanglement cost across {pivot}|{rest} is not computable for this "
        "mixed state; supply it explicitly",
        what=f"{pivot}|{rest}",
    )


def ghz_rate_lower(
    sigma: State,
    pivot: str | None = None,
    alice: str | None = None,
    e_c_override: float | None = None,
) -> GhzConversionBound:
    """Lower bound on the rate of turning shared GHZ states into ``sigma``.

    The distributor ``alice`` prepares the target locally, converts it
    across the ``pivot`` cut with the pivot's pair, and teleports the
    remaining shares; only the pivot's cost and the other parties' target
    entropies enter the denominator.  Defaults: the first party is the
    distributor and the second the pivot.  A fully product target makes
    the denominator vanish and the bound unbounded (any rate works),
    which is reported as an infinite rate with an explanatory note.
    """
    lay = sigma.layout
    if lay.num_parties < 3:
        raise ValueError("the GHZ conversion bound needs at least three parties")
    if alice is None:
        alice = lay.parties[0] if pivot != lay.parties[0] else lay.parties[1]
    if pivot is None:
        pivot = next(p for p in lay.parties if p != alice)
    if alice not in lay.parties or pivot not in lay.parties:
        raise ValueError(f"roles must be among the parties {lay.parties}")
    if alice == pivot:
        raise ValueError("the distributor cannot also be the pivot")

    e_c, kind = _resolve_cost(sigma, pivot, e_c_override)
    others = [p for p in lay.parties if p not in (alice, pivot)]
    entropies = {
        p: von_neumann_entropy(partial_trace(sigma, [p])) for p in others
    }
    denominator = e_c + sum(entropies.values())
    if denominator <= ZERO_ENTROPY_ATOL:
        return GhzConversionBound(
            parties=lay.num_parties,
            alice=alice,
            pivot=pivot,
            e_c_value=e_c,
            surrogate_kind=kind,
            rate_lower=math.inf,
            split={},
            note="target costs no entanglement across any relevant cut; "
            "every rate is achievable",
        )
    rate = 1.0 / denominator
    split = {pivot: rate * e_c}
    for p in others:
        split[p] = rate * entropies[p]
    return GhzConversionBound(
        parties=lay.num_parties,
        alice=alice,
        pivot=pivot,
        e_c_value=e_c,
        surrogate_kind=kind,
        rate_lower=rate,
        split=split,
    )


def best_ghz_bound(
    sigma: State,
    pivot: str | None = None,
    alice: str | None = None,
    e_c_override: float | None = None,
) -> GhzConversionBound:
    """Maximize the GHZ conversion bound over role assignments.

    Unspecified roles are enumerated exhaustively.  An explicit cost
    override refers to one specific cut, so it requires an explicit pivot.
    Role pairs whose cost cannot be resolved are skipped; if none can be
    evaluated the underlying needs-input error is re-raised.
    """
    lay = sigma.layout
    if e_c_override is not None and pivot is None:
        raise ValueError(
            "an entanglement-cost override names a specific cut; pass the "
            "pivot explicitly"
        )
    alices = [alice] if alice is not None else list(lay.parties)
    best: GhzConversionBound | None = None
    last_missing: NeedsInputError | None = None
    for a in alices:
        pivots = [pivot] if pivot is not None else [p for p in lay.parties if p != a]
        for b in pivots:
            if b == a:
                continue
            try:
                bound = ghz_rate_lower(sigma, pivot=b, alice=a, e_c_override=e_c_override)
            except NeedsInputError as err:
                last_missing = err
                continue
            if best is None or bound.rate_lower > best.rate_lower + 1e-15:
                best = bound
    if best is None:
        if last_missing is not None:
            raise last_missing
        raise ValueError("no admissible role assignment exists")
    return best


def ghz_combing_feasible(splits: Iterable[float]) -> bool:
    """Whether per-pair targets fit the unit budget of one GHZ copy."""
    total = 0.0
    for value in splits:
        if value < 0:
            raise ValueError(f"combing targets must be nonnegative, got {value}")
        total += value
    return total <= 1.0 + RATE_ATOL
