"""Rate bounds and protocol synthesis for multipartite entanglement transformations.

The package computes upper and lower bounds on the asymptotic LOCC rate of
converting one multipartite pure state into another, and synthesizes the
constructive protocols (combing, merging orders, time-sharing mixes) that
attain the lower bounds.
"""

from .combing import (
    CombingBranch,
    CombingPlan,
    CombingTarget,
    combing_feasible,
    merging_branches,
    plan_combing,
)
from .entropy import (
    EntropyProfile,
    binary_entropy,
    entropy_profile,
    profile_from_entries,
    von_neumann_entropy,
)
from .errors import (
    CapacityError,
    DegenerateTargetError,
    InfeasibleTargetError,
    InternalConsistencyError,
    NeedsInputError,
    StateFileError,
    StateValidationError,
)
from .fourparty import (
    FourPartyPlan,
    OrderExecution,
    RateTriple,
    best_four_party_plan,
    catalytic_lower_bound,
    max_min_rate_oracle,
    merging_rate_triples,
    plan_four_party,
    triple_ordering_holds,
    upper_bound_four_party,
)
from .ghz import (
    GhzConversionBound,
    best_ghz_bound,
    concurrence,
    effective_two_qubit,
    entanglement_of_formation,
    ghz_combing_feasible,
    ghz_rate_lower,
)
from .battery import BatteryReport, SUITE_NAMES, run_battery
from .states import (
    MixedState,
    PureState,
    SubsystemLayout,
    apply_local_unitary,
    basis_state,
    bell_state,
    ghz_state,
    layout,
    merge_parties,
    partial_trace,
    permute_parties,
    random_mixed_state,
    random_pure_state,
    random_unitary,
    rename_parties,
    tensor_product,
    trace_distance,
    w_state,
)
from .stateio import parse_state, serialize_state, write_state
from .tripartite import (
    LowerWitness,
    RateBound,
    ReversibilityReport,
    TripartitePlan,
    best_bounds,
    bipartite_rate,
    lower_bound_tri,
    plan_tripartite,
    pure_bipartition_entanglement,
    reversibility_gap,
    upper_bound_mixed,
    upper_bound_tri,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
