"""Entropies of states and their reductions.

Everything is measured in bits (log base 2).  Eigenvalues produced by the
Hermitian solver may carry tiny negative noise; values in
``[-VALIDATION_ATOL, 0]`` are clipped to zero before taking logs, anything
more negative is rejected as an invalid state.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, StateValidationError
from .states import MixedState, PureState, State, SubsystemLayout, partial_trace
from .tolerances import (
    EIGENVALUE_CUTOFF,
    EQUALITY_ATOL,
    VALIDATION_ATOL,
)

MAX_PROFILE_PARTIES = 8


def von_neumann_entropy(rho: MixedState | np.ndarray) -> float:
    """Von Neumann entropy -Tr(rho log2 rho) in bits.

    Accepts a :class:`MixedState` or a raw Hermitian matrix.  Eigenvalues
    at or below ``EIGENVALUE_CUTOFF`` are treated as exact zeros
    (0 log 0 = 0).
    """
    m = rho.matrix if isinstance(rho, MixedState) else np.asarray(rho, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if float(np.max(np.abs(m - m.conj().T))) > VALIDATION_ATOL:
        raise ValueError("matrix is not Hermitian")
    evals = np.linalg.eigvalsh(m)
    if float(evals[0]) < -VALIDATION_ATOL:
        raise StateValidationError(
            f"matrix has negative eigenvalue {float(evals[0]):.3e}"
        )
    p = evals[evals > EIGENVALUE_CUTOFF]
    s = float(-(p * np.log2(p)).sum()) if p.size else 0.0
    return max(s, 0.0)


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2 (1-x) for x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs x in [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x))


@dataclass(frozen=True, eq=False)
class EntropyProfile:
    """Reduced entropies of every nonempty proper party subset, in bits."""

    layout: SubsystemLayout
    entries: dict[frozenset[str], float]

    def s(self, subset: Iterable[str] | str) -> float:
        """Entropy of the reduction onto ``subset``."""
        key = frozenset(self.layout.subset(subset))
        if key not in self.entries:
            raise ValueError(
                f"no entry for subset {sorted(key)}; profile covers nonempty "
                f"proper subsets of {self.layout.parties}"
            )
        return self.entries[key]

    @property
    def parties(self) -> tuple[str, ...]:
        return self.layout.parties

    def subsets(self) -> list[tuple[str, ...]]:
        return self.layout.proper_subsets()


def profile_from_entries(
    lay: SubsystemLayout, entries: dict, validate: bool = True
) -> EntropyProfile:
    """Build a profile from precomputed entropies.

    Keys may be any subset notation accepted by the layout.  Used for
    synthetic profiles in tests and for bound evaluation on entropy data
    that did not come from an explicit state.
    """
    norm: dict[frozenset[str], float] = {}
    for key, value in entries.items():
        norm[frozenset(lay.subset(key))] = float(value)
    expected = {frozenset(t) for t in lay.proper_subsets()}
    missing = expected - set(norm)
    if missing:
        raise ValueError(f"profile is missing subsets {sorted(map(sorted, missing))}")
    prof = EntropyProfile(lay, norm)
    if validate:
        _validate_profile(prof)
    return prof


def _validate_profile(prof: EntropyProfile) -> None:
    for subset, value in prof.entries.items():
        if value < -EQUALITY_ATOL:
            raise StateValidationError(
                f"entropy of {sorted(subset)} is negative: {value!r}"
            )
        cap = math.log2(prof.layout.dim_of(subset))
        if value > cap + EQUALITY_ATOL:
            raise StateValidationError(
                f"entropy of {sorted(subset)} is {value!r}, above log2(dim) = {cap!r}"
            )


def entropy_profile(state: State, max_parties: int = MAX_PROFILE_PARTIES) -> EntropyProfile:
    """Reduced entropy of every nonempty proper party subset.

    The scan is exponential in the number of parties, so layouts above
    ``max_parties`` are rejected.  Every subset is reduced and diagonalized
    independently; for a pure global state the complement symmetry
    S(T) = S(complement of T) is then a genuine numerical check rather
    than a built-in identity.
    """
    lay = state.layout
    if lay.num_parties > max_parties:
        raise CapacityError(
            f"{lay.num_parties} parties exceed the profile cap of {max_parties}"
        )
    if lay.num_parties < 2:
        raise ValueError("an entropy profile needs at least two parties")
    entries: dict[frozenset[str], float] = {}
    for subset in lay.proper_subsets():
        entries[frozenset(subset)] = von_neumann_entropy(partial_trace(state, subset))
    prof = EntropyProfile(lay, entries)
    _validate_profile(prof)
    return prof


def as_profile(state_or_profile: State | EntropyProfile) -> EntropyProfile:
    """Pass profiles through, profile states on the fly."""
    if isinstance(state_or_profile, EntropyProfile):
        return state_or_profile
    return entropy_profile(state_or_profile)
