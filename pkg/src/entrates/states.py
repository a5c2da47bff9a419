"""Dense multipartite quantum states and the linear algebra used on them.

States live on a :class:`SubsystemLayout` that fixes the tensor
factorization.  The computational basis is lexicographic with the first
declared party most significant: the flat index of the occupation
``(i_1, ..., i_N)`` is ``i_1 * d_2 * ... * d_N + ... + i_N``.

All operations are pure functions on effectively immutable inputs (the
amplitude and matrix buffers are marked read-only), so they are safe to
call from many threads.  The only random source is a caller-owned seeded
generator.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import StateValidationError
from .tolerances import VALIDATION_ATOL

_DEFAULT_LABELS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered party labels with their local dimensions.

    The ordering is significant: it fixes the basis convention above and
    the canonical order in which party subsets are reported.  Reductions
    of multipartite states may live on a single remaining party, so one
    party is permitted; every local dimension must be at least 2.
    """

    parties: tuple[str, ...]
    dims: tuple[int, ...]

    def __post_init__(self):
        parties = tuple(self.parties)
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "parties", parties)
        object.__setattr__(self, "dims", dims)
        if len(parties) < 1:
            raise ValueError("a layout needs at least one party")
        if len(parties) != len(dims):
            raise ValueError(
                f"{len(parties)} parties but {len(dims)} dimensions given"
            )
        if len(set(parties)) != len(parties):
            raise ValueError(f"party labels must be unique, got {parties}")
        if any(d < 2 for d in dims):
            raise ValueError(f"every local dimension must be >= 2, got {dims}")

    @property
    def num_parties(self) -> int:
        return len(self.parties)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def axis(self, party: str) -> int:
        """Position of ``party`` in the layout order."""
        try:
            return self.parties.index(party)
        except ValueError:
            raise ValueError(
                f"unknown party {party!r}; layout has {self.parties}"
            ) from None

    def dim_of(self, subset: Iterable[str] | str) -> int:
        return math.prod(self.dims[self.axis(p)] for p in self.subset(subset))

    def subset(self, labels: Iterable[str] | str) -> tuple[str, ...]:
        """Normalize a party subset to a tuple in layout order.

        A plain string is interpreted as a sequence of single-character
        labels ("AB" means parties A and B), which requires every label in
        the layout to be a single character.
        """
        if isinstance(labels, str):
            if any(len(p) != 1 for p in self.parties):
                raise ValueError(
                    "string subsets are only supported for single-character "
                    f"party labels; layout has {self.parties}"
                )
            labels = tuple(labels)
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"subset contains duplicate labels: {labels}")
        axes = sorted(self.axis(p) for p in labels)
        return tuple(self.parties[a] for a in axes)

    def complement(self, subset: Iterable[str] | str) -> tuple[str, ...]:
        inside = set(self.subset(subset))
        return tuple(p for p in self.parties if p not in inside)

    def proper_subsets(self) -> list[tuple[str, ...]]:
        """Every nonempty proper party subset, ordered by size then position."""
        out = []
        for size in range(1, self.num_parties):
            for combo in combinations(range(self.num_parties), size):
                out.append(tuple(self.parties[a] for a in combo))
        return out

    def flat_index(self, occupation: Sequence[int]) -> int:
        """Flat basis index of a per-party occupation tuple."""
        if len(occupation) != self.num_parties:
            raise ValueError("occupation length does not match party count")
        idx = 0
        for occ, dim in zip(occupation, self.dims):
            if not 0 <= occ < dim:
                raise ValueError(f"occupation {occ} outside local dimension {dim}")
            idx = idx * dim + occ
        return idx


def layout(parties: str | Sequence[str], dims: Sequence[int]) -> SubsystemLayout:
    """Convenience constructor; ``layout("ABC", [2, 2, 2])``."""
    if isinstance(parties, str):
        parties = tuple(parties)
    return SubsystemLayout(tuple(parties), tuple(dims))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over a layout."""

    layout: SubsystemLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _readonly(self.amplitudes).reshape(-1)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (self.layout.total_dim,):
            raise StateValidationError(
                f"amplitude vector has length {amps.shape[0]}, layout needs "
                f"{self.layout.total_dim}"
            )
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > VALIDATION_ATOL:
            raise StateValidationError(
                f"state is not normalized: sum of squared amplitudes is {norm_sq!r}"
            )

    def to_mixed(self) -> MixedState:
        rho = np.outer(self.amplitudes, self.amplitudes.conj())
        return MixedState(self.layout, rho)


@dataclass(frozen=True, eq=False)
class MixedState:
    """Density matrix over a layout: Hermitian, unit trace, positive."""

    layout: SubsystemLayout
    matrix: np.ndarray

    def __post_init__(self):
        m = _readonly(self.matrix)
        object.__setattr__(self, "matrix", m)
        d = self.layout.total_dim
        if m.shape != (d, d):
            raise StateValidationError(
                f"density matrix has shape {m.shape}, layout needs ({d}, {d})"
            )
        herm_defect = float(np.max(np.abs(m - m.conj().T)))
        if herm_defect > VALIDATION_ATOL:
            raise StateValidationError(
                f"density matrix is not Hermitian (defect {herm_defect:.3e})"
            )
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > VALIDATION_ATOL:
            raise StateValidationError(f"density matrix has trace {tr!r}, expected 1")
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < -VALIDATION_ATOL:
            raise StateValidationError(
                f"density matrix has negative eigenvalue {lo:.3e}"
            )


State = PureState | MixedState


def partial_trace(state: State, keep: Iterable[str] | str) -> MixedState:
    """Reduced density matrix on the kept parties.

    ``keep`` must be a nonempty strict subset of the layout's parties; the
    result's party order follows the original layout order.
    """
    lay = state.layout
    kept = lay.subset(keep)
    if len(kept) == 0:
        raise ValueError("keep must name at least one party")
    if len(kept) == lay.num_parties:
        raise ValueError("keep must be a strict subset of the parties")
    keep_axes = [lay.axis(p) for p in kept]
    rest_axes = [a for a in range(lay.num_parties) if a not in keep_axes]
    d_keep = math.prod(lay.dims[a] for a in keep_axes)
    d_rest = math.prod(lay.dims[a] for a in rest_axes)
    sub = SubsystemLayout(kept, tuple(lay.dims[a] for a in keep_axes))

    if isinstance(state, PureState):
        m = state.amplitudes.reshape(lay.dims)
        m = np.transpose(m, keep_axes + rest_axes).reshape(d_keep, d_rest)
        rho = m @ m.conj().T
    else:
        n = lay.num_parties
        t = state.matrix.reshape(lay.dims + lay.dims)
        # Row index letters 0..n-1, column letters n..2n-1; traced parties
        # share a letter between row and column so einsum sums them out.
        letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
        row = list(letters[:n])
        col = list(letters[n : 2 * n])
        for a in rest_axes:
            col[a] = row[a]
        out = "".join(row[a] for a in keep_axes) + "".join(col[a] for a in keep_axes)
        rho = np.einsum(f"{''.join(row)}{''.join(col)}->{out}", t)
        rho = rho.reshape(d_keep, d_keep)
    # Symmetrize away rounding noise before validation.
    rho = (rho + rho.conj().T) / 2.0
    return MixedState(sub, rho)


def trace_distance(a: State, b: State) -> float:
    """Half the trace norm of the difference of two states on one layout."""
    if a.layout != b.layout:
        raise ValueError(
            f"layout mismatch: {a.layout.parties}/{a.layout.dims} vs "
            f"{b.layout.parties}/{b.layout.dims}"
        )
    ma = a.to_mixed().matrix if isinstance(a, PureState) else a.matrix
    mb = b.to_mixed().matrix if isinstance(b, PureState) else b.matrix
    eig = np.linalg.eigvalsh(ma - mb)
    return min(1.0, max(0.0, float(0.5 * np.abs(eig).sum())))


def random_pure_state(lay: SubsystemLayout, seed) -> PureState:
    """Haar-distributed pure state, deterministic per seed.

    ``seed`` may be anything accepted by :func:`numpy.random.default_rng`,
    including an already constructed generator owned by the caller.
    """
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(lay.total_dim) + 1j * rng.standard_normal(lay.total_dim)
    return PureState(lay, z / np.linalg.norm(z))


def random_mixed_state(lay: SubsystemLayout, seed, ancilla_dim: int | None = None) -> MixedState:
    """Random mixed state obtained by purification sampling.

    Draws a Haar-random pure state on the layout extended by one ancilla
    party (dimension ``ancilla_dim``, defaulting to the layout's total
    dimension so generic full-rank states result) and traces the ancilla
    out.
    """
    if ancilla_dim is None:
        ancilla_dim = lay.total_dim
    anc = "_env"
    if anc in lay.parties:
        anc = "_env2"
    big = SubsystemLayout(lay.parties + (anc,), lay.dims + (ancilla_dim,))
    pure = random_pure_state(big, seed)
    reduced = partial_trace(pure, lay.parties)
    return reduced


def random_unitary(dim: int, seed) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    phase = np.diag(r).copy()
    phase /= np.abs(phase)
    return q * phase


def apply_local_unitary(state: PureState, party: str, u: np.ndarray) -> PureState:
    """Apply a unitary on a single party of a pure state."""
    lay = state.layout
    ax = lay.axis(party)
    d = lay.dims[ax]
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise ValueError(f"unitary shape {u.shape} does not match local dim {d}")
    if np.max(np.abs(u @ u.conj().T - np.eye(d))) > 1e-8:
        raise ValueError("matrix is not unitary")
    t = state.amplitudes.reshape(lay.dims)
    t = np.moveaxis(np.tensordot(u, t, axes=([1], [ax])), 0, ax)
    return PureState(lay, t.reshape(-1))


def tensor_product(*states: PureState) -> PureState:
    """Tensor product of pure states with pairwise disjoint party labels."""
    if not states:
        raise ValueError("need at least one state")
    parties: tuple[str, ...] = ()
    dims: tuple[int, ...] = ()
    amps = np.array([1.0 + 0j])
    for s in states:
        overlap = set(parties) & set(s.layout.parties)
        if overlap:
            raise ValueError(f"party labels appear twice: {sorted(overlap)}")
        parties += s.layout.parties
        dims += s.layout.dims
        amps = np.kron(amps, s.amplitudes)
    return PureState(SubsystemLayout(parties, dims), amps)


def permute_parties(state: PureState, order: Sequence[str]) -> PureState:
    """Reorder the parties of a pure state (same physical state, new basis)."""
    lay = state.layout
    order = tuple(order)
    if sorted(order) != sorted(lay.parties):
        raise ValueError(f"order {order} is not a permutation of {lay.parties}")
    axes = [lay.axis(p) for p in order]
    t = state.amplitudes.reshape(lay.dims).transpose(axes)
    new = SubsystemLayout(order, tuple(lay.dims[a] for a in axes))
    return PureState(new, t.reshape(-1))


def merge_parties(
    state: PureState, groups: Sequence[tuple[str, Sequence[str]]]
) -> PureState:
    """Fuse groups of parties into single parties.

    ``groups`` lists ``(new_label, old_labels)`` pairs; every original
    party must appear in exactly one group.  The result's party order
    follows the group list, and within a group the old ordering of labels
    fixes the fused basis (first listed most significant).
    """
    lay = state.layout
    flat: list[str] = []
    for _, olds in groups:
        flat.extend(olds)
    if sorted(flat) != sorted(lay.parties):
        raise ValueError("groups must cover every party exactly once")
    permuted = permute_parties(state, flat)
    new_parties = tuple(name for name, _ in groups)
    new_dims = tuple(
        math.prod(lay.dims[lay.axis(p)] for p in olds) for _, olds in groups
    )
    return PureState(SubsystemLayout(new_parties, new_dims), permuted.amplitudes)


def rename_parties(state: PureState, mapping: dict[str, str]) -> PureState:
    """Relabel parties without touching amplitudes."""
    lay = state.layout
    new = tuple(mapping.get(p, p) for p in lay.parties)
    return PureState(SubsystemLayout(new, lay.dims), state.amplitudes)


def _labels(n: int, labels: Sequence[str] | None) -> tuple[str, ...]:
    if labels is None:
        if n > len(_DEFAULT_LABELS):
            raise ValueError("too many parties for default labels")
        return tuple(_DEFAULT_LABELS[:n])
    labels = tuple(labels)
    if len(labels) != n:
        raise ValueError(f"need {n} labels, got {len(labels)}")
    return labels


def ghz_state(num_parties: int = 3, local_dim: int = 2, labels: Sequence[str] | None = None) -> PureState:
    """Generalized GHZ state (|0...0> + ... + |d-1...d-1>)/sqrt(d)."""
    if num_parties < 2:
        raise ValueError("GHZ needs at least two parties")
    lay = SubsystemLayout(_labels(num_parties, labels), (local_dim,) * num_parties)
    amps = np.zeros(lay.total_dim, dtype=complex)
    for i in range(local_dim):
        amps[lay.flat_index((i,) * num_parties)] = 1.0
    return PureState(lay, amps / np.sqrt(local_dim))


def w_state(num_parties: int = 3, labels: Sequence[str] | None = None) -> PureState:
    """W state: equal superposition of single-excitation basis states."""
    if num_parties < 2:
        raise ValueError("W needs at least two parties")
    lay = SubsystemLayout(_labels(num_parties, labels), (2,) * num_parties)
    amps = np.zeros(lay.total_dim, dtype=complex)
    for k in range(num_parties):
        occ = [0] * num_parties
        occ[k] = 1
        amps[lay.flat_index(occ)] = 1.0
    return PureState(lay, amps / np.sqrt(num_parties))


def bell_state(labels: Sequence[str] = ("A", "B")) -> PureState:
    """The maximally entangled two-qubit state (|00> + |11>)/sqrt(2)."""
    return ghz_state(2, 2, labels)


def basis_state(lay: SubsystemLayout, occupation: Sequence[int]) -> PureState:
    """Computational basis product state for a given occupation."""
    amps = np.zeros(lay.total_dim, dtype=complex)
    amps[lay.flat_index(occupation)] = 1.0
    return PureState(lay, amps)
