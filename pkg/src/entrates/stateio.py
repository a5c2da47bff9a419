"""Line-oriented sparse text format for multipartite states.

Grammar (``#`` starts a comment anywhere, blank lines are ignored)::

    mpstate 1
    parties <label>...
    dims <int>...
    kind pure|mixed
    amp <index> <re> <im>          # pure states, one line per amplitude
    rho <row> <col> <re> <im>      # mixed states, upper triangle suffices

Basis indices are lexicographic with the first party most significant.
Mixed entries below the diagonal are inferred by conjugate symmetry; if a
file carries both (r, c) and (c, r) they must agree as conjugates.
Serialization writes amplitudes with shortest round-trip precision, so a
parse-serialize loop reproduces the state exactly.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .errors import StateFileError, StateValidationError
from .states import MixedState, PureState, State, SubsystemLayout

FORMAT_TAG = "mpstate"
FORMAT_VERSION = "1"

_CONJUGATE_ATOL = 1e-12


def _significant_lines(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield line_no, body


def parse_state(source: str | Path | io.TextIOBase) -> State:
    """Parse a state file from a path, a file object, or raw text.

    A string containing a newline is treated as file content, anything
    else as a path.  Errors carry the offending line number.
    """
    if isinstance(source, io.TextIOBase):
        text = source.read()
    elif isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    elif isinstance(source, str) and "\n" in source:
        text = source
    else:
        text = Path(source).read_text(encoding="utf-8")

    lines = list(_significant_lines(text))
    if not lines:
        raise StateFileError("empty state file")

    pos = 0

    def expect(keyword: str) -> tuple[int, list[str]]:
        nonlocal pos
        if pos >= len(lines):
            raise StateFileError(f"missing '{keyword}' line", lines[-1][0])
        line_no, body = lines[pos]
        parts = body.split()
        if parts[0] != keyword:
            raise StateFileError(
                f"expected '{keyword}', found {parts[0]!r}", line_no
            )
        pos += 1
        return line_no, parts[1:]

    line_no, rest = expect(FORMAT_TAG)
    if rest != [FORMAT_VERSION]:
        raise StateFileError(
            f"unsupported format version {' '.join(rest)!r}", line_no
        )

    line_no, parties = expect("parties")
    if len(parties) < 2:
        raise StateFileError("need at least two parties", line_no)

    line_no, dim_words = expect("dims")
    try:
        dims = tuple(int(w) for w in dim_words)
    except ValueError:
        raise StateFileError(f"dims must be integers, got {dim_words}", line_no)
    try:
        layout = SubsystemLayout(tuple(parties), dims)
    except ValueError as err:
        raise StateFileError(str(err), line_no)

    line_no, kind_words = expect("kind")
    if kind_words not in (["pure"], ["mixed"]):
        raise StateFileError(
            f"kind must be 'pure' or 'mixed', got {' '.join(kind_words)!r}", line_no
        )
    kind = kind_words[0]

    d = layout.total_dim
    if kind == "pure":
        amps = np.zeros(d, dtype=complex)
        seen: set[int] = set()
        for line_no, body in lines[pos:]:
            parts = body.split()
            if parts[0] != "amp" or len(parts) != 4:
                raise StateFileError(
                    f"expected 'amp <index> <re> <im>', got {body!r}", line_no
                )
            try:
                idx = int(parts[1])
                re, im = float(parts[2]), float(parts[3])
            except ValueError:
                raise StateFileError(f"malformed amplitude entry {body!r}", line_no)
            if not 0 <= idx < d:
                raise StateFileError(
                    f"basis index {idx} outside [0, {d})", line_no
                )
            if idx in seen:
                raise StateFileError(f"duplicate entry for index {idx}", line_no)
            seen.add(idx)
            amps[idx] = complex(re, im)
        try:
            return PureState(layout, amps)
        except StateValidationError as err:
            raise StateFileError(str(err))

    entries: dict[tuple[int, int], tuple[complex, int]] = {}
    for line_no, body in lines[pos:]:
        parts = body.split()
        if parts[0] != "rho" or len(parts) != 5:
            raise StateFileError(
                f"expected 'rho <row> <col> <re> <im>', got {body!r}", line_no
            )
        try:
            row, col = int(parts[1]), int(parts[2])
            re, im = float(parts[3]), float(parts[4])
        except ValueError:
            raise StateFileError(f"malformed matrix entry {body!r}", line_no)
        if not (0 <= row < d and 0 <= col < d):
            raise StateFileError(
                f"matrix index ({row}, {col}) outside [0, {d})", line_no
            )
        if (row, col) in entries:
            raise StateFileError(f"duplicate entry for ({row}, {col})", line_no)
        entries[(row, col)] = (complex(re, im), line_no)

    matrix = np.zeros((d, d), dtype=complex)
    for (row, col), (value, line_no) in entries.items():
        mirror = entries.get((col, row))
        if row != col and mirror is not None:
            if abs(mirror[0] - value.conjugate()) > _CONJUGATE_ATOL:
                raise StateFileError(
                    f"entries ({row}, {col}) and ({col}, {row}) are not "
                    "conjugates of each other",
                    line_no,
                )
        matrix[row, col] = value
        if mirror is None:
            matrix[col, row] = value.conjugate()
    try:
        return MixedState(layout, matrix)
    except StateValidationError as err:
        raise StateFileError(str(err))


def serialize_state(state: State) -> str:
    """Render a state in the sparse text format with full precision."""
    lay = state.layout
    lines = [
        f"{FORMAT_TAG} {FORMAT_VERSION}",
        "parties " + " ".join(lay.parties),
        "dims " + " ".join(str(dim) for dim in lay.dims),
    ]
    if isinstance(state, PureState):
        lines.append("kind pure")
        for idx, value in enumerate(state.amplitudes):
            if value != 0:
                lines.append(f"amp {idx} {float(value.real)!r} {float(value.imag)!r}")
    else:
        lines.append("kind mixed")
        d = lay.total_dim
        for row in range(d):
            for col in range(row, d):
                value = state.matrix[row, col]
                if value != 0:
                    lines.append(
                        f"rho {row} {col} {float(value.real)!r} {float(value.imag)!r}"
                    )
    return "\n".join(lines) + "\n"


def write_state(state: State, path: str | Path) -> None:
    Path(path).write_text(serialize_state(state), encoding="utf-8")
