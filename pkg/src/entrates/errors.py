"""Exception types shared across the library.

All argument and domain errors derive from ValueError so that callers who
do not care about the precise failure mode can catch one base class.  The
CLI maps them onto exit codes: state-file problems exit with 2, every
other domain error with 1.
"""


class StateValidationError(ValueError):
    """A state object violates a normalization or positivity invariant."""


class CapacityError(ValueError):
    """A request exceeds a configured size cap (e.g. too many parties)."""


class InfeasibleTargetError(ValueError):
    """A requested conversion target lies outside the achievable region.

    ``violated`` names the broken constraint: "total" for the summed budget,
    "mu" / "nu" for the per-pair caps of the combing region.
    """

    def __init__(self, message: str, violated: str):
        super().__init__(message)
        self.violated = violated


class DegenerateTargetError(ValueError):
    """A rate is undefined because no admissible term remains.

    Raised e.g. when the target state carries no entanglement across any
    relevant cut, so every candidate ratio is excluded.
    """


class NeedsInputError(ValueError):
    """A bound needs a user-supplied value that cannot be derived.

    ``what`` describes the missing quantity (typically an entanglement
    value across a named bipartition).
    """

    def __init__(self, message: str, what: str = ""):
        super().__init__(message)
        self.what = what


class InternalConsistencyError(RuntimeError):
    """A should-be-impossible situation was reached; indicates a bug."""


class StateFileError(ValueError):
    """A state file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no
