"""Exception hierarchy shared by all modules."""


class TrainTrackError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(TrainTrackError, ValueError):
    """Malformed input: unknown names, endpoint mismatches, bad grammar."""


class DomainError(TrainTrackError, ValueError):
    """An operation was called outside of its domain (e.g. on a zero path)."""


class HypothesisViolation(TrainTrackError):
    """The map fails a standing assumption (train track, expanding, injective)."""


class CapacityError(TrainTrackError):
    """A configurable resource cap was exceeded."""

    def __init__(self, cap_name: str, limit: int, detail: str = ""):
        self.cap_name = cap_name
        self.limit = limit
        msg = f"capacity cap {cap_name!r} = {limit} exceeded"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ConsistencyError(TrainTrackError, RuntimeError):
    """An internal invariant failed; this signals a bug, not bad input."""
