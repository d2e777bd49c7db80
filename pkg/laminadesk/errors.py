"""Exception hierarchy shared by all laminadesk modules."""


class LaminadeskError(Exception):
    """Base class for every error raised by laminadesk."""


class ParseError(LaminadeskError):
    """Malformed presentation, track, curve or current input."""


class PreconditionError(LaminadeskError):
    """An operation was called outside its documented precondition."""


class UncertifiedError(LaminadeskError):
    """A result cannot be certified inside the available ball."""


class NotConjugateError(LaminadeskError):
    """No conjugator was found within the search radius."""


class SubgroupError(LaminadeskError):
    """A class does not lie in the subgroup of the quotient."""


class CapacityError(LaminadeskError):
    """A construction would exceed the configured vertex cap."""


class SurfaceModelError(LaminadeskError):
    """The hyperbolic model does not satisfy the surface relator."""


class TransversalityError(LaminadeskError):
    """An axis passes too close to a polygon vertex after all retries."""


class ZeroCurrentError(LaminadeskError):
    """The zero current cannot be normalized."""


class TrackError(LaminadeskError):
    """Structurally inconsistent train-track incidence data."""


class SplittingError(LaminadeskError):
    """A splitting move is invalid for the given track and weighting."""


class HypothesisViolation(LaminadeskError):
    """Splitting cut off an annular component during branch lengthening."""

    def __init__(self, message: str, diagnostic: dict | None = None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class StepError(LaminadeskError):
    """A straightening step failed; carries the state it rolled back to."""

    def __init__(self, message: str, state=None, cause: Exception | None = None):
        super().__init__(message)
        self.state = state
        self.cause = cause
