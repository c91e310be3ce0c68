"""Exception types raised by the library."""


class AtlasError(Exception):
    """Base class for all library errors."""


class DegenerateParameterError(AtlasError, ValueError):
    pass


class PoleError(AtlasError, ValueError):
    pass


class CycleNotClosedError(AtlasError, ValueError):
    pass


class LiftUndefinedError(AtlasError, ValueError):
    pass


class PreconditionError(AtlasError, ValueError):
    """An operation was called outside the region where it is defined."""


class OutsideHyperbolicComponentError(PreconditionError):
    pass


class MatchError(AtlasError, RuntimeError):
    def __init__(self, message, best_residual=float("nan")):
        super().__init__(message)
        self.best_residual = best_residual
