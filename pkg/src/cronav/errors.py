"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid scenario, model or design parameters."""


class GuidanceSingularityError(ArithmeticError):
    """The LGVF normalisation is undefined (planar radius below the guard)."""


class InfeasibleBoundError(ValueError):
    """A stability bound has no admissible value (e.g. thrust below disturbance)."""


class RunAborted(RuntimeError):
    """A scenario run was stopped before its configured duration.

    ``telemetry`` holds the rows produced before the abort, if any.
    """

    def __init__(self, message: str, telemetry=None):
        super().__init__(message)
        self.telemetry = telemetry
