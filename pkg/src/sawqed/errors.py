"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Malformed or invalid device/scenario configuration.

    ``field`` names the first violated invariant or offending key.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class TransmonRegimeError(ValueError):
    """Josephson energy at or below the charging energy; spectrum undefined."""


class UnreachableFrequencyError(ValueError):
    """Requested 0-1 frequency cannot be reached by flux tuning."""


class SamplingError(ValueError):
    """Time grid too coarse for the operation's bandwidth."""


class GateWindowError(ValueError):
    """Time gate extends outside the unambiguous range of the spectrum."""


class WeakFieldError(ValueError):
    """Input field too strong for the linear-scatterer model."""


class ScheduleError(ValueError):
    """Drive schedule inconsistent with the requested level count."""


class StepSizeError(RuntimeError):
    """Integrator step produced more than the allowed trace drift."""


class ConvergenceError(RuntimeError):
    """Iterative solver hit its iteration cap.

    ``best`` carries the best point found so far, when available.
    """

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best
