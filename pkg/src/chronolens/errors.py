"""Exception hierarchy shared by all chronolens modules."""


class ChronolensError(Exception):
    """Base class for every error raised by the package."""


class InvalidArgument(ChronolensError, ValueError):
    pass


class ConfigError(ChronolensError):
    """Scenario or dispersion file could not be parsed or validated."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class NumericalError(ChronolensError):
    """Discretisation is too coarse or too small for the requested physics."""


class ResolutionError(NumericalError):
    pass


class WindowError(NumericalError):
    """Field energy reaches the edge of the time grid (wraparound risk)."""


class StepError(NumericalError):
    pass


class MeasurementError(ChronolensError):
    pass


class ValidityError(ChronolensError):
    """Wavelength outside the validity range of a dispersion formula."""


class InfeasibleError(ChronolensError):
    """A design budget cannot be met with the requested parameters."""
