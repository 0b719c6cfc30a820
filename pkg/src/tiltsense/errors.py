"""Exception hierarchy shared by the whole package."""


class TiltSenseError(Exception):
    """Base class for all package errors."""


class ValidationError(TiltSenseError, ValueError):
    """Input violates a documented precondition or invariant."""


class PropertyRangeError(ValidationError):
    """A property model was evaluated outside its validity range."""

    def __init__(self, prop, T, lo, hi):
        self.prop = prop
        self.T = T
        self.range = (lo, hi)
        super().__init__(f"{prop}: T={T:g} K outside validity range [{lo:g}, {hi:g}] K")


class ParseError(ValidationError):
    """A structured text document could not be parsed or does not follow the schema."""


class ConfigError(ValidationError):
    """Solver or run configuration is inconsistent."""


class CFLError(ConfigError):
    """Transient time step exceeds the stability limit."""

    def __init__(self, dt, dt_max):
        self.dt = dt
        self.dt_max = dt_max
        super().__init__(
            f"time step {dt:.4g} s exceeds the maximum admissible time step {dt_max:.4g} s"
        )


class RegimeError(TiltSenseError):
    """Operating point outside the laminar regime the solver assumes."""


class ConvergenceError(TiltSenseError):
    """Iterative solve did not reach its tolerance."""

    def __init__(self, message, residuals=()):
        self.residuals = list(residuals)
        super().__init__(message)


class FitError(TiltSenseError, ValueError):
    """A curve fit could not be performed on the supplied data."""


class GeometryError(ValidationError):
    """Geometry is inconsistent with the computational grid."""
