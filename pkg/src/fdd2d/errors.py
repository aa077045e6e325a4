"""Exception types raised across the package."""


class NoSignChange(ValueError):
    """The function has the same strict sign at both ends of the bracket."""


class NonFinite(ArithmeticError):
    """The function returned NaN or an infinity inside the search interval."""


class DegenerateInput(ValueError):
    """A closed form is undefined at the requested point (e.g. p_C = 0)."""


class DegenerateChannel(ValueError):
    """A channel gain of zero makes a root undefined (0 or infinite)."""


class InfeasibleTarget(ValueError):
    """Requested uplink rate exceeds the maximum achievable rate."""


class InvalidGeometry(ValueError):
    """Node placement violates the cell layout (e.g. coincident nodes)."""


class ConfigError(ValueError):
    """Experiment configuration could not be parsed or validated."""
