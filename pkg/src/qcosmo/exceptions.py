"""Exception types raised across the package."""


class QcosmoError(Exception):
    """Base class for all package errors."""


class ConfigError(QcosmoError, ValueError):
    """Invalid user-supplied configuration (bad model name, malformed override)."""


class MissingParameter(ConfigError):
    pass


class NonFiniteValue(QcosmoError, ArithmeticError):
    """A potential or objective produced inf/nan on the grid."""


class NotHermitian(QcosmoError, ValueError):
    pass


class NoConvergence(QcosmoError, ArithmeticError):
    pass


class QubitMismatch(QcosmoError, ValueError):
    pass


class NonFiniteObjective(NonFiniteValue):
    pass


class ZeroGradientRegion(QcosmoError, ArithmeticError):
    """SPSA calibration saw a zero gradient estimate on every probe."""
