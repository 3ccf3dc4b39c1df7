"""Exception hierarchy; every error derives from :class:`GammaDilError`."""

__all__ = [
    "GammaDilError",
    "NotHermitian",
    "NotPSD",
    "NoConvergence",
    "NotCommuting",
    "NotContractions",
    "NotNormal",
    "ResidualTooLarge",
    "DepthTooSmall",
    "PowersExceedDepth",
    "WindowTooDeep",
    "SymmetryViolated",
]


class GammaDilError(Exception):
    """Base class for all errors raised by gammadil."""


class NotHermitian(GammaDilError, ValueError):
    pass


class NotPSD(GammaDilError, ValueError):
    pass


class NoConvergence(GammaDilError, RuntimeError):
    pass


class NotCommuting(GammaDilError, ValueError):
    pass


class NotContractions(GammaDilError, ValueError):
    pass


class NotNormal(GammaDilError, ValueError):
    pass


class ResidualTooLarge(GammaDilError, ArithmeticError):
    pass


class DepthTooSmall(GammaDilError, ValueError):
    pass


class PowersExceedDepth(GammaDilError, ValueError):
    pass


class WindowTooDeep(GammaDilError, ValueError):
    pass


class SymmetryViolated(GammaDilError, ValueError):
    pass
