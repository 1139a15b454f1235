"""Error types raised across mahlerlab."""


class MahlerlabError(Exception):
    """Base class for all mahlerlab errors."""


class DomainError(MahlerlabError, ValueError):
    """Argument outside the range where a formula or series is valid."""


class NonConvergence(MahlerlabError, RuntimeError):
    """Iteration or integration budget exhausted before the tolerance was met."""


class NonFiniteIntegrand(MahlerlabError, ArithmeticError):
    """An integrand returned NaN inside the integration interval."""


class StructuralError(MahlerlabError):
    """Arithmetic data inconsistent with its contract (e.g. bad-prime a_p outside {-1, 0, 1})."""


class LeadingCoefficientVanishes(MahlerlabError, ZeroDivisionError):
    """The leading y-coefficient of a polynomial vanishes at the requested x."""


class ConfigurationError(MahlerlabError):
    """Malformed configuration, curve table or command-line selection."""
