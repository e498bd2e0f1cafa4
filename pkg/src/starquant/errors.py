"""Semantic exceptions shared across the engine."""


class EngineError(Exception):
    """Base class for all starquant errors."""


class DomainError(EngineError, ValueError):
    """Geometric input outside the closed upper half plane rules."""


class ParseError(EngineError, ValueError):
    """Malformed graph / field / series text or JSON."""


class EnumerationCapError(EngineError, RuntimeError):
    """Graph enumeration would exceed the configured cap."""


class DegreeMismatchError(EngineError, ValueError):
    """Edge-form degree does not match the integration domain dimension."""


class ArityMismatchError(EngineError, ValueError):
    """Operator applied to the wrong number of arguments."""


class DimensionMismatchError(EngineError, ValueError):
    """Mixed coordinate dimensions in polynomial / field arithmetic."""


class ConfigError(EngineError, ValueError):
    """Invalid integration or engine configuration."""


class ConvergenceWarning(UserWarning):
    """Statistical error above the requested target at the sample budget."""
