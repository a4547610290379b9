"""Exception types shared across the package."""


class LrmimoError(Exception):
    """Base class for all package errors."""


class SingularInput(LrmimoError):
    """Matrix is rank deficient or contains non-finite entries."""


class ShapeError(LrmimoError):
    """Operands have incompatible dimensions."""


class DomainError(LrmimoError):
    """Scalar argument outside its allowed range."""


class InvalidSymbol(LrmimoError):
    """Symbol index outside the constellation."""


class CodebookTooLarge(LrmimoError):
    """Requested enumeration exceeds the configured cap."""


class MinimumRate(LrmimoError):
    """Target rate below the smallest realizable constellation."""


class PolicyKindError(LrmimoError):
    """Operation applied to a policy of the wrong kind."""


class InsufficientData(LrmimoError):
    """Too few usable grid points for a regression."""


class InvalidWeighting(LrmimoError):
    """Utility weighting fails the monotonicity requirements."""


class ConfigError(LrmimoError):
    """Experiment configuration failed validation."""
