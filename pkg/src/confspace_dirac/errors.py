"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A build parameter or experiment config value is out of its allowed range."""


class DomainMismatchError(ValueError):
    """Operands have incompatible degrees, lengths or shapes."""


class ResourceLimitError(RuntimeError):
    """A requested object would exceed a configured resource cap."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to reach the requested tolerance."""
