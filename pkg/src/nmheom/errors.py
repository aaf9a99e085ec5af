"""Exception types shared across the package."""


class NumericalDivergenceError(RuntimeError):
    """Raised when an integration blows up (under-truncation or step failure)."""


class DepthConvergenceError(RuntimeError):
    """Raised when the hierarchy does not converge below the hard depth cap."""


class ConfigError(ValueError):
    """Raised for invalid experiment configurations."""
