"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A model parameter is outside its admissible range."""


class DomainError(ValueError):
    """An evaluation point lies outside a function's domain."""


class ConfigError(ValueError):
    """A config string, flag, or grid spec could not be parsed or validated."""


class SolverError(RuntimeError):
    """A numerical routine failed to produce a usable result."""
