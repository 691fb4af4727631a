class InvariantError(ArithmeticError):
    """A numerical invariant (unitarity, energy conservation, ...) was violated."""


class ConfigError(ValueError):
    """A run configuration is malformed or outside its documented domain."""
