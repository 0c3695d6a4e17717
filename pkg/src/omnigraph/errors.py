"""Exception types shared across the library and mapped to CLI exit codes."""


class ConfigError(ValueError):
    """Invalid experiment or operation configuration."""


class DataError(ValueError):
    """Malformed or inconsistent input data (files, matrices, labels)."""


class NumericalError(RuntimeError):
    """A numerical routine failed or its preconditions do not hold."""
