"""Exception types shared by every module and mapped to CLI exit codes."""


class ValidationError(ValueError):
    """Malformed input or a violated precondition."""


class ResourceError(RuntimeError):
    """A request exceeds a configured size bound."""


class PropertyViolation(AssertionError):
    """A checked mathematical property failed on concrete data."""
