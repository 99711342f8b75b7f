"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class SccManipError(Exception):
    """Base class for all errors raised by the package."""


class InputError(SccManipError, ValueError):
    """An operand is outside the domain of the operation."""


class ParseError(InputError):
    """Malformed wire-format text; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ConfigError(InputError):
    """A rule or option is not valid at the requested (n, m)."""


class BoundError(SccManipError):
    """The requested enumeration exceeds the configured search bound."""

    def __init__(self, size: int, bound: int):
        super().__init__(f"search space of {size} full profiles exceeds bound {bound}")
        self.size = size
        self.bound = bound
