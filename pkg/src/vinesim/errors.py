"""Exception types raised by vinesim."""


class VinesimError(Exception):
    """Base class for all vinesim errors."""


class InvalidGeometryError(VinesimError, ValueError):
    pass


class InputFormatError(VinesimError, ValueError):
    """Malformed input file. Carries the 1-based line and column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class DomainError(VinesimError, ValueError):
    """An argument lies outside the domain of the operation."""


class SizeLimitError(VinesimError, ValueError):
    pass


class MisuseError(VinesimError, RuntimeError):
    """Operation called with an agent profile it does not apply to."""


class ConfigError(VinesimError, ValueError):
    pass
