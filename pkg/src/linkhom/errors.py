"""Exception types shared across the package."""


class LinkhomError(Exception):
    """Base class for all package errors."""


class InputError(LinkhomError):
    """Invalid argument: wrong ring, inhomogeneous input, negative index, ..."""


class ShapeError(LinkhomError):
    """Mismatched free-module shapes or inconsistent twist data."""


class PreconditionError(LinkhomError):
    """A documented operation precondition does not hold."""


class PushforwardObstructed(LinkhomError):
    """Universal pushforward impossible: the obstruction module is nonzero.

    Carries the Hilbert table of the nonzero Ext^1 obstruction.
    """

    def __init__(self, message, obstruction_table=None):
        super().__init__(message)
        self.obstruction_table = obstruction_table


class ParseError(LinkhomError):
    """Script syntax or binding error, with source position."""

    def __init__(self, message, line, column):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
