"""Exception hierarchy shared by all modules.

The CLI maps each family onto an exit code: parameter problems exit with 2,
connectivity problems with 3 and malformed or incomplete data with 4.
"""


class HyperembError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ParameterError(HyperembError, ValueError):
    exit_code = 2


class ConnectivityError(HyperembError, ValueError):
    exit_code = 3


class DataError(HyperembError, ValueError):
    exit_code = 4


class ParseError(DataError):
    """Malformed input line; ``lineno`` is 1-based."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class NodeRangeError(HyperembError, IndexError):
    exit_code = 4


class UnsupportedDegreeKind(ParameterError):
    pass


class DegenerateArcError(HyperembError, ValueError):
    """Raised when a node's neighbour arc collapses (too few nodes)."""
