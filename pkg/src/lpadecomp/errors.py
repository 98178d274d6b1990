"""Exception hierarchy shared by every module."""


class LPAError(Exception):
    """Base class for all errors raised by lpadecomp."""


class GraphError(LPAError, ValueError):
    """A graph could not be built or a vertex name is unknown."""


class ParseError(GraphError):
    """Malformed graph text. ``line`` is 1-based, or None for file-level problems."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class LimitExceeded(LPAError):
    """The graph is larger than an exhaustive routine is configured to handle."""


class InvalidPairError(LPAError, ValueError):
    """Vertex sets violate a hereditary/saturated/admissible/disjointness precondition."""


class UnsupportedGraphError(LPAError):
    """The graph is outside the scope of the requested routine (omega bundles, cycles)."""
