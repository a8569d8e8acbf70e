"""Shared exception types."""


class ParseError(ValueError):
    """Malformed input text (process definitions, transition lists,
    formulas, energies).  Carries a 1-based line/column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = "line %d" % line
            if column is not None:
                where += ", column %d" % column
            message = "%s: %s" % (where, message)
        super().__init__(message)


class PositionLimitError(RuntimeError):
    """Game construction exceeded the configured position budget."""


class SolverLimitError(RuntimeError):
    """The fixed-point solver exceeded its iteration budget."""


class ExtractionError(RuntimeError):
    """Internal error: an extracted strategy formula failed its
    soundness post-check.  Indicates a bug, never a user mistake."""
