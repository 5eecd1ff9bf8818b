"""Exception types raised by the analyzer."""


class StaticAnalysisError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(StaticAnalysisError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyInputError(ParseError):
    """Input contained nothing recognizable (no stanzas / no functions)."""


class ArchSpecError(StaticAnalysisError):
    """An architecture descriptor violates a hardware invariant."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class UnknownArchitectureError(StaticAnalysisError):
    """Requested architecture name is not in the database."""

    def __init__(self, name: str, known: list[str]):
        self.name = name
        self.known = known
        super().__init__(f"unknown architecture {name!r}; known: {', '.join(known)}")


class UnsupportedArchitectureError(StaticAnalysisError):
    """Compute capability has no throughput-table column."""


class IllegalLaunchError(StaticAnalysisError):
    """Launch parameters outside what the architecture can accept."""


class NoCandidatesError(StaticAnalysisError):
    """Pruning left no thread candidates (empty intersection)."""
