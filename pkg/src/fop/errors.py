"""Exception hierarchy shared by all modules."""


class FopError(Exception):
    """Base class for every error raised by this package."""


class ParseError(FopError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.line = line
        self.col = col


class ModelError(FopError):
    """A model table is missing an entry or holds an out-of-range value."""


class CapExceeded(FopError):
    """Exhaustive enumeration would exceed the configured cap."""


class FragmentError(FopError):
    """An operation restricted to the integer fragment got a real-sorted predicate."""


class SortError(FopError):
    """A pure-integer cut was requested from a row with real-sorted variables."""


class WeakeningError(FopError):
    """A slack keeps a negative coefficient, so it cannot be eliminated."""


class NoCut(FopError):
    """The chosen combination has an integral right-hand side: no Gomory cut exists."""
