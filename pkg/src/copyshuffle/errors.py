"""Exception hierarchy shared by every module."""


class LanguageError(Exception):
    """Base class for all errors raised by the toolkit."""


class ParseError(LanguageError, ValueError):
    """A text file or token string could not be parsed."""


class PreconditionError(LanguageError, ValueError):
    """An operation was called outside its documented domain."""


class ForeignSymbolError(PreconditionError):
    """A word uses a symbol that is not in the automaton's alphabet."""


class SizeLimitError(LanguageError):
    """An explicit size limit (shuffle size, enumeration length) was exceeded."""


class CapacityError(LanguageError):
    """A construction exceeded its state-count cap.

    ``construction`` names the construction that blew up so that callers can
    report it.
    """

    def __init__(self, construction, cap, message=None):
        self.construction = construction
        self.cap = cap
        super().__init__(message or f"{construction}: more than {cap} states")


class IndeterminateError(LanguageError):
    """A bounded simulation ran out of steps before reaching a verdict."""
