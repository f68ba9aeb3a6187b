"""Decision procedures and reductions around copies, shuffles and mirrors of words."""

from .errors import (
    CapacityError,
    ForeignSymbolError,
    IndeterminateError,
    LanguageError,
    ParseError,
    PreconditionError,
    SizeLimitError,
)
from .words import EMPTY, Alphabet, Symbol, Word, word

__all__ = [
    "Alphabet",
    "CapacityError",
    "EMPTY",
    "ForeignSymbolError",
    "IndeterminateError",
    "LanguageError",
    "ParseError",
    "PreconditionError",
    "SizeLimitError",
    "Symbol",
    "Word",
    "word",
]
