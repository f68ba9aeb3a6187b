"""Symbols, alphabets and words, plus the word-level operations.

A symbol is a base letter with a ``marked`` flag; the marking involution
flips that flag.  Words are immutable tuples of symbols and render as
whitespace-free token strings where a marked letter carries a leading
tilde (``a~b`` is the word a followed by marked b).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .errors import ParseError, PreconditionError, SizeLimitError

EMPTY_TOKEN = "_"
MARK = "~"


@dataclass(frozen=True, order=True, slots=True)
class Symbol:
    base: str
    marked: bool = False

    def __post_init__(self):
        if len(self.base) != 1 or self.base in (MARK, EMPTY_TOKEN) or self.base.isspace():
            raise PreconditionError(f"invalid base letter {self.base!r}")

    def flip(self) -> Symbol:
        """The marking involution: a <-> ~a."""
        return Symbol(self.base, not self.marked)

    def mark(self) -> Symbol:
        return Symbol(self.base, True)

    def unmark(self) -> Symbol:
        return Symbol(self.base, False)

    def __str__(self):
        return MARK + self.base if self.marked else self.base

    def __repr__(self):
        return f"Symbol({str(self)!r})"

    @classmethod
    def parse(cls, token: str) -> Symbol:
        if len(token) == 2 and token[0] == MARK:
            return cls(token[1], True)
        if len(token) == 1:
            return cls(token)
        raise ParseError(f"not a symbol token: {token!r}")


class Word(tuple):
    """An immutable sequence of :class:`Symbol`.

    Slicing, concatenation and repetition return words again.
    """

    __slots__ = ()

    def __new__(cls, symbols: Iterable[Symbol] = ()):
        return super().__new__(cls, symbols)

    @classmethod
    def parse(cls, text: str) -> Word:
        text = text.strip()
        if text in (EMPTY_TOKEN, "ε", ""):
            return EMPTY
        out = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch == MARK:
                if i + 1 >= len(text):
                    raise ParseError(f"dangling marker in {text!r}")
                out.append(Symbol(text[i + 1], True))
                i += 2
            elif ch.isspace() or ch == EMPTY_TOKEN:
                raise ParseError(f"unexpected {ch!r} in word {text!r}")
            else:
                out.append(Symbol(ch))
                i += 1
        return cls(out)

    def __getitem__(self, item):
        result = tuple.__getitem__(self, item)
        return Word(result) if isinstance(item, slice) else result

    def __add__(self, other):
        return Word(tuple.__add__(self, tuple(other)))

    def __radd__(self, other):
        return Word(tuple(other) + tuple(self))

    def __mul__(self, n):
        return Word(tuple.__mul__(self, n))

    __rmul__ = __mul__

    def reversed(self) -> Word:
        return Word(self[::-1])

    def markall(self) -> Word:
        """The marked copy: every symbol marked (already-marked stay marked)."""
        return Word(s.mark() for s in self)

    def unmarkall(self) -> Word:
        return Word(s.unmark() for s in self)

    def flip(self) -> Word:
        return Word(s.flip() for s in self)

    def is_palindrome(self) -> bool:
        return tuple(self) == tuple(self[::-1])

    def __str__(self):
        return "".join(map(str, self)) if self else EMPTY_TOKEN

    def __repr__(self):
        return f"Word({str(self)!r})"


EMPTY = Word()


def word(text: str) -> Word:
    """Shorthand for :meth:`Word.parse`."""
    return Word.parse(text)


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of symbols.  The order fixes lexicographic tie-breaking."""

    symbols: tuple

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if len(set(symbols)) != len(symbols):
            raise PreconditionError("duplicate symbols in alphabet")
        for s in symbols:
            if not isinstance(s, Symbol):
                raise PreconditionError(f"not a symbol: {s!r}")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    @classmethod
    def of(cls, tokens) -> Alphabet:
        """Build from a whitespace separated token string or an iterable of tokens/symbols."""
        if isinstance(tokens, str):
            tokens = tokens.split()
        return cls(tuple(t if isinstance(t, Symbol) else Symbol.parse(t) for t in tokens))

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, s):
        return s in self._index

    def index(self, s: Symbol) -> int:
        return self._index[s]

    def sort_key(self, w: Iterable[Symbol]) -> tuple:
        """Key ordering words by length, then lexicographically by alphabet order."""
        idx = self._index
        key = tuple(idx[s] for s in w)
        return (len(key), key)

    def is_closed_under_marking(self) -> bool:
        return all(s.flip() in self._index for s in self.symbols)

    def marking_closure(self) -> Alphabet:
        extra = [s.flip() for s in self.symbols if s.flip() not in self._index]
        return Alphabet(self.symbols + tuple(extra)) if extra else self

    def unmarked(self) -> Alphabet:
        return Alphabet(tuple(s for s in self.symbols if not s.marked))

    def marked(self) -> Alphabet:
        return Alphabet(tuple(s for s in self.symbols if s.marked))

    def union(self, other: Iterable[Symbol]) -> Alphabet:
        extra = [s for s in other if s not in self._index]
        return Alphabet(self.symbols + tuple(dict.fromkeys(extra))) if extra else self

    def __str__(self):
        return " ".join(map(str, self.symbols))


def power(w: Word, n: int) -> Word:
    if n < 0:
        raise PreconditionError("negative exponent")
    return Word(w) * n


def _failure(pattern: tuple) -> list:
    fail = [0] * len(pattern)
    k = 0
    for i in range(1, len(pattern)):
        while k and pattern[i] != pattern[k]:
            k = fail[k - 1]
        if pattern[i] == pattern[k]:
            k += 1
        fail[i] = k
    return fail


def find(text: tuple, pattern: tuple, start: int = 0) -> int:
    """First index >= start where pattern occurs in text, or -1 (KMP)."""
    if not pattern:
        return start if start <= len(text) else -1
    fail = _failure(pattern)
    k = 0
    for i in range(start, len(text)):
        while k and text[i] != pattern[k]:
            k = fail[k - 1]
        if text[i] == pattern[k]:
            k += 1
        if k == len(pattern):
            return i - k + 1
    return -1


def is_primitive(w: Word) -> bool:
    """True iff w is not u^n for any n >= 2.

    w is primitive exactly when its only occurrences inside ww are the two
    trivial ones, at offsets 0 and |w|.
    """
    if not w:
        raise PreconditionError("primitivity is undefined for the empty word")
    return find(tuple(w) + tuple(w), tuple(w), 1) == len(w)


def shuffle_set(u: Word, v: Word, limit: int = 24) -> frozenset:
    """All interleavings of u and v."""
    if len(u) + len(v) > limit:
        raise SizeLimitError(f"|u|+|v| = {len(u) + len(v)} exceeds shuffle limit {limit}")
    u, v = tuple(u), tuple(v)

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(u):
            return frozenset({v[j:]})
        if j == len(v):
            return frozenset({u[i:]})
        return frozenset((u[i],) + rest for rest in go(i + 1, j)) | frozenset(
            (v[j],) + rest for rest in go(i, j + 1)
        )

    return frozenset(Word(t) for t in go(0, 0))


def shuffle_membership(v: Word, u1: Word, u2: Word) -> tuple:
    """Decide v in u1 ⧢ u2.

    Returns ``(True, positions)`` where ``positions`` is the frozenset of
    0-based positions of v taken by u1, or ``(False, None)``.  The DP runs
    over index pairs (i, j) meaning u1[i:] and u2[j:] remain to cover
    v[i+j:]; the certificate prefers u1 whenever both choices stay feasible.
    """
    n1, n2 = len(u1), len(u2)
    if len(v) != n1 + n2:
        return False, None
    # ok[i][j]: suffix v[i+j:] is a shuffle of u1[i:] and u2[j:]
    ok = [[False] * (n2 + 1) for _ in range(n1 + 1)]
    ok[n1][n2] = True
    for i in range(n1, -1, -1):
        for j in range(n2, -1, -1):
            if i == n1 and j == n2:
                continue
            c = v[i + j]
            ok[i][j] = (i < n1 and u1[i] == c and ok[i + 1][j]) or (
                j < n2 and u2[j] == c and ok[i][j + 1]
            )
    if not ok[0][0]:
        return False, None
    i = j = 0
    taken = []
    while i + j < len(v):
        if i < n1 and u1[i] == v[i + j] and ok[i + 1][j]:
            taken.append(i + j)
            i += 1
        else:
            j += 1
    return True, frozenset(taken)


def _self_shuffle_plain(v: tuple) -> Optional[tuple]:
    # copy 1 is always at least as far along as copy 2, so the letters copy 2
    # still owes form a queue ("pending") of copy-1 letters.
    half = len(v) // 2
    dead = set()

    def go(pos, first, pending):
        if pos == len(v):
            return first if not pending else None
        state = (pos, pending)
        if state in dead:
            return None
        c = v[pos]
        if pending and pending[0] == c:
            found = go(pos + 1, first, pending[1:])
            if found is not None:
                return found
        if len(first) < half:
            found = go(pos + 1, first + (c,), pending + (c,))
            if found is not None:
                return found
        dead.add(state)
        return None

    return go(0, (), ())


def _self_shuffle_reversed(v: tuple) -> Optional[tuple]:
    # Assign the first half of v's positions by search: copy 1 yields a prefix
    # of w, copy 2 a prefix of w^r.  Once half the positions are assigned, w
    # is fully determined and the remainder is a plain membership test.
    m = len(v) // 2
    seen = set()

    def candidate(head, tail_rev):
        # head = w[:len(head)], tail_rev = reverse of w[m-len(tail_rev):]
        suffix = tail_rev[::-1]
        overlap = len(head) + len(suffix) - m
        if overlap < 0:
            return None
        if overlap and head[m - len(suffix):] != suffix[:overlap]:
            return None
        return head + suffix[overlap:]

    def go(pos, head, tail_rev):
        if len(head) > m or len(tail_rev) > m:
            return None
        if pos == m:
            w = candidate(head, tail_rev)
            if w is None:
                return None
            rest_ok, _ = shuffle_membership(
                Word(v[pos:]), Word(w[len(head):]), Word(w[::-1][len(tail_rev):])
            )
            return w if rest_ok else None
        state = (pos, head, tail_rev)
        if state in seen:
            return None
        seen.add(state)
        c = v[pos]
        return go(pos + 1, head + (c,), tail_rev) or go(pos + 1, head, tail_rev + (c,))

    return go(0, (), ())


def self_shuffle_check(v: Word, mode: str = "plain", allow_empty: bool = False) -> Optional[Word]:
    """Find w with v in w ⧢ w (plain), w ⧢ w^r (reversed) or w ⧢ w̄ (marked).

    Returns the witness w or None.  Marked mode is linear: the unmarked
    subsequence of v must be w and the marked subsequence must be w̄.
    """
    if mode not in ("plain", "reversed", "marked"):
        raise PreconditionError(f"unknown self-shuffle mode {mode!r}")
    if len(v) % 2:
        return None
    if not v:
        return EMPTY if allow_empty else None
    if mode == "marked":
        first = Word(s for s in v if not s.marked)
        second = Word(s for s in v if s.marked)
        if len(first) == len(second) and second == first.markall():
            return first
        return None
    # each letter must occur an even number of times
    counts = {}
    for s in v:
        counts[s] = counts.get(s, 0) + 1
    if any(c % 2 for c in counts.values()):
        return None
    found = _self_shuffle_plain(tuple(v)) if mode == "plain" else _self_shuffle_reversed(tuple(v))
    return None if found is None else Word(found)
