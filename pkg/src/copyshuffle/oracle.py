"""Brute-force oracles and bounded scans.

Nothing here is clever on purpose.  Scans walk members of a language in
(length, lexicographic) order and test each one against a fixed form, so the
answers are independent of the exact procedures they are compared with.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product as cartesian
from typing import Callable, Iterable, Optional, Union

from . import automata as fa
from . import grammars as cfg
from .automata import Gnfa, Nfa
from .decisions import TransitionRelation
from .errors import PreconditionError, SizeLimitError
from .grammars import Cfg
from .words import EMPTY, Alphabet, Word, self_shuffle_check, shuffle_set

Language = Union[Nfa, Gnfa, Cfg]


@dataclass(frozen=True)
class SearchBudget:
    max_word_len: int = 10
    max_candidates: int = 200_000

    def __post_init__(self):
        if self.max_word_len < 0 or self.max_candidates < 0:
            raise ValueError("budget bounds must be nonnegative")


class Status(str, Enum):
    YES = "yes"
    NO_UP_TO_BOUND = "no_up_to_bound"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ScanResult:
    status: Status
    form: str
    budget: SearchBudget
    witness: Optional[Word] = None
    member: Optional[Word] = None
    examined: int = 0

    @property
    def found(self) -> bool:
        return self.status is Status.YES

    def lines(self) -> list:
        out = [f"form: {self.form}", f"result: {self.status.value}"]
        if self.witness is not None:
            out.append(f"witness: {self.witness}")
        if self.member is not None:
            out.append(f"member: {self.member}")
        out.append(f"examined: {self.examined}")
        out.append(f"max-len: {self.budget.max_word_len}")
        out.append(f"max-candidates: {self.budget.max_candidates}")
        return out

    def as_dict(self) -> dict:
        return {
            "form": self.form,
            "result": self.status.value,
            "witness": None if self.witness is None else str(self.witness),
            "member": None if self.member is None else str(self.member),
            "examined": self.examined,
            "budget": {"max_len": self.budget.max_word_len,
                       "max_candidates": self.budget.max_candidates},
        }


def alphabet_of(L: Language) -> Alphabet:
    return L.terminals if isinstance(L, Cfg) else L.alphabet


def iter_members(L: Language, maxlen: int) -> Iterable[Word]:
    """Members of length <= maxlen in (length, lexicographic) order."""
    if isinstance(L, Gnfa):
        L = L.expand()
    if isinstance(L, Nfa):
        return fa.members_up_to(L, maxlen)
    if isinstance(L, Cfg):
        words = cfg.enumerate_words(L, maxlen, cap=max(maxlen, cfg.DEFAULT_ENUMERATION_CAP))
        return iter(sorted(words, key=L.terminals.sort_key))
    raise TypeError(f"not a language handle: {type(L).__name__}")


def enumerate_members(L: Language, maxlen: int, budget: Optional[SearchBudget] = None) -> frozenset:
    if budget is not None and maxlen > budget.max_word_len:
        raise SizeLimitError(f"length {maxlen} exceeds the budget of {budget.max_word_len}")
    return frozenset(iter_members(L, maxlen))


# form predicates: member -> witness or None

def _as_power(m: Word, n: int) -> Optional[Word]:
    if len(m) % n:
        return None
    u = m[: len(m) // n]
    return u if u * n == m else None


def _as_marked_copy(m: Word) -> Optional[Word]:
    if len(m) % 2:
        return None
    u = m[: len(m) // 2]
    if any(s.marked for s in u):
        return None
    return u if u + u.markall() == m else None


def _as_reverse_copy(m: Word) -> Optional[Word]:
    if len(m) % 2:
        return None
    u = m[: len(m) // 2]
    return u if u + u.reversed() == m else None


def mirror_factors(m: Word, k: int) -> Optional[tuple]:
    """Some (w1, ..., wk), each possibly empty, with m = w1 w1^r ... wk wk^r."""
    n = len(m)
    even_pal = [[False] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        for j in range(i, n + 1, 2):
            block = m[i:j]
            even_pal[i][j] = block == block.reversed()
    # reach[c][j]: prefix m[:j] splits into c blocks
    reach = [[None] * (n + 1) for _ in range(k + 1)]
    reach[0][0] = ()
    for c in range(1, k + 1):
        for j in range(n + 1):
            for i in range(j + 1):
                if reach[c - 1][i] is not None and even_pal[i][j]:
                    reach[c][j] = reach[c - 1][i] + (m[i:(i + j) // 2],)
                    break
    return reach[k][n]


def form_predicate(form: str, n: int = 2, k: int = 1) -> Callable[[Word], Optional[Word]]:
    """Predicate for a named form; returns the witness w of a matching member."""
    if form == "square":
        return lambda m: _as_power(m, 2)
    if form == "power":
        if n < 1:
            raise PreconditionError("power needs n >= 1")
        return lambda m: _as_power(m, n)
    if form == "marked_copy":
        return _as_marked_copy
    if form == "reverse_copy":
        return _as_reverse_copy
    if form == "mirror_product":
        if k < 1:
            raise PreconditionError("mirror_product needs k >= 1")
        return lambda m: m if mirror_factors(m, k) is not None else None
    if form == "mirror_star":
        return lambda m: m if any(mirror_factors(m, j) is not None for j in range(1, max(1, len(m) // 2) + 1)) else None
    if form == "palindrome":
        return lambda m: m if m == m.reversed() else None
    if form in ("self_shuffle", "reverse_shuffle", "marked_shuffle"):
        mode = {"self_shuffle": "plain", "reverse_shuffle": "reversed", "marked_shuffle": "marked"}[form]
        return lambda m: self_shuffle_check(m, mode, allow_empty=True)
    raise PreconditionError(f"unknown form {form!r}")


FORMS = ("square", "power", "marked_copy", "reverse_copy", "mirror_product", "mirror_star",
         "self_shuffle", "reverse_shuffle", "marked_shuffle", "palindrome")


CANDIDATE_FORMS = ("square", "power", "marked_copy", "reverse_copy", "palindrome")


def contains(L: Language, w: Word) -> bool:
    if isinstance(L, Cfg):
        return cfg.membership(L, w)
    if isinstance(L, Gnfa):
        return L.accepts(w)
    return fa.accepts(L, w)


def _candidates(L: Language, form: str, n: int, maxlen: int):
    """(witness, member) pairs of the form, members in (length, lexicographic) order."""
    alphabet = alphabet_of(L)
    if form == "palindrome":
        for length in range(maxlen + 1):
            half = length // 2
            for head in fa.words_up_to(alphabet, (length + 1) // 2):
                if len(head) != (length + 1) // 2:
                    continue
                m = head + head[:half].reversed()
                yield m, m
        return
    exponent = {"square": 2, "power": n}.get(form, 2)
    letters = alphabet.unmarked() if form == "marked_copy" else alphabet
    for u in fa.words_up_to(letters, maxlen // exponent):
        if form == "marked_copy":
            yield u, u + u.markall()
        elif form == "reverse_copy":
            yield u, u + u.reversed()
        else:
            yield u, u * exponent


def scan_for_form(L: Language, form: str, budget: SearchBudget = SearchBudget(), *,
                  n: int = 2, k: int = 1, allow_empty: bool = False,
                  strategy: str = "members") -> ScanResult:
    """Look for a member of L of the given form within the budget.

    With ``strategy="members"`` the members of L are visited shortest first
    and each is tested against the form.  With ``strategy="candidates"``
    (copy-shaped forms only) the words of the form are generated shortest
    first and each is tested for membership in L; this is the cheaper
    direction when L has far more members than the form has instances.
    Either way the first hit carries the least member.  The empty witness is
    skipped unless ``allow_empty``.
    """
    form = form.replace("-", "_")
    test = form_predicate(form, n, k)
    label = {"power": f"power({n})", "mirror_product": f"mirror_product({k})"}.get(form, form)
    if strategy == "members":
        pairs = ((test(m), m) for m in iter_members(L, budget.max_word_len))
    elif strategy == "candidates":
        if form not in CANDIDATE_FORMS:
            raise PreconditionError(f"form {form!r} has no candidate generator")
        pairs = ((w, m if contains(L, m) else None)
                 for w, m in _candidates(L, form, n, budget.max_word_len))
    else:
        raise PreconditionError(f"unknown strategy {strategy!r}")
    examined = 0
    for w, m in pairs:
        if examined >= budget.max_candidates:
            return ScanResult(Status.UNKNOWN, label, budget, examined=examined)
        examined += 1
        if w is None or m is None:
            continue
        if not allow_empty and len(w) == 0:
            continue
        return ScanResult(Status.YES, label, budget, w, m, examined)
    return ScanResult(Status.NO_UP_TO_BOUND, label, budget, examined=examined)


# brute-force root and power oracles

def power_witnesses(R: Nfa, n: int, maxlen: int, P: Optional[Nfa] = None,
                    allow_empty: bool = False) -> Optional[Word]:
    """Least w, |w| <= maxlen, with w in P and w^n in R, by direct enumeration."""
    for w in fa.words_up_to(R.alphabet, maxlen):
        if not w and not allow_empty:
            continue
        if P is not None and not fa.accepts(P, w):
            continue
        if fa.accepts(R, w * n):
            return w
    return None


def relation_power_search(R: Nfa, n: int, maxlen: int, allow_empty: bool = False) -> Optional[Word]:
    """Least w, |w| <= maxlen, with w^n in R.

    Same question as :func:`power_witnesses`, but words that induce the same
    state relation on R are interchangeable for it, so a breadth-first walk
    keeps one representative per relation.  Representatives are discovered
    in (length, lexicographic) order, hence the answer is the least word.
    """
    R, accepts_rel = _relation_setup(R)
    letters = [(a, TransitionRelation.of_symbol(R, a)) for a in R.alphabet]

    def hits(rel: TransitionRelation) -> bool:
        acc = rel
        for _ in range(n - 1):
            acc = acc @ rel
        return accepts_rel(acc)

    start = TransitionRelation.identity(len(R.states))
    if allow_empty and hits(start):
        return EMPTY
    # ε seeds the walk but must not hide a nonempty word with the same relation
    seen = set()
    layer = [(EMPTY, start)]
    for _ in range(maxlen):
        nxt = []
        for w, rel in layer:
            for a, m in letters:
                r2 = rel @ m
                if r2 in seen:
                    continue
                seen.add(r2)
                wa = w + Word((a,))
                if hits(r2):
                    return wa
                nxt.append((wa, r2))
        if not nxt:
            break
        layer = nxt
    return None


def _relation_setup(R: Nfa):
    R = fa.remove_epsilons(R)
    index = {q: i for i, q in enumerate(R.states)}
    init = sum(1 << index[q] for q in R.initial)
    fin = sum(1 << index[q] for q in R.finals)

    def accepts_rel(rel: TransitionRelation) -> bool:
        reach = 0
        for i, row in enumerate(rel.rows):
            if init >> i & 1:
                reach |= row
        return bool(reach & fin)

    return R, accepts_rel


def _pair_search(R: Nfa, letters, partner, prepend: bool, allow_empty: bool) -> Optional[Word]:
    """Least w over ``letters`` with w·t(w) in R, where t is letterwise ``partner``
    (reversed when ``prepend``).  Breadth-first over pairs (rel(w), rel(t(w)));
    the walk ends when no new pair appears, so a None answer is definitive.
    """
    R, accepts_rel = _relation_setup(R)
    rel = {a: TransitionRelation.of_symbol(R, a) for a in R.alphabet}
    empty_rel = TransitionRelation.identity(len(R.states))
    zero = TransitionRelation([0] * len(R.states))

    def of(a):
        return rel.get(a, zero)

    start = (empty_rel, empty_rel)
    if allow_empty and accepts_rel(empty_rel):
        return EMPTY
    # ε seeds the walk but must not hide a nonempty word with the same relation
    seen = set()
    layer = [(EMPTY, start)]
    while layer:
        nxt = []
        for w, (left, right) in layer:
            for a in letters:
                b = partner(a)
                pair = (left @ of(a), of(b) @ right if prepend else right @ of(b))
                if pair in seen:
                    continue
                seen.add(pair)
                wa = w + Word((a,))
                if accepts_rel(pair[0] @ pair[1]):
                    return wa
                nxt.append((wa, pair))
        layer = nxt
    return None


def marked_copy_search(R: Nfa, allow_empty: bool = False) -> Optional[Word]:
    letters = tuple(R.alphabet.marking_closure().unmarked())
    return _pair_search(R, letters, lambda a: a.mark(), False, allow_empty)


def reverse_copy_search(R: Nfa, allow_empty: bool = False) -> Optional[Word]:
    return _pair_search(R, tuple(R.alphabet), lambda a: a, True, allow_empty)


def root_set(R: Nfa, n: int, maxlen: int) -> frozenset:
    return frozenset(w for w in fa.words_up_to(R.alphabet, maxlen) if fa.accepts(R, w * n))


def star_root_set(R: Nfa, maxlen: int) -> frozenset:
    """{w : |w| <= maxlen, w^e in R for some e >= 2}.

    The exponent bound is index + period of the word's relation on R, past
    which the powers repeat.
    """
    R = fa.remove_epsilons(R)
    out = set()
    for w in fa.words_up_to(R.alphabet, maxlen):
        rel = TransitionRelation.of_word(R, w)
        index, period, _ = rel.powers()
        top = max(2, index + period)
        if any(fa.accepts(R, w * e) for e in range(2, top + 1)):
            out.add(w)
    return frozenset(out)


def has_marked_copy_brute(R: Nfa, maxlen: int, allow_empty: bool = False) -> Optional[Word]:
    base = R.alphabet.marking_closure().unmarked()
    for w in fa.words_up_to(base, maxlen):
        if (w or allow_empty) and fa.accepts(R, w + w.markall()):
            return w
    return None


def has_reverse_copy_brute(R: Nfa, maxlen: int, allow_empty: bool = False) -> Optional[Word]:
    for w in fa.words_up_to(R.alphabet, maxlen):
        if (w or allow_empty) and fa.accepts(R, w + w.reversed()):
            return w
    return None


# bounded shuffle of languages

def shuffle_of_sets(left: Iterable[Word], right: Iterable[Word], limit: int = 24) -> frozenset:
    out = set()
    for u, v in cartesian(tuple(left), tuple(right)):
        out |= shuffle_set(u, v, limit)
    return frozenset(out)


def mirror_shuffle_set(P: Iterable[Word], limit: int = 24) -> frozenset:
    """Finite part of M_P: the union of w ⧢ w^r over the given words w."""
    out = set()
    for w in P:
        out |= shuffle_set(w, w.reversed(), limit)
    return frozenset(out)
