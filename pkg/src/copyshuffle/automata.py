"""Nondeterministic finite automata and the regular-language algebra.

One automaton type, :class:`Nfa`, with optional epsilon moves.  A DFA is just
an Nfa that satisfies :meth:`Nfa.is_deterministic`.  Every operation is a pure
function returning a new automaton.  State ids may be any hashable value;
constructions nest them in tuples and :func:`normalized` renames them to
``q0, q1, ...`` for output.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Optional

from .errors import CapacityError, ForeignSymbolError, ParseError, PreconditionError
from .words import EMPTY, Alphabet, Symbol, Word

DEFAULT_SUBSET_CAP = 2**20
DEFAULT_PRODUCT_CAP = 2**20


def _freeze(items):
    return items if isinstance(items, frozenset) else frozenset(items)


@dataclass(frozen=True)
class Nfa:
    alphabet: Alphabet
    states: tuple
    initial: frozenset
    finals: frozenset
    transitions: frozenset
    epsilons: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(dict.fromkeys(self.states)))
        for name in ("initial", "finals", "transitions", "epsilons"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))
        declared = set(self.states)
        for q in self.initial | self.finals:
            if q not in declared:
                raise PreconditionError(f"undeclared state {q!r}")
        for p, a, q in self.transitions:
            if p not in declared or q not in declared:
                raise PreconditionError(f"transition {p!r} -{a}-> {q!r} uses an undeclared state")
            if a not in self.alphabet:
                raise PreconditionError(f"transition symbol {a} not in alphabet")
        for p, q in self.epsilons:
            if p not in declared or q not in declared:
                raise PreconditionError(f"epsilon move {p!r} -> {q!r} uses an undeclared state")

    @classmethod
    def build(cls, alphabet, transitions=(), initial=(), finals=(), states=(), epsilons=()):
        """Convenience constructor; states are collected from every argument in order."""
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet.of(alphabet)
        transitions = [
            (p, a if isinstance(a, Symbol) else Symbol.parse(a), q) for p, a, q in transitions
        ]
        order = list(states)
        order += list(initial)
        for p, _, q in transitions:
            order += [p, q]
        for p, q in epsilons:
            order += [p, q]
        order += list(finals)
        return cls(alphabet, tuple(order), frozenset(initial), frozenset(finals),
                   frozenset(transitions), frozenset(epsilons))

    # adjacency, computed once per automaton
    @cached_property
    def _delta(self) -> dict:
        delta = {}
        for p, a, q in self.transitions:
            delta.setdefault((p, a), set()).add(q)
        return delta

    @cached_property
    def _succ(self) -> dict:
        """state -> list of (symbol, target) sorted by alphabet order then state order."""
        order = {q: i for i, q in enumerate(self.states)}
        succ = {q: [] for q in self.states}
        for p, a, q in self.transitions:
            succ[p].append((a, q))
        for p in succ:
            succ[p].sort(key=lambda t: (self.alphabet.index(t[0]), order[t[1]]))
        return succ

    @cached_property
    def _eps_succ(self) -> dict:
        succ = {}
        for p, q in self.epsilons:
            succ.setdefault(p, set()).add(q)
        return succ

    def closure(self, states: Iterable) -> frozenset:
        seen = set(states)
        stack = list(seen)
        eps = self._eps_succ
        while stack:
            p = stack.pop()
            for q in eps.get(p, ()):
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return frozenset(seen)

    def step(self, states: Iterable, a: Symbol) -> frozenset:
        delta = self._delta
        out = set()
        for p in states:
            out |= delta.get((p, a), set())
        return self.closure(out)

    def is_deterministic(self) -> bool:
        if self.epsilons or len(self.initial) > 1:
            return False
        return all(len(v) == 1 for v in self._delta.values())

    def accepts(self, w: Iterable[Symbol]) -> bool:
        return accepts(self, w)

    def __str__(self):
        return format_automaton(self)


@dataclass(frozen=True)
class Gnfa:
    """Automaton whose transitions carry whole words rather than single symbols."""

    alphabet: Alphabet
    states: tuple
    initial: frozenset
    finals: frozenset
    transitions: frozenset  # (p, Word, q)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(dict.fromkeys(self.states)))
        for name in ("initial", "finals", "transitions"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))
        declared = set(self.states)
        for p, label, q in self.transitions:
            if p not in declared or q not in declared:
                raise PreconditionError(f"transition {p!r} -{label}-> {q!r} uses an undeclared state")
            for a in label:
                if a not in self.alphabet:
                    raise PreconditionError(f"label symbol {a} not in alphabet")
        if not (self.initial | self.finals) <= declared:
            raise PreconditionError("initial/final states must be declared")

    def expand(self) -> Nfa:
        """Equivalent Nfa: each word label is split through fresh chain states."""
        states = list(self.states)
        transitions = set()
        epsilons = set()
        for p, label, q in sorted(self.transitions, key=repr):
            if not label:
                epsilons.add((p, q))
                continue
            prev = p
            for i, a in enumerate(label[:-1]):
                mid = ("chain", p, Word(label), q, i)
                states.append(mid)
                transitions.add((prev, a, mid))
                prev = mid
            transitions.add((prev, label[-1], q))
        return Nfa(self.alphabet, tuple(states), self.initial, self.finals,
                   frozenset(transitions), frozenset(epsilons))

    def accepts(self, w: Iterable[Symbol]) -> bool:
        """Direct path search over word labels (independent of :meth:`expand`)."""
        w = tuple(w)
        out = {}
        for p, label, q in self.transitions:
            out.setdefault(p, []).append((tuple(label), q))
        seen = set()
        stack = [(q, 0) for q in self.initial]
        while stack:
            q, i = stack.pop()
            if (q, i) in seen:
                continue
            seen.add((q, i))
            if i == len(w) and q in self.finals:
                return True
            for label, r in out.get(q, ()):
                if w[i:i + len(label)] == label:
                    stack.append((r, i + len(label)))
        return False


# ---------------------------------------------------------------------------
# small automata


def empty_automaton(alphabet: Alphabet) -> Nfa:
    return Nfa(alphabet, ("q0",), frozenset({"q0"}), frozenset(), frozenset())


def universal(alphabet: Alphabet, symbols: Optional[Iterable[Symbol]] = None) -> Nfa:
    """Σ'* for the given subset Σ' of the alphabet (default: all of it)."""
    symbols = alphabet if symbols is None else symbols
    return Nfa(alphabet, ("q0",), frozenset({"q0"}), frozenset({"q0"}),
               frozenset(("q0", a, "q0") for a in symbols))


def nonempty_words(alphabet: Alphabet, symbols: Optional[Iterable[Symbol]] = None) -> Nfa:
    """Σ'+ for the given subset Σ' of the alphabet."""
    symbols = list(alphabet if symbols is None else symbols)
    trans = [("q0", a, "q1") for a in symbols] + [("q1", a, "q1") for a in symbols]
    return Nfa(alphabet, ("q0", "q1"), frozenset({"q0"}), frozenset({"q1"}), frozenset(trans))


def finite_language(alphabet: Alphabet, words: Iterable[Word]) -> Nfa:
    """A trie automaton accepting exactly the given words."""
    states = [EMPTY]
    trans = set()
    finals = set()
    for w in words:
        w = Word(w)
        for i in range(len(w)):
            src, dst = w[:i], w[:i + 1]
            if dst not in states:
                states.append(dst)
            trans.add((src, w[i], dst))
        finals.add(w)
    return Nfa(alphabet, tuple(states), frozenset({EMPTY}), frozenset(finals), frozenset(trans))


def marked_shape(alphabet: Alphabet) -> Nfa:
    """DFA for Σ*Σ̄*: unmarked symbols first, then marked ones."""
    trans = set()
    for a in alphabet:
        if a.marked:
            trans |= {("u", a, "m"), ("m", a, "m")}
        else:
            trans.add(("u", a, "u"))
    return Nfa(alphabet, ("u", "m"), frozenset({"u"}), frozenset({"u", "m"}), frozenset(trans))


# ---------------------------------------------------------------------------
# queries


def accepts(A: Nfa, w: Iterable[Symbol]) -> bool:
    current = A.closure(A.initial)
    for a in w:
        if a not in A.alphabet:
            raise ForeignSymbolError(f"symbol {a} is not in the alphabet {A.alphabet}")
        current = A.step(current, a)
        if not current:
            return False
    return bool(current & A.finals)


def remove_epsilons(A: Nfa) -> Nfa:
    if not A.epsilons:
        return A
    trans = set()
    finals = set()
    for p in A.states:
        reach = A.closure({p})
        if reach & A.finals:
            finals.add(p)
        for q in reach:
            for a, r in A._succ[q]:
                for r2 in A.closure({r}):
                    trans.add((p, a, r2))
    return Nfa(A.alphabet, A.states, A.initial, frozenset(finals), frozenset(trans))


def reachable(A: Nfa) -> set:
    A = remove_epsilons(A)
    seen = set(A.initial)
    stack = list(seen)
    while stack:
        p = stack.pop()
        for _, q in A._succ[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def trim(A: Nfa) -> Nfa:
    """Keep only states that are reachable and co-reachable (epsilon-free result)."""
    A = remove_epsilons(A)
    fwd = reachable(A)
    pred = {}
    for p, _, q in A.transitions:
        pred.setdefault(q, set()).add(p)
    back = set(A.finals)
    stack = list(back)
    while stack:
        q = stack.pop()
        for p in pred.get(q, ()):
            if p not in back:
                back.add(p)
                stack.append(p)
    keep = fwd & back
    if not keep:
        return empty_automaton(A.alphabet)
    states = tuple(q for q in A.states if q in keep)
    return Nfa(A.alphabet, states, A.initial & keep, A.finals & keep,
               frozenset(t for t in A.transitions if t[0] in keep and t[2] in keep))


def is_empty(A: Nfa) -> bool:
    return shortest_member(A) is None


def shortest_member(A: Nfa) -> Optional[Word]:
    """A shortest accepted word, ties broken lexicographically by alphabet order.

    Breadth-first search in symbol order: the queue stays sorted by
    (length, lexicographic) label, so the first final state discovered
    carries the answer.  Its length is below the number of states.
    """
    A = remove_epsilons(A)
    order = {q: i for i, q in enumerate(A.states)}
    parent = {}
    queue = deque()
    for q in sorted(A.initial, key=order.__getitem__):
        parent[q] = None
        if q in A.finals:
            return EMPTY
        queue.append(q)
    while queue:
        p = queue.popleft()
        for a, q in A._succ[p]:
            if q in parent:
                continue
            parent[q] = (p, a)
            if q in A.finals:
                out = []
                node = q
                while parent[node] is not None:
                    node, sym = parent[node]
                    out.append(sym)
                return Word(reversed(out))
            queue.append(q)
    return None


def words_up_to(alphabet: Alphabet, maxlen: int, symbols=None) -> Iterator[Word]:
    """All words of length <= maxlen in (length, lexicographic) order."""
    symbols = list(alphabet if symbols is None else symbols)
    level = [EMPTY]
    for n in range(maxlen + 1):
        yield from level
        if n < maxlen:
            level = [w + (a,) for w in level for a in symbols]


def members_up_to(A: Nfa, maxlen: int) -> Iterator[Word]:
    """Accepted words of length <= maxlen, lazily, in (length, lex) order.

    Prefixes whose state set cannot reach a final state are pruned.
    """
    A = trim(A)
    live = set(A.states)
    level = [(EMPTY, A.initial)]
    for n in range(maxlen + 1):
        nxt = []
        for w, current in level:
            if current & A.finals:
                yield w
            if n < maxlen:
                for a in A.alphabet:
                    step = A.step(current, a) & live
                    if step:
                        nxt.append((w + (a,), step))
        level = nxt
        if not level:
            return


# ---------------------------------------------------------------------------
# constructions


def product(A: Nfa, B: Nfa, mode: str = "intersect", cap: int = DEFAULT_PRODUCT_CAP) -> Nfa:
    """Synchronous product; reachable part only.

    ``intersect`` accepts L(A) ∩ L(B).  ``union`` accepts L(A) ∪ L(B): each
    side may drop into an absorbing dead component (``None``) so that a run of
    one automaton never needs a partner run of the other.
    """
    if mode not in ("intersect", "union"):
        raise PreconditionError(f"unknown product mode {mode!r}")
    A, B = remove_epsilons(A), remove_epsilons(B)
    alphabet = A.alphabet.union(B.alphabet)
    union = mode == "union"
    a_delta, b_delta = A._delta, B._delta

    def successors(delta, p, a):
        if p is None:
            return {None}
        nxt = delta.get((p, a), set())
        return nxt | {None} if union else nxt

    if union:
        starts = [(p, q) for p in (list(A.initial) + [None]) for q in (list(B.initial) + [None])
                  if (p, q) != (None, None)]
    else:
        starts = [(p, q) for p in A.initial for q in B.initial]
    states = list(dict.fromkeys(starts))
    seen = set(states)
    queue = deque(states)
    trans = set()
    while queue:
        pair = queue.popleft()
        p, q = pair
        for a in alphabet:
            for p2 in successors(a_delta, p, a):
                for q2 in successors(b_delta, q, a):
                    if union and p2 is None and q2 is None:
                        continue
                    nxt = (p2, q2)
                    trans.add((pair, a, nxt))
                    if nxt not in seen:
                        seen.add(nxt)
                        states.append(nxt)
                        queue.append(nxt)
                        if len(states) > cap:
                            raise CapacityError(f"product ({mode})", cap)
    if union:
        finals = {s for s in states if s[0] in A.finals or s[1] in B.finals}
    else:
        finals = {s for s in states if s[0] in A.finals and s[1] in B.finals}
    return Nfa(alphabet, tuple(states), frozenset(starts), frozenset(finals), frozenset(trans))


def intersect_all(automata: Iterable[Nfa], cap: int = DEFAULT_PRODUCT_CAP) -> Nfa:
    automata = list(automata)
    result = automata[0]
    for other in automata[1:]:
        result = trim(product(result, other, "intersect", cap))
    return result


def determinize(A: Nfa, cap: int = DEFAULT_SUBSET_CAP, alphabet: Optional[Alphabet] = None) -> Nfa:
    """Complete DFA by subset construction; states are frozensets of A's states."""
    alphabet = A.alphabet if alphabet is None else alphabet
    start = A.closure(A.initial)
    states = [start]
    seen = {start}
    queue = deque(states)
    trans = set()
    while queue:
        S = queue.popleft()
        for a in alphabet:
            T = A.step(S, a) if a in A.alphabet else frozenset()
            trans.add((S, a, T))
            if T not in seen:
                seen.add(T)
                states.append(T)
                queue.append(T)
                if len(states) > cap:
                    raise CapacityError("subset construction", cap)
    finals = {S for S in states if S & A.finals}
    return Nfa(alphabet, tuple(states), frozenset({start}), frozenset(finals), frozenset(trans))


def complement(A: Nfa, cap: int = DEFAULT_SUBSET_CAP, alphabet: Optional[Alphabet] = None) -> Nfa:
    """Σ* minus L(A), over A's alphabet (or a larger one if given)."""
    D = determinize(A, cap, alphabet)
    return Nfa(D.alphabet, D.states, D.initial, frozenset(set(D.states) - D.finals), D.transitions)


def reverse(A: Nfa) -> Nfa:
    return Nfa(A.alphabet, A.states, A.finals, A.initial,
               frozenset((q, a, p) for p, a, q in A.transitions),
               frozenset((q, p) for p, q in A.epsilons))


def flip_marking(A: Nfa) -> Nfa:
    if not A.alphabet.is_closed_under_marking():
        raise PreconditionError("alphabet is not closed under marking")
    return Nfa(A.alphabet, A.states, A.initial, A.finals,
               frozenset((p, a.flip(), q) for p, a, q in A.transitions), A.epsilons)


def fragment(A: Nfa, source: Hashable, target: Hashable) -> Nfa:
    """The words leading from ``source`` to ``target`` in A."""
    if source not in A.states or target not in A.states:
        raise PreconditionError(f"unknown state in fragment({source!r}, {target!r})")
    return Nfa(A.alphabet, A.states, frozenset({source}), frozenset({target}),
               A.transitions, A.epsilons)


def with_alphabet(A: Nfa, alphabet: Alphabet) -> Nfa:
    """Same automaton over a larger alphabet."""
    return Nfa(A.alphabet.union(alphabet), A.states, A.initial, A.finals, A.transitions, A.epsilons)


def normalized(A: Nfa) -> Nfa:
    """Rename states to q0, q1, ... in state order."""
    names = {q: f"q{i}" for i, q in enumerate(A.states)}
    return Nfa(A.alphabet, tuple(names.values()),
               frozenset(names[q] for q in A.initial), frozenset(names[q] for q in A.finals),
               frozenset((names[p], a, names[q]) for p, a, q in A.transitions),
               frozenset((names[p], names[q]) for p, q in A.epsilons))


# ---------------------------------------------------------------------------
# text format
#
#   alphabet: a b ~a ~b
#   states: q0 q1
#   initial: q0
#   final: q1
#   trans: q0 a q1        (a word label such as a~b makes the file a Gnfa)
#   eps: q0 q1


def _name(q) -> str:
    text = str(q)
    if not text or any(ch.isspace() for ch in text) or text.startswith("#"):
        raise PreconditionError(f"state {q!r} has no valid token name; normalize first")
    return text


def format_automaton(A) -> str:
    if isinstance(A, Nfa) and not all(isinstance(q, str) for q in A.states):
        A = normalized(A)
    if isinstance(A, Gnfa) and not all(isinstance(q, str) for q in A.states):
        names = {q: f"q{i}" for i, q in enumerate(A.states)}
        A = Gnfa(A.alphabet, tuple(names.values()),
                 frozenset(names[q] for q in A.initial), frozenset(names[q] for q in A.finals),
                 frozenset((names[p], w, names[q]) for p, w, q in A.transitions))
    order = {q: i for i, q in enumerate(A.states)}
    lines = [
        f"alphabet: {A.alphabet}",
        "states: " + " ".join(_name(q) for q in A.states),
        "initial: " + " ".join(_name(q) for q in sorted(A.initial, key=order.__getitem__)),
        "final: " + " ".join(_name(q) for q in sorted(A.finals, key=order.__getitem__)),
    ]

    def tkey(t):
        return (order[t[0]], str(t[1]), order[t[2]])

    for p, a, q in sorted(A.transitions, key=tkey):
        lines.append(f"trans: {_name(p)} {a} {_name(q)}")
    for p, q in sorted(getattr(A, "epsilons", ()), key=lambda t: (order[t[0]], order[t[1]])):
        lines.append(f"eps: {_name(p)} {_name(q)}")
    return "\n".join(lines) + "\n"


def parse_automaton(text: str):
    """Parse the automaton text format; returns a Gnfa if any label is not a single symbol."""
    alphabet = None
    states, initial, finals, trans, eps = [], [], [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip() if raw.lstrip().startswith("#") else raw.strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected 'directive: ...'")
        key, args = key.strip(), rest.split()
        if key == "alphabet":
            alphabet = Alphabet.of(args)
        elif key == "states":
            states += args
        elif key == "initial":
            initial += args
        elif key == "final":
            finals += args
        elif key == "trans":
            if len(args) != 3:
                raise ParseError(f"line {lineno}: trans needs 'source label target'")
            trans.append((args[0], Word.parse(args[1]), args[2]))
        elif key == "eps":
            if len(args) != 2:
                raise ParseError(f"line {lineno}: eps needs 'source target'")
            eps.append((args[0], args[1]))
        else:
            raise ParseError(f"line {lineno}: unknown directive {key!r}")
    if alphabet is None:
        raise ParseError("missing 'alphabet:' line")
    order = list(states)
    for p, _, q in trans:
        order += [p, q]
    for p, q in eps:
        order += [p, q]
    order += initial + finals
    try:
        if all(len(label) == 1 for _, label, _ in trans):
            return Nfa(alphabet, tuple(order), frozenset(initial), frozenset(finals),
                       frozenset((p, label[0], q) for p, label, q in trans), frozenset(eps))
        if eps:
            trans += [(p, EMPTY, q) for p, q in eps]
        return Gnfa(alphabet, tuple(order), frozenset(initial), frozenset(finals), frozenset(trans))
    except PreconditionError as exc:
        raise ParseError(str(exc)) from exc
