"""Context-free grammars: emptiness, membership, enumeration, and the
triple construction for intersection with a regular language.

A right-hand side is a tuple whose items are either :class:`Symbol`
(terminals) or anything else (nonterminal ids).  The linearity flag is
derived from the productions, never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from typing import Hashable, Iterable, Optional

from .automata import Nfa, remove_epsilons
from .errors import ParseError, PreconditionError, SizeLimitError
from .words import EMPTY, EMPTY_TOKEN, Alphabet, Symbol, Word

DEFAULT_ENUMERATION_CAP = 16


def is_terminal(item) -> bool:
    return isinstance(item, Symbol)


@dataclass(frozen=True)
class Cfg:
    terminals: Alphabet
    nonterminals: tuple
    start: Hashable
    productions: tuple  # ((lhs, rhs-tuple), ...)

    def __post_init__(self):
        prods = tuple(dict.fromkeys((lhs, tuple(rhs)) for lhs, rhs in self.productions))
        object.__setattr__(self, "productions", prods)
        nts = tuple(dict.fromkeys(self.nonterminals))
        object.__setattr__(self, "nonterminals", nts)
        declared = set(nts)
        if self.start not in declared:
            raise PreconditionError(f"start symbol {self.start!r} is not declared")
        for lhs, rhs in prods:
            if lhs not in declared:
                raise PreconditionError(f"undeclared nonterminal {lhs!r}")
            for item in rhs:
                if is_terminal(item):
                    if item not in self.terminals:
                        raise PreconditionError(f"terminal {item} not in terminal alphabet")
                elif item not in declared:
                    raise PreconditionError(f"undeclared nonterminal {item!r}")

    @classmethod
    def build(cls, start, productions: Iterable, terminals: Optional[Iterable[Symbol]] = None) -> Cfg:
        """Collect nonterminals from the productions; terminals default to those used."""
        productions = [(lhs, tuple(rhs)) for lhs, rhs in productions]
        nts = [start] + [lhs for lhs, _ in productions]
        nts += [x for _, rhs in productions for x in rhs if not is_terminal(x)]
        used = [x for _, rhs in productions for x in rhs if is_terminal(x)]
        alphabet = Alphabet(tuple(dict.fromkeys(used)))
        if terminals is not None:
            alphabet = Alphabet(tuple(terminals)).union(alphabet)
        return cls(alphabet, tuple(nts), start, tuple(productions))

    @property
    def linear(self) -> bool:
        return all(sum(1 for x in rhs if not is_terminal(x)) <= 1 for _, rhs in self.productions)

    @cached_property
    def _by_lhs(self) -> dict:
        table = {x: [] for x in self.nonterminals}
        for lhs, rhs in self.productions:
            table[lhs].append(rhs)
        return table

    @cached_property
    def _normal_form(self):
        return _NormalForm(self)

    def membership(self, w) -> bool:
        return membership(self, w)

    def __str__(self):
        return format_grammar(self)


def productive(G: Cfg) -> set:
    """Least fixpoint: nonterminals deriving at least one terminal word."""
    good = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in G.productions:
            if lhs not in good and all(is_terminal(x) or x in good for x in rhs):
                good.add(lhs)
                changed = True
    return good


def is_empty(G: Cfg) -> bool:
    return G.start not in productive(G)


def trim(G: Cfg) -> Cfg:
    """Drop unproductive and unreachable nonterminals."""
    good = productive(G)
    if G.start not in good:
        return Cfg(G.terminals, (G.start,), G.start, ())
    prods = [(l, r) for l, r in G.productions
             if l in good and all(is_terminal(x) or x in good for x in r)]
    by_lhs = {}
    for l, r in prods:
        by_lhs.setdefault(l, []).append(r)
    seen = {G.start}
    stack = [G.start]
    while stack:
        x = stack.pop()
        for rhs in by_lhs.get(x, ()):
            for y in rhs:
                if not is_terminal(y) and y not in seen:
                    seen.add(y)
                    stack.append(y)
    nts = tuple(x for x in G.nonterminals if x in seen)
    return Cfg(G.terminals, nts, G.start, tuple((l, r) for l, r in prods if l in seen))


def intersect_regular(G: Cfg, A: Nfa) -> Cfg:
    """Grammar for L(G) ∩ L(A) by the triple construction.

    Nonterminals are triples (p, X, q): X derives a word leading from state p
    to state q.  Triples are generated on demand from the start symbol and the
    result is trimmed.  Linear grammars stay linear.
    """
    A = remove_epsilons(A)
    terminals = G.terminals.union(A.alphabet)
    delta = A._delta
    states = A.states
    start = ("start",)
    productions = [(start, ((p, G.start, q),)) for p in A.initial for q in A.finals]
    todo = [rhs[0] for _, rhs in productions]
    seen = set(todo)

    def expansions(p, rhs, q):
        # all ways to thread a state path p -> ... -> q through rhs
        partial = [(p, ())]
        for item in rhs:
            nxt = []
            for cur, items in partial:
                if is_terminal(item):
                    for r in delta.get((cur, item), ()):
                        nxt.append((r, items + (item,)))
                else:
                    for r in states:
                        nxt.append((r, items + ((cur, item, r),)))
            partial = nxt
        return [items for cur, items in partial if cur == q]

    while todo:
        triple = todo.pop()
        p, X, q = triple
        for rhs in G._by_lhs[X]:
            for items in expansions(p, rhs, q):
                productions.append((triple, items))
                for y in items:
                    if not is_terminal(y) and y not in seen:
                        seen.add(y)
                        todo.append(y)
    nts = (start,) + tuple(sorted(seen, key=repr))
    return trim(Cfg(terminals, nts, start, tuple(productions)))


class _NormalForm:
    """Binarized, epsilon-free, unit-closed form used by CYK.

    Terminals inside long right-hand sides get proxy nonterminals, long
    right-hand sides are split into chains, nullable positions are
    expanded away, and unit derivations are precomputed as a closure.
    """

    def __init__(self, G: Cfg):
        counter = [0]

        def fresh(tag):
            counter[0] += 1
            return ("nf", tag, counter[0])

        prods = []
        proxy = {}
        for lhs, rhs in G.productions:
            if len(rhs) >= 2:
                items = []
                for x in rhs:
                    if is_terminal(x):
                        if x not in proxy:
                            proxy[x] = ("nf", "term", x)
                            prods.append((proxy[x], (x,)))
                        items.append(proxy[x])
                    else:
                        items.append(x)
                rhs = tuple(items)
            while len(rhs) > 2:
                tail = fresh("bin")
                prods.append((lhs, (rhs[0], tail)))
                lhs, rhs = tail, rhs[1:]
            prods.append((lhs, rhs))

        nullable = set()
        changed = True
        while changed:
            changed = False
            for lhs, rhs in prods:
                if lhs not in nullable and all(not is_terminal(x) and x in nullable for x in rhs):
                    nullable.add(lhs)
                    changed = True
        self.start_nullable = G.start in nullable

        binary, lexical, unit = set(), {}, set()
        for lhs, rhs in prods:
            if len(rhs) == 2:
                b, c = rhs
                binary.add((lhs, b, c))
                if b in nullable:
                    unit.add((lhs, c))
                if c in nullable:
                    unit.add((lhs, b))
            elif len(rhs) == 1:
                if is_terminal(rhs[0]):
                    lexical.setdefault(rhs[0], set()).add(lhs)
                else:
                    unit.add((lhs, rhs[0]))
        # parents[B] = every A with A =>* B through unit steps (A included)
        parents = {}
        nts = {lhs for lhs, _ in prods} | {x for _, r in prods for x in r if not is_terminal(x)}
        up = {}
        for a, b in unit:
            up.setdefault(b, set()).add(a)
        for b in nts:
            seen = {b}
            stack = [b]
            while stack:
                x = stack.pop()
                for a in up.get(x, ()):
                    if a not in seen:
                        seen.add(a)
                        stack.append(a)
            parents[b] = frozenset(seen)
        self.parents = parents
        self.lexical = {a: self._close(s) for a, s in lexical.items()}
        by_pair = {}
        for a, b, c in binary:
            by_pair.setdefault((b, c), set()).add(a)
        self.by_pair = by_pair

    def _close(self, found) -> frozenset:
        out = set()
        for x in found:
            out |= self.parents.get(x, {x})
        return frozenset(out)


def membership(G: Cfg, w: Iterable[Symbol]) -> bool:
    """CYK over the binarized normal form."""
    w = tuple(w)
    nf = G._normal_form
    if not w:
        return nf.start_nullable
    n = len(w)
    table = {}
    for i, a in enumerate(w):
        table[i, i + 1] = nf.lexical.get(a, frozenset())
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            j = i + span
            found = set()
            for k in range(i + 1, j):
                left, right = table[i, k], table[k, j]
                if not left or not right:
                    continue
                for b in left:
                    for c in right:
                        found |= nf.by_pair.get((b, c), set())
            table[i, j] = nf._close(found)
    return G.start in table[0, n]


def _min_lengths(G: Cfg) -> dict:
    INF = float("inf")
    best = {x: INF for x in G.nonterminals}
    changed = True
    while changed:
        changed = False
        for lhs, rhs in G.productions:
            length = sum(1 if is_terminal(x) else best[x] for x in rhs)
            if length < best[lhs]:
                best[lhs] = length
                changed = True
    return best


def enumerate_words(G: Cfg, maxlen: int, cap: int = DEFAULT_ENUMERATION_CAP) -> frozenset:
    """Exactly the words of L(G) of length <= maxlen, by a length-bounded fixpoint."""
    if maxlen > cap:
        raise SizeLimitError(f"enumeration length {maxlen} exceeds cap {cap}")
    minlen = _min_lengths(G)
    words = {x: set() for x in G.nonterminals}
    changed = True
    while changed:
        changed = False
        for lhs, rhs in G.productions:
            if sum(1 if is_terminal(x) else minlen[x] for x in rhs) > maxlen:
                continue
            partial = {()}
            for idx, item in enumerate(rhs):
                rest = sum(1 if is_terminal(x) else minlen[x] for x in rhs[idx + 1:])
                room = maxlen - rest
                if is_terminal(item):
                    partial = {p + (item,) for p in partial if len(p) + 1 <= room}
                else:
                    partial = {p + tuple(s) for p in partial for s in words[item]
                               if len(p) + len(s) <= room}
                if not partial:
                    break
            new = {Word(p) for p in partial} - words[lhs]
            if new:
                words[lhs] |= new
                changed = True
    return frozenset(words[G.start])


def shortest_word(G: Cfg) -> Optional[Word]:
    """A shortest member of L(G) (ties: lexicographic by terminal order), or None."""
    key = G.terminals.sort_key
    best = {}
    changed = True
    while changed:
        changed = False
        for lhs, rhs in G.productions:
            if not all(is_terminal(x) or x in best for x in rhs):
                continue
            w = Word()
            for x in rhs:
                w = w + ((x,) if is_terminal(x) else best[x])
            if lhs not in best or key(w) < key(best[lhs]):
                best[lhs] = w
                changed = True
    return best.get(G.start)


# ---------------------------------------------------------------------------
# palindrome family


def palindrome_grammar(alphabet: Alphabet, nonempty: bool = False) -> Cfg:
    """Even palindromes {w w^r}; with ``nonempty`` only w != ε."""
    prods = [("E", (a, "E", a)) for a in alphabet]
    if nonempty:
        prods += [("E", (a, a)) for a in alphabet]
    else:
        prods.append(("E", ()))
    return Cfg.build("E", prods, terminals=alphabet)


def mirror_k_grammar(alphabet: Alphabet, k: int) -> Cfg:
    """E_k = {w1 w1^r ... wk wk^r}: k copies of the palindrome grammar in sequence."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    base = palindrome_grammar(alphabet)
    return Cfg.build("S", [("S", ("E",) * k)] + list(base.productions), terminals=alphabet)


def mirror_star_grammar(alphabet: Alphabet) -> Cfg:
    """The union of all E_k, k >= 1."""
    base = palindrome_grammar(alphabet)
    prods = [("S", ("E", "S")), ("S", ("E",))] + list(base.productions)
    return Cfg.build("S", prods, terminals=alphabet)


# ---------------------------------------------------------------------------
# text format
#
#   start: S
#   terminals: a b          (optional; defaults to the terminals used)
#   S -> a S a | _


def normalized(G: Cfg) -> Cfg:
    """Rename nonterminals to S, N1, N2, ... (start first)."""
    names = {G.start: "S"}
    for x in G.nonterminals:
        if x not in names:
            names[x] = f"N{len(names)}"
    prods = tuple((names[l], tuple(y if is_terminal(y) else names[y] for y in r))
                  for l, r in G.productions)
    return Cfg(G.terminals, tuple(names[x] for x in G.nonterminals if x in names) or ("S",),
               "S", prods)


def _is_nonterminal_token(tok: str) -> bool:
    return tok[:1].isupper() and all(ch.isalnum() or ch == "_" for ch in tok)


def format_grammar(G: Cfg) -> str:
    if not all(isinstance(x, str) and _is_nonterminal_token(x) for x in G.nonterminals):
        G = normalized(G)
    lines = [f"start: {G.start}", f"terminals: {G.terminals}"]
    for x in G.nonterminals:
        alts = [r for l, r in G.productions if l == x]
        if not alts:
            continue
        rendered = [" ".join(str(y) for y in r) if r else EMPTY_TOKEN for r in alts]
        lines.append(f"{x} -> " + " | ".join(rendered))
    return "\n".join(lines) + "\n"


def parse_grammar(text: str) -> Cfg:
    start = None
    terminals = None
    prods = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if "->" in line:
            lhs, _, rest = line.partition("->")
            lhs = lhs.strip()
            if not _is_nonterminal_token(lhs):
                raise ParseError(f"line {lineno}: bad nonterminal {lhs!r}")
            for alt in rest.split("|"):
                toks = alt.split()
                if toks == [EMPTY_TOKEN]:
                    prods.append((lhs, ()))
                    continue
                rhs = []
                for tok in toks:
                    if _is_nonterminal_token(tok):
                        rhs.append(tok)
                    else:
                        try:
                            rhs.append(Symbol.parse(tok))
                        except Exception as exc:
                            raise ParseError(f"line {lineno}: bad terminal {tok!r}") from exc
                if not rhs:
                    raise ParseError(f"line {lineno}: empty alternative (write _ for ε)")
                prods.append((lhs, tuple(rhs)))
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if sep and key == "start":
            start = rest.strip()
        elif sep and key == "terminals":
            terminals = Alphabet.of(rest.split())
        else:
            raise ParseError(f"line {lineno}: expected 'start:', 'terminals:' or a production")
    if start is None:
        raise ParseError("missing 'start:' line")
    try:
        return Cfg.build(start, prods, terminals=terminals)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from exc
