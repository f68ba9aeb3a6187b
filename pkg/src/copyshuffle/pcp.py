"""PCP instances, a bounded solver, and the reduction constructions.

Every construction takes an instance (g, h) and returns a grammar or an
automaton whose "fixed form" question (square, marked copy, power,
self-shuffle, reverse copy, marked shuffle) has a positive answer exactly
when the instance has a solution.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional

from .automata import Gnfa
from .errors import ParseError, PreconditionError
from .grammars import Cfg
from .words import EMPTY, Alphabet, Symbol, Word


@dataclass(frozen=True, eq=False)
class Morphism:
    domain: Alphabet
    codomain: Alphabet
    images: Mapping

    def __post_init__(self):
        images = {a: Word(w) for a, w in self.images.items()}
        if set(images) != set(self.domain):
            raise PreconditionError("a morphism must give an image for every domain letter")
        for w in images.values():
            for s in w:
                if s not in self.codomain:
                    raise PreconditionError(f"image symbol {s} not in codomain")
        object.__setattr__(self, "images", images)

    @classmethod
    def of(cls, images: Mapping[str, str], domain=None, codomain=None) -> Morphism:
        """``Morphism.of({"1": "ab", "2": "b"})``; alphabets default to what is used."""
        images = {Symbol.parse(a) if isinstance(a, str) else a: Word.parse(w) if isinstance(w, str) else Word(w)
                  for a, w in images.items()}
        if domain is None:
            domain = Alphabet(tuple(images))
        elif not isinstance(domain, Alphabet):
            domain = Alphabet.of(domain)
        if codomain is None:
            used = sorted({s for w in images.values() for s in w})
            codomain = Alphabet(tuple(used))
        elif not isinstance(codomain, Alphabet):
            codomain = Alphabet.of(codomain)
        return cls(domain, codomain, images)

    def __call__(self, w) -> Word:
        out = []
        for a in w:
            out.extend(self.images[a])
        return Word(out)

    @property
    def nonerasing(self) -> bool:
        return all(len(w) > 0 for w in self.images.values())

    def __eq__(self, other):
        return (isinstance(other, Morphism) and self.domain == other.domain
                and self.codomain == other.codomain and self.images == other.images)

    def __hash__(self):
        return hash((self.domain, self.codomain, tuple(sorted(self.images.items()))))


@dataclass(frozen=True)
class PcpInstance:
    g: Morphism
    h: Morphism

    def __post_init__(self):
        if self.g.domain != self.h.domain:
            raise PreconditionError("g and h must share the domain alphabet")
        codomain = self.g.codomain.union(self.h.codomain)
        if codomain != self.g.codomain or codomain != self.h.codomain:
            object.__setattr__(self, "g", Morphism(self.g.domain, codomain, self.g.images))
            object.__setattr__(self, "h", Morphism(self.h.domain, codomain, self.h.images))

    @classmethod
    def of(cls, pairs: Mapping[str, tuple]) -> PcpInstance:
        """``PcpInstance.of({"1": ("a", "baa"), ...})`` giving (g(letter), h(letter))."""
        g = {a: gh[0] for a, gh in pairs.items()}
        h = {a: gh[1] for a, gh in pairs.items()}
        gm, hm = Morphism.of(g), Morphism.of(h)
        codomain = gm.codomain.union(hm.codomain)
        codomain = Alphabet(tuple(sorted(codomain)))
        return cls(Morphism(gm.domain, codomain, gm.images), Morphism(hm.domain, codomain, hm.images))

    @property
    def domain(self) -> Alphabet:
        return self.g.domain

    @property
    def codomain(self) -> Alphabet:
        return self.g.codomain

    @property
    def size(self) -> int:
        return len(self.domain)

    def is_solution(self, w) -> bool:
        return len(w) > 0 and self.g(w) == self.h(w)

    def _require_nonerasing(self):
        if not (self.g.nonerasing and self.h.nonerasing):
            raise PreconditionError("the construction needs nonerasing morphisms")


@dataclass(frozen=True, order=True)
class Overflow:
    """Residue of a partial match: ``side`` is the morphism that is ahead.

    With side "g", g(u) = h(v) · residue.
    """

    side: str
    residue: Word

    def __str__(self):
        return f"{self.side}:{self.residue}"


def _advance(I: PcpInstance, state: Overflow, a: Symbol) -> Optional[Overflow]:
    lead, lag = (I.g, I.h) if state.side == "g" else (I.h, I.g)
    ahead = state.residue + lead.images[a]
    behind = lag.images[a]
    if ahead[:len(behind)] == behind:
        return Overflow(state.side, ahead[len(behind):])
    if behind[:len(ahead)] == ahead:
        other = "h" if state.side == "g" else "g"
        return Overflow(other, behind[len(ahead):])
    return None


def solve_bounded(I: PcpInstance, max_len: int) -> Optional[Word]:
    """Shortest solution of length <= max_len (ties: domain order), or None.

    Breadth-first over overflow configurations; None only means that no
    solution exists up to the bound.
    """
    I._require_nonerasing()
    if max_len < 1:
        return None
    longest = max(len(w) for m in (I.g, I.h) for w in m.images.values())
    residue_cap = longest * max_len
    start = Overflow("g", EMPTY)
    parent = {start: None}
    frontier = [start]
    for depth in range(1, max_len + 1):
        nxt = []
        for state in frontier:
            for a in I.domain:
                new = _advance(I, state, a)
                if new is None or len(new.residue) > residue_cap:
                    continue
                if not new.residue:
                    out = [a]
                    node = state
                    while parent[node] is not None:
                        node, sym = parent[node]
                        out.append(sym)
                    return Word(reversed(out))
                if new not in parent:
                    parent[new] = (state, a)
                    nxt.append(new)
        frontier = nxt
        if not frontier:
            break
    return None


# ---------------------------------------------------------------------------
# marked shuffle: the overflow automaton


def _factorizations(h: Morphism, target: Word):
    """All nonempty z with h(z) == target (h nonerasing)."""
    results = []

    def go(pos, z):
        if pos == len(target):
            if z:
                results.append(Word(z))
            return
        for b in h.domain:
            image = h.images[b]
            if target[pos:pos + len(image)] == image:
                go(pos + len(image), z + [b])

    go(0, [])
    return results


def marked_shuffle_automaton(I: PcpInstance) -> Gnfa:
    """Generalized automaton over Σ ∪ Σ̄ whose states are overflows of g over h.

    States are the prefixes v of the images h(a); ε is both initial and the
    only final state.  Transitions:

    * u --a z̄--> v when g(a) = x v and h(z) = u x for a nonempty z;
    * u --a--> u g(a) when u g(a) is again a prefix of some h-image.

    An accepted word a1 z̄1 ... an z̄n satisfies g(a1...an) = h(z1...zn), so it
    lies in w ⧢ w̄ for w = a1...an exactly when that w solves the instance.
    """
    I._require_nonerasing()
    sigma = I.domain
    prefixes = {EMPTY}
    for a in sigma:
        image = I.h.images[a]
        prefixes |= {image[:i] for i in range(len(image) + 1)}
    order = sorted(prefixes, key=I.codomain.sort_key)
    states = [Overflow("g", v) for v in order]
    trans = set()
    for u in order:
        for a in sigma:
            image = I.g.images[a]
            for cut in range(len(image) + 1):
                x, v = image[:cut], image[cut:]
                if v not in prefixes:
                    continue
                for z in _factorizations(I.h, u + x):
                    trans.add((Overflow("g", u), Word((a,)) + z.markall(), Overflow("g", v)))
            grown = u + image
            if grown in prefixes:
                trans.add((Overflow("g", u), Word((a,)), Overflow("g", grown)))
    alphabet = Alphabet(sigma.symbols + tuple(a.mark() for a in sigma))
    start = Overflow("g", EMPTY)
    return Gnfa(alphabet, tuple(states), frozenset({start}), frozenset({start}), frozenset(trans))


# ---------------------------------------------------------------------------
# grammar constructions


def _fresh(I: PcpInstance, *letters: str):
    out = []
    for ch in letters:
        s = Symbol(ch)
        if s in I.domain or s in I.codomain:
            raise PreconditionError(f"marker {ch!r} is not fresh for this instance")
        out.append(s)
    return out


def _require_disjoint(I: PcpInstance):
    if set(I.domain) & set(I.codomain):
        raise PreconditionError("domain and codomain alphabets must be disjoint")


def _l2_productions(I: PcpInstance, nonempty: bool = True, marked: bool = False):
    """Productions for g(w) u^r h(u) w^r (second half marked if ``marked``)."""
    prods = []

    def tail(word):
        return tuple(word.markall() if marked else word)

    for a in I.domain:
        gw, back = tuple(I.g.images[a]), tail(Word((a,)))
        prods.append(("S", gw + ("S",) + back))
        if nonempty:
            prods.append(("S", gw + ("T",) + back))
    if not nonempty:
        prods.append(("S", ("T",)))
    for b in I.domain:
        hb = tail(I.h.images[b])
        prods.append(("T", (b, "T") + hb))
        if nonempty:
            prods.append(("T", (b,) + hb))
    if not nonempty:
        prods.append(("T", ()))
    return prods


def _terminals(I: PcpInstance, *extra):
    return Alphabet(I.domain.symbols).union(I.codomain).union(extra)


def build_L2(I: PcpInstance) -> Cfg:
    """{g(w) u^r h(u) w^r : u, w nonempty}; has a square iff the instance is solvable."""
    _require_disjoint(I)
    return Cfg.build("S", _l2_productions(I), terminals=_terminals(I))


def build_L2_marked(I: PcpInstance, nonempty: bool = True) -> Cfg:
    """{g(w) u^r mark(h(u)) mark(w)^r}; has some w w̄ iff solvable.

    With ``nonempty=False`` u and w range over all words, which adds the
    trivial member ε.
    """
    _require_disjoint(I)
    marks = [s.mark() for s in _terminals(I)]
    return Cfg.build("S", _l2_productions(I, nonempty, marked=True), terminals=_terminals(I, *marks))


def _block_productions(I: PcpInstance, inner, index, sep):
    """Left-linear productions appending one block [sep] Δ+ Γ+ after ``inner``."""
    outer, mid = ("Z", index), ("D", index)
    prods = []
    for c in I.domain:
        prods += [(outer, (outer, c)), (outer, (mid, c))]
    for d in I.codomain:
        prods.append((mid, (mid, d)))
        prods.append((mid, (inner, sep, d) if sep is not None else (inner, d)))
    return outer, prods


def build_Ln(I: PcpInstance, n: int, separator: bool = False, sharp: str = "#") -> Cfg:
    """L2 followed by n-2 blocks Δ+Γ+ (each preceded by ``sharp`` if ``separator``).

    Without the separator the language has an n-th power iff the instance is
    solvable.  With it every member has exactly n-2 separators, which no
    n-th power can carry for n >= 3.
    """
    if n < 2:
        raise PreconditionError("n must be at least 2")
    _require_disjoint(I)
    sep = _fresh(I, sharp)[0] if separator else None
    prods = _l2_productions(I)
    top = "S"
    for i in range(1, n - 1):
        top, block = _block_productions(I, top, i, sep)
        prods += block
    extra = (sep,) if sep is not None else ()
    return Cfg.build(top, prods, terminals=_terminals(I, *extra))


def build_Lomega(I: PcpInstance) -> Cfg:
    """L2 · (Δ+Γ+)*: has some power w^n, n >= 2, iff solvable."""
    _require_disjoint(I)
    prods = _l2_productions(I)
    prods.append(("W", ("S",)))
    for c in I.domain:
        prods += [("W", ("G", c)), ("G", ("G", c)), ("G", ("D", c))]
    for d in I.codomain:
        prods += [("D", ("D", d)), ("D", ("W", d))]
    return Cfg.build("W", prods, terminals=_terminals(I))


def build_Lsharp(I: PcpInstance, nonempty: bool = True, dollar: str = "$", sharp: str = "#") -> Cfg:
    """{$ g(w) u^r # $ h(u) w^r #}: meets some w ⧢ w iff solvable."""
    _require_disjoint(I)
    dl, sh = _fresh(I, dollar, sharp)
    prods = [("X", (dl, "S", sh))]
    for a in I.domain:
        gw = tuple(I.g.images[a])
        prods.append(("S", gw + ("S", a)))
        if nonempty:
            prods.append(("S", gw + ("T", a)))
    if not nonempty:
        prods += [("S", ("T",)), ("T", (sh, dl))]
    for b in I.domain:
        hb = tuple(I.h.images[b])
        prods.append(("T", (b, "T") + hb))
        if nonempty:
            prods.append(("T", (b, sh, dl) + hb))
    return Cfg.build("X", prods, terminals=_terminals(I, dl, sh))


def build_L1(I: PcpInstance, sharp: str = "#") -> Cfg:
    """{# g(v) ## h(v)^r # : v nonempty}: contains w w^r (or a palindrome) iff solvable."""
    I._require_nonerasing()
    (sh,) = _fresh(I, sharp)
    prods = []
    for a in I.domain:
        g, hr = tuple(I.g.images[a]), tuple(I.h.images[a].reversed())
        prods.append(("S", (sh,) + g + ("T",) + hr + (sh,)))
        prods.append(("T", g + ("T",) + hr))
    prods.append(("T", (sh, sh)))
    return Cfg.build("S", prods, terminals=Alphabet(I.codomain.symbols).union([sh]))


def build_Lk(I: PcpInstance, k: int, sharp: str = "#", letter: str = "c") -> Cfg:
    """L1 · (cc)^(k-1): contains w1 w1^r ... wk wk^r iff solvable."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    base = build_L1(I, sharp)
    (c,) = _fresh(I, letter)
    if c in base.terminals:
        raise PreconditionError(f"letter {letter!r} collides with the separator")
    prods = list(base.productions)
    top = "S"
    for i in range(1, k):
        prods.append((("K", i), (top, c, c)))
        top = ("K", i)
    return Cfg.build(top, prods, terminals=base.terminals.union([c]))


# ---------------------------------------------------------------------------
# text format
#
#   domain: 1 2 3
#   1: a | baa        (g(1) = a, h(1) = baa)


def format_pcp(I: PcpInstance) -> str:
    lines = [f"domain: {I.domain}"]
    for a in I.domain:
        lines.append(f"{a}: {I.g.images[a]} | {I.h.images[a]}")
    return "\n".join(lines) + "\n"


def parse_pcp(text: str) -> PcpInstance:
    domain = None
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected 'letter: g-image | h-image'")
        key = key.strip()
        if key == "domain":
            domain = rest.split()
            continue
        left, bar, right = rest.partition("|")
        if not bar:
            raise ParseError(f"line {lineno}: missing '|' between the two images")
        pairs[key] = (left.strip(), right.strip())
    if domain is None:
        raise ParseError("missing 'domain:' line")
    if set(domain) != set(pairs):
        raise ParseError("every domain letter needs exactly one image line")
    try:
        ordered = {a: pairs[a] for a in domain}
        return PcpInstance.of(ordered)
    except (PreconditionError, ParseError) as exc:
        raise ParseError(str(exc)) from exc
