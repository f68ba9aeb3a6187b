"""Nondeterministic one-counter automata with zero tests.

A transition is ``(source, symbol-or-None, guard, effect, target)`` where
``guard`` is one of ``"zero"``, ``"pos"``, ``"any"`` and ``effect`` is -1, 0
or +1.  ``None`` as the symbol is an epsilon move.  A word is accepted when
some run ends in a final state with the whole input consumed; the counter
value at the end is unconstrained.

Two constructions live here: a machine for the complement of a marked copy
language {w w̄ : w in P}, and the three-branch machine whose language
contains every square u#u# except the PCP solutions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .automata import Nfa, determinize
from .errors import IndeterminateError, ParseError, PreconditionError
from .pcp import Morphism
from .words import EMPTY_TOKEN, Alphabet, Symbol, Word

GUARDS = ("zero", "pos", "any")
EFFECTS = (-1, 0, 1)
DEFAULT_STEP_CAP = 2_000_000


@dataclass(frozen=True)
class OneCounterMachine:
    alphabet: Alphabet
    states: tuple
    initial: frozenset
    finals: frozenset
    transitions: frozenset

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(dict.fromkeys(self.states)))
        for name in ("initial", "finals", "transitions"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        declared = set(self.states)
        if not (self.initial | self.finals) <= declared:
            raise PreconditionError("initial/final states must be declared")
        for p, a, guard, effect, q in self.transitions:
            if p not in declared or q not in declared:
                raise PreconditionError(f"transition {p!r} -> {q!r} uses an undeclared state")
            if a is not None and a not in self.alphabet:
                raise PreconditionError(f"symbol {a} not in alphabet")
            if guard not in GUARDS or effect not in EFFECTS:
                raise PreconditionError(f"bad guard/effect {guard!r}/{effect!r}")
            if effect == -1 and guard != "pos":
                raise PreconditionError("a decrement must be guarded by 'pos'")

    @cached_property
    def _out(self) -> dict:
        out = {}
        for p, a, guard, effect, q in self.transitions:
            out.setdefault(p, []).append((a, guard, effect, q))
        return out

    def accepts(self, w, step_cap: int = DEFAULT_STEP_CAP) -> bool:
        return run(self, w, step_cap)


def _guard_ok(guard, counter):
    return guard == "any" or (guard == "zero") == (counter == 0)


def run(M: OneCounterMachine, w: Iterable[Symbol], step_cap: int = DEFAULT_STEP_CAP) -> bool:
    """Decide acceptance by search over configurations (state, position, counter).

    The counter is bounded by (|w| + 1) * |states|: no machine built here has
    an epsilon cycle that changes the counter, so between two input symbols
    the counter moves by fewer than |states| steps.
    """
    w = tuple(w)
    bound = (len(w) + 1) * max(1, len(M.states))
    out = M._out
    start = [(q, 0, 0) for q in M.initial]
    seen = set(start)
    queue = deque(start)
    steps = 0
    while queue:
        steps += 1
        if steps > step_cap:
            raise IndeterminateError(f"step cap {step_cap} exhausted with {len(queue)} open configurations")
        q, i, c = queue.popleft()
        if i == len(w) and q in M.finals:
            return True
        for a, guard, effect, r in out.get(q, ()):
            if not _guard_ok(guard, c):
                continue
            if a is None:
                j = i
            elif i < len(w) and w[i] == a:
                j = i + 1
            else:
                continue
            c2 = c + effect
            if c2 > bound:
                continue
            conf = (r, j, c2)
            if conf not in seen:
                seen.add(conf)
                queue.append(conf)
    return False


class _Builder:
    def __init__(self, alphabet):
        self.alphabet = alphabet
        self.states = []
        self.finals = set()
        self.trans = set()
        self._known = set()

    def add(self, p, a, q, guard="any", effect=0):
        for s in (p, q):
            if s not in self._known:
                self._known.add(s)
                self.states.append(s)
        self.trans.add((p, a, guard, effect, q))

    def chain(self, p, a, count, q, effect, tag):
        """From p read ``a`` (None = epsilon) and apply ``effect`` ``count`` times, ending in q.

        Decrements are guarded by 'pos'; callers handle the zero case.
        """
        guard = "pos" if effect == -1 else "any"
        if count == 0:
            self.add(p, a, q)
            return
        prev = p
        for i in range(count):
            nxt = q if i == count - 1 else (tag, i)
            self.add(prev, a if i == 0 else None, nxt, guard, effect)
            prev = nxt

    def machine(self, initial):
        return OneCounterMachine(self.alphabet, tuple(self.states), frozenset({initial}),
                                 frozenset(self.finals), frozenset(self.trans))


def complement_marked_copy_machine(P: Nfa) -> OneCounterMachine:
    """One-counter machine for (Σ ∪ Σ̄)* minus {w w̄ : w in L(P)}.

    Branches from a common start state:

    * shape: the input is not of the form Σ*Σ̄* (finite control only);
    * not-in-P: the unmarked part u is not in P (complement DFA of P run in
      the finite control);
    * length: the marked part is shorter or longer than u (count up on u,
      down on the marked part, zero test at the end or on overflow);
    * mismatch: count the prefix before a guessed position n, remember the
      letter a there, then on the marked part (while tracking the flipped
      copy of P) count down to zero and accept if the n-th marked letter is
      not ā; also accept if the marked part itself falls outside P̄.
    """
    if any(a.marked for a in P.alphabet):
        raise PreconditionError("P must be over an unmarked alphabet")
    sigma = P.alphabet
    gamma = Alphabet(sigma.symbols + tuple(a.mark() for a in sigma))
    D = determinize(P)
    d0 = next(iter(D.initial))
    dstep = {(p, a): q for p, a, q in D.transitions}
    good = D.finals
    b = _Builder(gamma)
    start = "start"
    b.add(start, None, ("shape", "u"))
    b.add(start, None, ("np", d0))
    b.add(start, None, ("len", "u"))
    b.add(start, None, ("mm", "count", d0))

    # shape violation: an unmarked letter after a marked one
    for a in sigma:
        abar = a.mark()
        b.add(("shape", "u"), a, ("shape", "u"))
        b.add(("shape", "u"), abar, ("shape", "m"))
        b.add(("shape", "m"), abar, ("shape", "m"))
        b.add(("shape", "m"), a, ("shape", "bad"))
        b.add(("shape", "bad"), a, ("shape", "bad"))
        b.add(("shape", "bad"), abar, ("shape", "bad"))
    b.finals.add(("shape", "bad"))

    # unmarked part not in P
    for d in D.states:
        for a in sigma:
            b.add(("np", d), a, ("np", dstep[d, a]))
            if d not in good:
                b.add(("np", d), a.mark(), ("np", "tail"))
                b.add(("np", "tail"), a.mark(), ("np", "tail"))
        if d not in good:
            b.finals.add(("np", d))
    b.finals.add(("np", "tail"))

    # length mismatch between the two halves
    for a in sigma:
        abar = a.mark()
        b.add(("len", "u"), a, ("len", "u"), "any", 1)
        for phase in ("u", "v"):
            b.add(("len", phase), abar, ("len", "v"), "pos", -1)
            b.add(("len", phase), abar, ("len", "long"), "zero", 0)
        b.add(("len", "long"), abar, ("len", "long"))
    for phase in ("u", "v"):
        b.add(("len", phase), None, ("len", "short"), "pos", 0)
    b.finals |= {("len", "short"), ("len", "long")}

    # letter mismatch at a guessed position, tracking P on both halves
    for d in D.states:
        for a in sigma:
            b.add(("mm", "count", d), a, ("mm", "count", dstep[d, a]), "any", 1)
            b.add(("mm", "count", d), a, ("mm", "hold", a, dstep[d, a]))
    for a in sigma:
        for d in D.states:
            for c in sigma:
                b.add(("mm", "hold", a, d), c, ("mm", "hold", a, dstep[d, c]))
            if d not in good:
                continue  # the not-in-P branch covers this input
            for c in sigma:
                cbar = c.mark()
                b.add(("mm", "hold", a, d), cbar, ("mm", "dec", a, dstep[d0, c]), "pos", -1)
                if c != a:
                    b.add(("mm", "hold", a, d), cbar, ("mm", "acc"), "zero", 0)
                else:
                    b.add(("mm", "hold", a, d), cbar, ("mm", "post", dstep[d0, c]), "zero", 0)
        for e in D.states:
            for c in sigma:
                cbar = c.mark()
                b.add(("mm", "dec", a, e), cbar, ("mm", "dec", a, dstep[e, c]), "pos", -1)
                if c != a:
                    b.add(("mm", "dec", a, e), cbar, ("mm", "acc"), "zero", 0)
                else:
                    b.add(("mm", "dec", a, e), cbar, ("mm", "post", dstep[e, c]), "zero", 0)
            if e not in good:
                b.finals.add(("mm", "dec", a, e))
    for e in D.states:
        for c in sigma:
            b.add(("mm", "post", e), c.mark(), ("mm", "post", dstep[e, c]))
        if e not in good:
            b.finals.add(("mm", "post", e))
    for c in sigma:
        b.add(("mm", "acc"), c.mark(), ("mm", "acc"))
    b.finals.add(("mm", "acc"))
    b.finals &= set(b.states)
    return b.machine(start)


def _image_mismatch_branch(b: _Builder, tag, sigma, sharp, first, second):
    """States accepting u#v# with first(u) != second(v).

    Position guess: push |first(a)| per letter of u up to a guessed letter,
    push an offset j inside its image and remember first(a)[j]; then on v pop
    |second(b)| per letter and compare when the counter hits zero.  If v's
    image ends before the guessed position the images differ in length.  A
    separate sub-branch accepts when second(v) is longer than first(u).
    """
    push, acc, end = (tag, "push"), (tag, "acc"), (tag, "end")
    b.add((tag, "start"), None, push)
    b.add((tag, "start"), None, (tag, "lpush"))
    b.finals.add(end)
    for a in sigma:
        image = first[a]
        b.chain(push, a, len(image), push, 1, (tag, "pc", a))
        for j in range(len(image)):
            b.chain(push, a, j, (tag, "hold", image[j]), 1, (tag, "gc", a, j))
    letters = {x for a in sigma for x in first[a]}
    for d in letters:
        hold, pop = (tag, "hold", d), (tag, "pop", d)
        for a in sigma:
            b.add(hold, a, hold)
        b.add(hold, sharp, pop)
        b.add(pop, sharp, end)
        for c in sigma:
            image = second[c]
            b.add(pop, c, (tag, "pp", d, c, 0))
            for t in range(len(image)):
                here = (tag, "pp", d, c, t)
                if image[t] != d:
                    b.add(here, None, acc, "zero", 0)
                b.add(here, None, (tag, "pp", d, c, t + 1), "pos", -1)
            b.add((tag, "pp", d, c, len(image)), None, pop)
    for a in sigma:
        b.add(acc, a, acc)
    b.add(acc, sharp, end)

    lpush, lpop, lacc = (tag, "lpush"), (tag, "lpop"), (tag, "lacc")
    for a in sigma:
        b.chain(lpush, a, len(first[a]), lpush, 1, (tag, "lpc", a))
    b.add(lpush, sharp, lpop)
    for c in sigma:
        image = second[c]
        b.add(lpop, c, (tag, "lp", c, 0))
        for t in range(len(image)):
            here = (tag, "lp", c, t)
            b.add(here, None, (tag, "lp", c, t + 1), "pos", -1)
            b.add(here, None, lacc, "zero", 0)
        b.add((tag, "lp", c, len(image)), None, lpop)
    for a in sigma:
        b.add(lacc, a, lacc)
    b.add(lacc, sharp, end)


def counter_inclusion_machine(g, h, sharp: str = "#") -> OneCounterMachine:
    """Machine over Σ ∪ {#} accepting every word except u#u# with g(u) = h(u).

    Branch 1 (finite control) accepts words outside Σ*#Σ*#; branch 2 accepts
    u#v# with u != v; branch 3 accepts u#v# with g(u) != h(v).  Hence the
    squares of (Σ ∪ {#})* are all accepted exactly when (g, h) has no
    solution (apart from the trivial square ## of u = ε).
    """
    if not isinstance(g, Morphism) or not isinstance(h, Morphism):
        raise PreconditionError("g and h must be morphisms")
    if not g.nonerasing or not h.nonerasing:
        raise PreconditionError("morphisms must be nonerasing")
    if g.domain != h.domain:
        raise PreconditionError("g and h need the same domain")
    sigma = g.domain
    sharp = Symbol(sharp)
    if sharp in sigma:
        raise PreconditionError(f"separator {sharp} must be fresh for the domain alphabet")
    gamma = Alphabet(sigma.symbols + (sharp,))
    b = _Builder(gamma)
    start = "start"

    # branch 1: complement of Σ*#Σ*#
    b.add(start, None, ("shape", 0))
    for a in sigma:
        b.add(("shape", 0), a, ("shape", 0))
        b.add(("shape", 1), a, ("shape", 1))
        b.add(("shape", 2), a, ("shape", 3))
        b.add(("shape", 3), a, ("shape", 3))
    b.add(("shape", 0), sharp, ("shape", 1))
    b.add(("shape", 1), sharp, ("shape", 2))
    b.add(("shape", 2), sharp, ("shape", 3))
    b.add(("shape", 3), sharp, ("shape", 3))
    b.finals |= {("shape", 0), ("shape", 1), ("shape", 3)}

    identity = {a: Word((a,)) for a in sigma}
    b.add(start, None, ("words", "start"))
    _image_mismatch_branch(b, "words", sigma, sharp, identity, identity)
    b.add(start, None, ("images", "start"))
    _image_mismatch_branch(b, "images", sigma, sharp, g.images, h.images)
    return b.machine(start)


# ---------------------------------------------------------------------------
# text format: like the automaton format, with
#   trans: q0 a pos -1 q1      (symbol _ for epsilon; guard zero|pos|any; effect -1|0|+1)


def normalized(M: OneCounterMachine) -> OneCounterMachine:
    names = {q: f"q{i}" for i, q in enumerate(M.states)}
    return OneCounterMachine(
        M.alphabet, tuple(names.values()),
        frozenset(names[q] for q in M.initial), frozenset(names[q] for q in M.finals),
        frozenset((names[p], a, g, e, names[q]) for p, a, g, e, q in M.transitions))


def format_machine(M: OneCounterMachine) -> str:
    if not all(isinstance(q, str) and q and not any(ch.isspace() for ch in q) for q in M.states):
        M = normalized(M)
    order = {q: i for i, q in enumerate(M.states)}
    lines = [
        f"alphabet: {M.alphabet}",
        "states: " + " ".join(M.states),
        "initial: " + " ".join(sorted(M.initial, key=order.__getitem__)),
        "final: " + " ".join(sorted(M.finals, key=order.__getitem__)),
    ]
    effect_text = {-1: "-1", 0: "0", 1: "+1"}

    def key(t):
        return (order[t[0]], "" if t[1] is None else str(t[1]), t[2], t[3], order[t[4]])

    for p, a, guard, effect, q in sorted(M.transitions, key=key):
        sym = EMPTY_TOKEN if a is None else str(a)
        lines.append(f"trans: {p} {sym} {guard} {effect_text[effect]} {q}")
    return "\n".join(lines) + "\n"


def parse_machine(text: str) -> OneCounterMachine:
    alphabet = None
    states, initial, finals, trans = [], [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
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
            if len(args) != 5:
                raise ParseError(f"line {lineno}: trans needs 'source symbol guard effect target'")
            p, sym, guard, effect, q = args
            try:
                a = None if sym == EMPTY_TOKEN else Symbol.parse(sym)
                effect = int(effect)
            except (ValueError, ParseError) as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
            trans.append((p, a, guard, effect, q))
        else:
            raise ParseError(f"line {lineno}: unknown directive {key!r}")
    if alphabet is None:
        raise ParseError("missing 'alphabet:' line")
    order = list(states) + initial + finals
    for p, _, _, _, q in trans:
        order += [p, q]
    try:
        return OneCounterMachine(alphabet, tuple(order), frozenset(initial), frozenset(finals),
                                 frozenset(trans))
    except PreconditionError as exc:
        raise ParseError(str(exc)) from exc
