"""Decision procedures for fixed forms in regular languages.

Every procedure returns a :class:`DecisionReport`.  Witness tie-breaking is
always shortest first, then lexicographic in the automaton's alphabet order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Optional

from . import automata as fa
from . import grammars as cfg
from .automata import Nfa
from .errors import CapacityError
from .words import EMPTY, Alphabet, Word

DEFAULT_CAP = fa.DEFAULT_PRODUCT_CAP


@dataclass(frozen=True)
class DecisionReport:
    answer: bool
    witness: Optional[Word] = None
    member: Optional[Word] = None
    method: str = ""
    factors: tuple = ()

    def lines(self) -> list:
        out = [f"answer: {str(self.answer).lower()}"]
        if self.witness is not None:
            out.append(f"witness: {self.witness}")
        if self.member is not None:
            out.append(f"member: {self.member}")
        if self.factors:
            out.append("factors: " + " ".join(str(f) for f in self.factors))
        out.append(f"method: {self.method}")
        return out

    def as_dict(self) -> dict:
        return {
            "answer": self.answer,
            "witness": None if self.witness is None else str(self.witness),
            "member": None if self.member is None else str(self.member),
            "method": self.method,
            "factors": [str(f) for f in self.factors],
        }


class TransitionRelation:
    """A state relation as a boolean matrix; rows are bitmasks over state indices."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(rows)

    @classmethod
    def identity(cls, size: int) -> TransitionRelation:
        return cls(1 << i for i in range(size))

    @classmethod
    def of_symbol(cls, A: Nfa, a) -> TransitionRelation:
        index = {q: i for i, q in enumerate(A.states)}
        rows = [0] * len(A.states)
        for p, b, q in A.transitions:
            if b == a:
                rows[index[p]] |= 1 << index[q]
        return cls(rows)

    @classmethod
    def of_word(cls, A: Nfa, w) -> TransitionRelation:
        A = fa.remove_epsilons(A)
        rel = cls.identity(len(A.states))
        for a in w:
            rel = rel @ cls.of_symbol(A, a)
        return rel

    def __matmul__(self, other: TransitionRelation) -> TransitionRelation:
        """Relational composition: first self, then other."""
        out = []
        for row in self.rows:
            acc = 0
            i = 0
            while row:
                if row & 1:
                    acc |= other.rows[i]
                row >>= 1
                i += 1
            out.append(acc)
        return TransitionRelation(out)

    def relates(self, p: int, q: int) -> bool:
        return bool(self.rows[p] >> q & 1)

    def powers(self):
        """(index, period, list of powers m^1..m^(index+period-1)) of the power sequence."""
        seen = {}
        seq = []
        current = self
        k = 1
        while current not in seen:
            seen[current] = k
            seq.append(current)
            current = current @ self
            k += 1
        index = seen[current]
        return index, k - index, seq

    def __eq__(self, other):
        return isinstance(other, TransitionRelation) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"TransitionRelation({self.rows})"


def _best(candidates, alphabet: Alphabet):
    candidates = [c for c in candidates if c is not None]
    if not candidates:
        return None
    return min(candidates, key=alphabet.sort_key)


def _base(P: Optional[Nfa], alphabet: Alphabet, allow_empty: bool) -> Nfa:
    base = fa.universal(alphabet) if P is None else fa.with_alphabet(P, alphabet)
    if not allow_empty:
        base = fa.trim(fa.product(base, fa.nonempty_words(alphabet)))
    return base


def has_power(R: Nfa, n: int, P: Optional[Nfa] = None, allow_empty: bool = False,
              cap: int = DEFAULT_CAP) -> DecisionReport:
    """Is there w in P (nonempty unless ``allow_empty``) with w^n in R?

    Searches state sequences q0 -> s1 -> ... -> sn with sn final and tests
    whether the fragments R[q0,s1], R[s1,s2], ... and P share a word, by
    iterated product.  Prefixes whose partial product is empty are pruned;
    pairwise fragment emptiness is memoized.
    """
    if n < 1:
        raise ValueError("n must be positive")
    alphabet = R.alphabet if P is None else R.alphabet.union(P.alphabet)
    R = fa.with_alphabet(fa.remove_epsilons(R), alphabet)
    base = _base(P, alphabet, allow_empty)
    pair_ok = {}

    def pair_nonempty(p, q):
        if (p, q) not in pair_ok:
            pair_ok[p, q] = not fa.is_empty(fa.product(fa.fragment(R, p, q), base, cap=cap))
        return pair_ok[p, q]

    found = []

    def search(current, prod, depth):
        if depth == n:
            if current in R.finals:
                found.append(fa.shortest_member(prod))
            return
        for nxt in R.states:
            if not pair_nonempty(current, nxt):
                continue
            step = fa.trim(fa.product(prod, fa.fragment(R, current, nxt), cap=cap))
            if not step.finals:
                continue
            search(nxt, step, depth + 1)

    for q0 in R.states:
        if q0 in R.initial:
            search(q0, fa.trim(base), 0)
    w = _best(found, alphabet)
    if w is None:
        return DecisionReport(False, method="fragment-product")
    return DecisionReport(True, w, w * n, "fragment-product")


def has_square(R: Nfa, cap: int = DEFAULT_CAP) -> DecisionReport:
    return has_power(R, 2, None, False, cap)


def nth_root(R: Nfa, n: int, cap: int = DEFAULT_CAP) -> Nfa:
    """Automaton for {w : w^n in R}.

    States pair a guessed tuple of midpoints (r1, ..., r_{n-1}) with the
    current positions of n tracks that all read w; track i starts at
    r_i (r_0 = an initial state).  Accept when every track i < n-1 sits on
    r_{i+1} and the last track sits on a final state.
    """
    if n < 1:
        raise ValueError("n must be positive")
    R = fa.remove_epsilons(R)
    delta = R._delta
    starts = []
    for q0 in R.states:
        if q0 not in R.initial:
            continue
        for guesses in _tuples(R.states, n - 1):
            starts.append((guesses, (q0,) + guesses))
    states = list(dict.fromkeys(starts))
    seen = set(states)
    todo = list(states)
    trans = set()
    while todo:
        state = todo.pop()
        guesses, current = state
        for a in R.alphabet:
            options = [delta.get((p, a), ()) for p in current]
            if not all(options):
                continue
            for nxt_tracks in _product(options):
                nxt = (guesses, nxt_tracks)
                trans.add((state, a, nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    states.append(nxt)
                    todo.append(nxt)
                    if len(states) > cap:
                        raise CapacityError(f"{n}-th root", cap)
    finals = {s for s in states
              if s[1][:-1] == s[0] and s[1][-1] in R.finals}
    return fa.trim(Nfa(R.alphabet, tuple(states), frozenset(starts), frozenset(finals), frozenset(trans)))


def _tuples(items, k):
    if k == 0:
        yield ()
        return
    for head in items:
        for rest in _tuples(items, k - 1):
            yield (head,) + rest


def _product(options):
    result = [()]
    for opt in options:
        result = [r + (x,) for r in result for x in opt]
    return result


def transition_monoid(R: Nfa, cap: int = DEFAULT_CAP):
    """Transition monoid of the determinized R.

    Returns (D, elements, step) where D is the complete DFA, ``elements``
    lists the reachable relations (identity first) and ``step[(m, a)]`` is
    m followed by a.
    """
    D = fa.determinize(R, cap)
    letters = {a: TransitionRelation.of_symbol(D, a) for a in D.alphabet}
    identity = TransitionRelation.identity(len(D.states))
    elements = [identity]
    seen = {identity}
    step = {}
    i = 0
    while i < len(elements):
        m = elements[i]
        i += 1
        for a in D.alphabet:
            nxt = m @ letters[a]
            step[m, a] = nxt
            if nxt not in seen:
                seen.add(nxt)
                elements.append(nxt)
                if len(elements) > cap:
                    raise CapacityError("transition monoid", cap)
    return D, elements, step


def star_root(R: Nfa, cap: int = DEFAULT_CAP) -> Nfa:
    """Automaton for {w : w^n in R for some n >= 2} via the transition monoid.

    An element m is accepting when the initial state is related to a final
    state.  m is marked when some power m^k, k >= 2, is accepting; the power
    sequence is eventually periodic, so scanning up to index + period
    suffices.  The monoid automaton accepts exactly the words whose relation
    is marked.
    """
    D, elements, step = transition_monoid(R, cap)
    q0 = D.states.index(next(iter(D.initial)))
    final_mask = 0
    for i, q in enumerate(D.states):
        if q in D.finals:
            final_mask |= 1 << i

    def accepting(m):
        return bool(m.rows[q0] & final_mask)

    marked = set()
    for m in elements:
        index, period, seq = m.powers()
        # seq holds m^1 .. m^(index+period-1); every later power repeats one of them,
        # and m^1 itself recurs as m^(1+period) when the sequence is purely periodic
        candidates = seq if index == 1 else seq[1:]
        if any(accepting(p) for p in candidates):
            marked.add(m)
    names = {m: i for i, m in enumerate(elements)}
    trans = frozenset((names[m], a, names[step[m, a]]) for m in elements for a in D.alphabet)
    return fa.trim(Nfa(D.alphabet, tuple(range(len(elements))), frozenset({0}),
                       frozenset(names[m] for m in marked), trans))


def squares_subset(P: Nfa, R: Nfa, cap: int = DEFAULT_CAP) -> DecisionReport:
    """Is {ww : w in P} a subset of R?  Decided as "no square of P in R's complement".

    On a negative answer ``witness`` is a counterexample w (ww not in R).
    """
    alphabet = R.alphabet.union(P.alphabet)
    comp = fa.complement(R, cap, alphabet)
    found = has_power(comp, 2, P, allow_empty=True, cap=cap)
    if found.answer:
        return DecisionReport(False, found.witness, found.member, "complement-square")
    return DecisionReport(True, method="complement-square")


def has_marked_copy(R: Nfa, allow_empty: bool = False, cap: int = DEFAULT_CAP) -> DecisionReport:
    """Is there w with w w̄ in R?

    A accepts R ∩ Σ*Σ̄*, B is A with marking flipped; look for q0 -w-> j in A
    and j -w-> n (final) in B with w unmarked.
    """
    alphabet = R.alphabet.marking_closure()
    R = fa.with_alphabet(R, alphabet)
    A = fa.trim(fa.product(R, fa.marked_shape(alphabet), cap=cap))
    if not A.finals:
        return DecisionReport(False, method="marked-fragments")
    A = fa.normalized(fa.with_alphabet(A, alphabet))
    B = fa.flip_marking(A)
    plain = _base(fa.universal(alphabet, alphabet.unmarked()), alphabet, allow_empty)
    found = []
    for q0 in A.initial:
        left_all = fa.trim(fa.product(plain, A, cap=cap))
        for j in A.states:
            left = fa.trim(fa.product(fa.fragment(A, q0, j), plain, cap=cap))
            if not left.finals:
                continue
            for f in A.finals:
                both = fa.product(left, fa.fragment(B, j, f), cap=cap)
                found.append(fa.shortest_member(both))
        del left_all
    w = _best(found, alphabet)
    if w is None:
        return DecisionReport(False, method="marked-fragments")
    return DecisionReport(True, w, w + w.markall(), "marked-fragments")


def mirror_relation(R: Nfa, nonempty: bool = False, cap: int = DEFAULT_CAP) -> dict:
    """Map (p, q) -> shortest w with p -w-> r -w^r-> q for some state r.

    For each triple (p, r, q) the fragment R[p, r] is intersected with the
    reversal of R[r, q]; w^r leads from r to q iff w is in that reversal.
    """
    R = fa.remove_epsilons(R)
    base = fa.nonempty_words(R.alphabet) if nonempty else None
    rel = {}
    for p in R.states:
        for q in R.states:
            found = []
            for r in R.states:
                both = fa.product(fa.fragment(R, p, r), fa.reverse(fa.fragment(R, r, q)), cap=cap)
                if base is not None:
                    both = fa.product(both, base, cap=cap)
                found.append(fa.shortest_member(both))
            w = _best(found, R.alphabet)
            if w is not None:
                rel[p, q] = w
    return rel


def has_reverse_copy(R: Nfa, allow_empty: bool = False, cap: int = DEFAULT_CAP) -> DecisionReport:
    """Is there w with w w^r in R?  Pair-relation method."""
    R = fa.remove_epsilons(R)
    rel = mirror_relation(R, nonempty=not allow_empty, cap=cap)
    found = [rel.get((q0, f)) for q0 in R.initial for f in R.finals]
    w = _best(found, R.alphabet)
    if w is None:
        return DecisionReport(False, method="mirror-relation")
    return DecisionReport(True, w, w + w.reversed(), "mirror-relation", (w,))


def _grammar_report(G, method) -> DecisionReport:
    w = cfg.shortest_word(G)
    return DecisionReport(w is not None, w, w, method)


def has_reverse_copy_cfg(R: Nfa, allow_empty: bool = False) -> DecisionReport:
    """Same question via emptiness of (even palindromes) ∩ R."""
    G = cfg.intersect_regular(cfg.palindrome_grammar(R.alphabet, nonempty=not allow_empty), R)
    report = _grammar_report(G, "palindrome-grammar")
    if report.answer:
        half = report.member[: len(report.member) // 2]
        return DecisionReport(True, half, report.member, report.method, (half,))
    return report


def _mirror_member(factors) -> Word:
    out = EMPTY
    for w in factors:
        out = out + w + w.reversed()
    return out


def has_mirror_product(R: Nfa, k: int, cap: int = DEFAULT_CAP) -> DecisionReport:
    """Is some w1 w1^r ... wk wk^r in R (factors may be empty)?

    k-fold composition of the mirror relation, keeping for each reached state
    the (length, lexicographic) least member prefix.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    R = fa.remove_epsilons(R)
    rel = mirror_relation(R, cap=cap)
    key = R.alphabet.sort_key
    layer = {q0: () for q0 in R.initial}
    for _ in range(k):
        nxt = {}
        for p, factors in layer.items():
            for (s, t), w in rel.items():
                if s != p:
                    continue
                cand = factors + (w,)
                if t not in nxt or key(_mirror_member(cand)) < key(_mirror_member(nxt[t])):
                    nxt[t] = cand
        layer = nxt
    best = [layer[f] for f in R.finals if f in layer]
    if not best:
        return DecisionReport(False, method="mirror-relation")
    factors = min(best, key=lambda fs: key(_mirror_member(fs)))
    member = _mirror_member(factors)
    return DecisionReport(True, member, member, "mirror-relation", factors)


def has_mirror_star(R: Nfa, cap: int = DEFAULT_CAP) -> DecisionReport:
    """Is some w1 w1^r ... wk wk^r in R for some k >= 1?

    The mirror relation is reflexive (w = ε), so this is reachability from an
    initial to a final state in its graph; a best-first search returns the
    least member.
    """
    R = fa.remove_epsilons(R)
    rel = mirror_relation(R, cap=cap)
    key = R.alphabet.sort_key
    out = {}
    for (s, t), w in rel.items():
        if s != t or w:
            out.setdefault(s, []).append((t, w))
    heap = []
    order = {q: i for i, q in enumerate(R.states)}
    for q0 in R.initial:
        heapq.heappush(heap, (key(EMPTY), order[q0], (), q0))
    done = set()
    while heap:
        _, _, factors, q = heapq.heappop(heap)
        if q in done:
            continue
        done.add(q)
        if q in R.finals:
            factors = factors or (EMPTY,)
            member = _mirror_member(factors)
            return DecisionReport(True, member, member, "mirror-relation", factors)
        for t, w in out.get(q, ()):
            if t not in done:
                cand = factors + (w,)
                heapq.heappush(heap, (key(_mirror_member(cand)), order[t], cand, t))
    return DecisionReport(False, method="mirror-relation")


def has_mirror_product_cfg(R: Nfa, k: int) -> DecisionReport:
    G = cfg.intersect_regular(cfg.mirror_k_grammar(R.alphabet, k), R)
    return _grammar_report(G, "mirror-grammar")


def has_mirror_star_cfg(R: Nfa) -> DecisionReport:
    G = cfg.intersect_regular(cfg.mirror_star_grammar(R.alphabet), R)
    return _grammar_report(G, "mirror-grammar")
