"""Shared fixtures: random automata, PCP instances and brute-force helpers."""

import random
from itertools import product

from copyshuffle import automata as fa
from copyshuffle.automata import Nfa
from copyshuffle.pcp import PcpInstance
from copyshuffle.words import Alphabet, Word

AB = Alphabet.of(["a", "b"])
AB_MARKED = Alphabet.of(["a", "b", "~a", "~b"])


def W(text):
    return Word.parse(text)


def nfa(alphabet, transitions, initial=(0,), finals=(), states=()):
    return Nfa.build(alphabet, [(p, Word.parse(a)[0], q) for p, a, q in transitions],
                     initial, finals, states)


def random_nfa(rng, alphabet=AB, max_states=4, density=0.3):
    size = rng.randint(1, max_states)
    states = tuple(range(size))
    trans = [(p, a, q) for p in states for a in alphabet for q in states if rng.random() < density]
    finals = [q for q in states if rng.random() < 0.4]
    return Nfa.build(alphabet, trans, [0], finals, states)


def population(seed, count, **kw):
    rng = random.Random(seed)
    return [random_nfa(rng, **kw) for _ in range(count)]


def all_words(alphabet, maxlen):
    return list(fa.words_up_to(alphabet, maxlen))


def brute_interleavings(u, v):
    """Interleavings by choosing which positions hold u's letters."""
    n = len(u) + len(v)
    out = set()
    for mask in product((0, 1), repeat=n):
        if sum(mask) != len(u):
            continue
        it_u, it_v = iter(u), iter(v)
        out.add(Word(next(it_u) if bit else next(it_v) for bit in mask))
    return out


def pcp_instance(*pairs):
    return PcpInstance.of({str(i + 1): p for i, p in enumerate(pairs)})


# solvable instances, shortest solution length 1, 1, 2, 2, 3
SOLVABLE = {
    "ab=ab": (pcp_instance(("ab", "ab")), "1"),
    "a=a,ab/b": (pcp_instance(("a", "a"), ("ab", "b")), "1"),
    "ab/a,b/bb": (pcp_instance(("ab", "a"), ("b", "bb")), "12"),
    "a/ab,ba/a": (pcp_instance(("a", "ab"), ("ba", "a")), "12"),
    "a/aa,aaa/a": (pcp_instance(("a", "aa"), ("aaa", "a")), "112"),
}

# unsolvable by length: one morphism is strictly longer on every letter
UNSOLVABLE = {
    "a/aa": pcp_instance(("a", "aa")),
    "a/ab,b/ba": pcp_instance(("a", "ab"), ("b", "ba")),
    "ab/a,ba/b": pcp_instance(("ab", "a"), ("ba", "b")),
    "a/bb,b/aa": pcp_instance(("a", "bb"), ("b", "aa")),
    "ab/aab,b/bba": pcp_instance(("ab", "aab"), ("b", "bba")),
}

CLASSIC = pcp_instance(("a", "baa"), ("ab", "aa"), ("bba", "bb"))


def length_unsolvable(I):
    longer = [len(I.g.images[a]) > len(I.h.images[a]) for a in I.domain]
    shorter = [len(I.g.images[a]) < len(I.h.images[a]) for a in I.domain]
    return all(longer) or all(shorter)
