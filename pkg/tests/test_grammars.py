import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copyshuffle import automata as fa
from copyshuffle import grammars as cfg
from copyshuffle import pcp
from copyshuffle.errors import ParseError, SizeLimitError
from copyshuffle.grammars import Cfg
from copyshuffle.words import EMPTY, Alphabet

from support import AB, W, all_words, pcp_instance, random_nfa

a, b = AB.symbols
E = cfg.palindrome_grammar(AB)

FIXTURES = {
    "E": E,
    "E2": cfg.mirror_k_grammar(AB, 2),
    "Estar": cfg.mirror_star_grammar(AB),
    "anbn": Cfg.build("S", [("S", (a, "S", b)), ("S", ())]),
    "dyck": Cfg.build("S", [("S", (a, "S", b, "S")), ("S", ())]),
    "unit-chain": Cfg.build("S", [("S", ("T",)), ("T", ("U",)), ("U", (a, "U")), ("U", (b,)), ("T", ())]),
    "L1": pcp.build_L1(pcp_instance(("ab", "ab"))),
}


def brute_palindromes(maxlen):
    return {w for w in all_words(AB, maxlen) if len(w) % 2 == 0 and w == w.reversed()}


def test_linear_flag():
    assert E.linear
    assert not cfg.mirror_k_grammar(AB, 2).linear
    assert not FIXTURES["dyck"].linear
    assert FIXTURES["anbn"].linear


def test_is_empty():
    assert cfg.is_empty(Cfg.build("S", [("S", (a, "S"))]))
    assert not cfg.is_empty(Cfg.build("S", [("S", (a,))]))
    assert not cfg.is_empty(pcp.build_L2(pcp_instance(("a", "b"))))


def test_intersect_regular():
    abba = fa.finite_language(AB, [W("abba")])
    ab = fa.finite_language(AB, [W("ab")])
    assert not cfg.is_empty(cfg.intersect_regular(E, abba))
    assert cfg.is_empty(cfg.intersect_regular(E, ab))
    assert cfg.intersect_regular(E, abba).linear


@settings(max_examples=40)
@given(st.integers(0, 10**9), st.sampled_from(sorted(FIXTURES)))
def test_intersection_is_pointwise(seed, name):
    G = FIXTURES[name]
    A = fa.with_alphabet(random_nfa(random.Random(seed)), G.terminals)
    I = cfg.intersect_regular(G, A)
    # linearity is read off the productions; non-linear ones may vanish in the product
    assert I.linear or not G.linear
    for w in all_words(AB, 6):
        assert cfg.membership(I, w) == (cfg.membership(G, w) and fa.accepts(A, w))


def test_intersection_with_everything_is_identity():
    everything = fa.universal(AB)
    I = cfg.intersect_regular(E, everything)
    for w in all_words(AB, 6):
        assert cfg.membership(I, w) == cfg.membership(E, w)


def test_membership_examples():
    assert cfg.membership(E, W("abba"))
    assert not cfg.membership(E, W("ab"))
    assert cfg.membership(E, EMPTY)
    assert cfg.membership(FIXTURES["L1"], W("#ab##ba#"))
    assert not cfg.membership(FIXTURES["L1"], W("#ab##ab#"))


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_membership_agrees_with_enumeration(name):
    G = FIXTURES[name]
    words = all_words(G.terminals, 6)
    listed = cfg.enumerate_words(G, 6)
    for w in words:
        assert cfg.membership(G, w) == (w in listed)
    assert all(cfg.membership(G, w) for w in listed)


def test_enumerate_examples():
    assert cfg.enumerate_words(E, 2) == {EMPTY, W("aa"), W("bb")}
    assert cfg.enumerate_words(Cfg.build("S", [("S", (a, "S"))]), 5) == frozenset()
    assert cfg.enumerate_words(Cfg.build("S", [("S", (a, b))]), 4) == {W("ab")}
    assert cfg.enumerate_words(E, 8) == brute_palindromes(8)
    with pytest.raises(SizeLimitError):
        cfg.enumerate_words(E, 17)


def test_unary_palindromes():
    unary = cfg.palindrome_grammar(Alphabet.of(["a"]))
    assert cfg.enumerate_words(unary, 4) == {EMPTY, W("aa"), W("aaaa")}


def test_mirror_grammars():
    assert cfg.membership(cfg.mirror_k_grammar(AB, 2), W("abbabaab"))
    star = FIXTURES["Estar"]
    for k in (1, 2, 3):
        for w in cfg.enumerate_words(cfg.mirror_k_grammar(AB, k), 8):
            assert cfg.membership(star, w)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_emptiness_matches_bounded_enumeration(name):
    G = FIXTURES[name]
    bound = min(16, 2 ** (len(G.nonterminals) + 1))
    assert cfg.is_empty(G) == (not cfg.enumerate_words(G, bound))


def test_shortest_word():
    assert cfg.shortest_word(E) == EMPTY
    assert cfg.shortest_word(cfg.palindrome_grammar(AB, nonempty=True)) == W("aa")
    assert cfg.shortest_word(Cfg.build("S", [("S", (a, "S"))])) is None
    assert cfg.shortest_word(FIXTURES["L1"]) == W("#ab##ba#")


def test_format_round_trip():
    for G in FIXTURES.values():
        text = cfg.format_grammar(G)
        again = cfg.parse_grammar(text)
        assert cfg.format_grammar(again) == text
        assert cfg.enumerate_words(again, 6) == cfg.enumerate_words(G, 6)


def test_parse_grammar():
    G = cfg.parse_grammar("start: S\nS -> a S ~a | T\nT -> b | _\n")
    assert G.linear
    assert cfg.membership(G, W("ab~a"))
    assert cfg.membership(G, W("a~a"))
    with pytest.raises(ParseError):
        cfg.parse_grammar("S -> a\n")
    with pytest.raises(ParseError):
        cfg.parse_grammar("start: S\nS -> a |\n")
    with pytest.raises(ParseError):
        cfg.parse_grammar("start: S\nwhat is this\n")
