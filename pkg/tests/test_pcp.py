from itertools import product

import pytest

from copyshuffle import grammars as cfg
from copyshuffle import pcp
from copyshuffle.errors import ParseError, PreconditionError
from copyshuffle.words import EMPTY, Word, shuffle_membership

from support import CLASSIC, SOLVABLE, UNSOLVABLE, W, all_words, length_unsolvable, pcp_instance

AB1 = pcp_instance(("ab", "ab"))


def brute_solution(I, maxlen):
    for n in range(1, maxlen + 1):
        for letters in product(I.domain.symbols, repeat=n):
            if I.is_solution(Word(letters)):
                return Word(letters)
    return None


def test_solve_bounded_examples():
    assert pcp.solve_bounded(AB1, 3) == W("1")
    assert pcp.solve_bounded(pcp_instance(("a", "aa")), 8) is None
    w = pcp.solve_bounded(CLASSIC, 6)
    assert w == W("3231")
    assert CLASSIC.g(w) == CLASSIC.h(w) == W("bbaabbbaa")


def test_solve_bounded_below_the_shortest_solution():
    assert pcp.solve_bounded(CLASSIC, 3) is None
    assert pcp.solve_bounded(CLASSIC, 0) is None


@pytest.mark.parametrize("name", sorted(SOLVABLE))
def test_solvable_fixtures(name):
    I, expected = SOLVABLE[name]
    assert pcp.solve_bounded(I, 6) == W(expected)
    assert brute_solution(I, len(expected)) == W(expected)


@pytest.mark.parametrize("name", sorted(UNSOLVABLE))
def test_unsolvable_fixtures(name):
    I = UNSOLVABLE[name]
    assert length_unsolvable(I)
    assert pcp.solve_bounded(I, 7) is None


def test_classic_matches_brute_force():
    assert brute_solution(CLASSIC, 4) == pcp.solve_bounded(CLASSIC, 4)


def test_overflow_automaton_examples():
    assert pcp.marked_shuffle_automaton(AB1).accepts(W("1~1"))
    A = pcp.marked_shuffle_automaton(pcp_instance(("a", "aa")))
    assert not A.accepts(W("1~1"))
    assert A.accepts(EMPTY)


@pytest.mark.parametrize("I", [AB1, CLASSIC, pcp_instance(("a", "ab"), ("ba", "a")), pcp_instance(("a", "aa"))],
                         ids=["ab=ab", "classic", "a/ab,ba/a", "a/aa"])
def test_overflow_automaton_language(I):
    A = pcp.marked_shuffle_automaton(I)
    for x in all_words(A.alphabet, 6):
        if not A.accepts(x):
            continue
        u = Word(s for s in x if not s.marked)
        z = Word(s.unmark() for s in x if s.marked)
        assert I.g(u) == I.h(z), str(x)


def test_overflow_automaton_contains_solution_shuffles():
    w = W("12")
    I = pcp_instance(("a", "ab"), ("ba", "a"))
    A = pcp.marked_shuffle_automaton(I)
    assert any(A.accepts(x) for x in all_words(A.alphabet, 4)
               if shuffle_membership(x, w, w.markall())[0])


def test_grammar_members():
    assert cfg.membership(pcp.build_L2(AB1), W("ab1ab1"))
    assert cfg.membership(pcp.build_L2_marked(AB1), W("ab1~a~b~1"))
    a1 = pcp_instance(("a", "a"))
    assert cfg.membership(pcp.build_Ln(a1, 3, separator=True), W("a1a1#a1"))
    assert cfg.membership(pcp.build_Ln(a1, 3), W("a1a1a1"))
    assert cfg.membership(pcp.build_Lomega(AB1), W("ab1ab1"))
    assert cfg.membership(pcp.build_Lsharp(AB1), W("$ab1#$ab1#"))
    assert cfg.membership(pcp.build_L1(AB1), W("#ab##ba#"))
    assert cfg.membership(pcp.build_Lk(AB1, 2), W("#ab##ba#cc"))


def test_sharp_member_is_a_self_shuffle():
    assert shuffle_membership(W("$ab1#$ab1#"), W("$ab1#"), W("$ab1#"))[0]


def test_unsolvable_grammars_hold_no_squares():
    I = pcp_instance(("a", "aa"))
    G = pcp.build_L2(I)
    assert not cfg.is_empty(G)
    for w in cfg.enumerate_words(G, 12):
        half = len(w) // 2
        assert len(w) % 2 or w[:half] != w[half:]


@pytest.mark.parametrize("build", [
    pcp.build_L2, pcp.build_L2_marked, pcp.build_Lomega, pcp.build_Lsharp, pcp.build_L1,
    lambda I: pcp.build_Ln(I, 3), lambda I: pcp.build_Ln(I, 3, separator=True), lambda I: pcp.build_Lk(I, 2),
], ids=["L2", "L2-marked", "Lomega", "Lsharp", "L1", "L3", "L3-sep", "Lk"])
def test_constructions_are_linear(build):
    for I in (AB1, CLASSIC):
        assert build(I).linear


def test_fresh_marker_required():
    clash = pcp_instance(("#", "#"))
    with pytest.raises(PreconditionError):
        pcp.build_L1(clash)


def test_disjoint_alphabets_required():
    overlap = pcp.PcpInstance.of({"a": ("a", "a")})
    with pytest.raises(PreconditionError):
        pcp.build_L2(overlap)


def test_erasing_morphisms_rejected():
    erasing = pcp.PcpInstance.of({"1": ("", "a")})
    with pytest.raises(PreconditionError):
        pcp.solve_bounded(erasing, 3)


def test_format_round_trip():
    text = pcp.format_pcp(CLASSIC)
    assert text.startswith("domain: 1 2 3\n")
    assert pcp.parse_pcp(text) == CLASSIC


def test_parse_errors():
    with pytest.raises(ParseError):
        pcp.parse_pcp("1: a | b\n")
    with pytest.raises(ParseError):
        pcp.parse_pcp("domain: 1\n1: a b\n")
    with pytest.raises(ParseError):
        pcp.parse_pcp("domain: 1 2\n1: a | b\n")
