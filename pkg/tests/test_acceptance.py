"""Acceptance criteria.  Each test prints one PASS/FAIL line (visible with -s or in -v logs)."""

import re
import time
from itertools import combinations

import pytest

from copyshuffle import automata as fa
from copyshuffle import counters
from copyshuffle import decisions as dec
from copyshuffle import grammars as cfg
from copyshuffle import oracle
from copyshuffle import pcp
from copyshuffle.cli import format_object, parse_text
from copyshuffle.cli import main as cli_main
from copyshuffle.words import Word, self_shuffle_check, shuffle_membership, shuffle_set

from support import AB, AB_MARKED, SOLVABLE, UNSOLVABLE, W, all_words, length_unsolvable, population

pytestmark = pytest.mark.acceptance


def report(number, title, ok, detail=""):
    line = f"criterion {number} [{title}]: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line)
    return ok


POPULATION = population(seed=20240601, count=200)
MARKED_POPULATION = population(seed=777, count=200, alphabet=AB_MARKED, density=0.2)


def test_criterion_1_power_decisions_match_enumeration():
    start = time.perf_counter()
    disagreements = []
    for i, R in enumerate(POPULATION):
        for n in (2, 3):
            exact = dec.has_power(R, n)
            brute = oracle.relation_power_search(R, n, maxlen=16 ** 2)
            if exact.answer != (brute is not None) or exact.witness != brute:
                disagreements.append((i, n, exact.witness, brute))
            if exact.answer:
                assert fa.accepts(R, exact.member)
    elapsed = time.perf_counter() - start
    ok = not disagreements and elapsed < 60
    report(1, "powers", ok, f"{len(disagreements)} disagreements, {elapsed:.1f}s")
    assert not disagreements
    assert elapsed < 60


def test_criterion_2_roots_match_brute_force():
    mismatches = []
    for i, R in enumerate(POPULATION):
        for n in (2, 3):
            got = {w for w in fa.members_up_to(dec.nth_root(R, n), 5)}
            if got != oracle.root_set(R, n, 5):
                mismatches.append((i, n))
        got = {w for w in fa.members_up_to(dec.star_root(R), 5)}
        if got != oracle.star_root_set(R, 5):
            mismatches.append((i, "*"))
    report(2, "roots", not mismatches, f"{len(mismatches)} mismatches")
    assert not mismatches


def test_criterion_3_marked_and_reverse_copies():
    bad = []
    for i, R in enumerate(MARKED_POPULATION):
        exact = dec.has_marked_copy(R)
        if exact.witness != oracle.marked_copy_search(R):
            bad.append((i, "marked"))
        relation = dec.has_reverse_copy(R)
        if relation.witness != oracle.reverse_copy_search(R):
            bad.append((i, "reverse-vs-enumeration"))
        grammar = dec.has_reverse_copy_cfg(R)
        if (relation.answer, relation.witness) != (grammar.answer, grammar.witness):
            bad.append((i, "relation-vs-grammar"))
    report(3, "marked/reverse copies", not bad, f"{len(bad)} disagreements")
    assert not bad


def test_criterion_4_mirror_products_match_grammar_emptiness():
    bad = []
    for i, R in enumerate(POPULATION):
        for k in (1, 2, 3):
            grammar_nonempty = not cfg.is_empty(cfg.intersect_regular(cfg.mirror_k_grammar(R.alphabet, k), R))
            if dec.has_mirror_product(R, k).answer != grammar_nonempty:
                bad.append((i, k))
        star_nonempty = not cfg.is_empty(cfg.intersect_regular(cfg.mirror_star_grammar(R.alphabet), R))
        if dec.has_mirror_star(R).answer != star_nonempty:
            bad.append((i, "*"))
    report(4, "mirror products", not bad, f"{len(bad)} disagreements")
    assert not bad


def _reduction_scans(I, bounds):
    """Bounded scans for every reduction; True where a witness turned up."""
    def scan(L, form, key, **kw):
        return oracle.scan_for_form(L, form, oracle.SearchBudget(bounds[key], 10**7), **kw).found

    return {
        "square in L2": scan(pcp.build_L2(I), "square", "copy"),
        "marked copy in marked L2": scan(pcp.build_L2_marked(I), "marked_copy", "copy"),
        "cube in L3": scan(pcp.build_Ln(I, 3), "power", "cube", n=3, strategy="candidates"),
        "self-shuffle in Lsharp": scan(pcp.build_Lsharp(I), "self_shuffle", "sharp"),
        "reverse copy in L1": scan(pcp.build_L1(I), "reverse_copy", "mirror"),
        "palindrome in L1": scan(pcp.build_L1(I), "palindrome", "mirror"),
        "marked shuffle in overflow automaton": scan(pcp.marked_shuffle_automaton(I), "marked_shuffle", "overflow"),
    }


def test_criterion_5_reduction_equivalences():
    failures = []
    for name, (I, solution) in SOLVABLE.items():
        w = Word.parse(solution)
        assert I.is_solution(w) and pcp.solve_bounded(I, 4) == w
        m, k = len(I.g(w)), len(w)
        bounds = {"copy": 2 * (m + k), "cube": 3 * (m + k), "sharp": 2 * (m + k) + 4,
                  "mirror": 2 * m + 4, "overflow": 2 * k}
        for what, found in _reduction_scans(I, bounds).items():
            if not found:
                failures.append((name, what, "missed"))
    test_bounds = {"copy": 14, "cube": 15, "sharp": 16, "mirror": 16, "overflow": 10}
    for name, I in UNSOLVABLE.items():
        assert length_unsolvable(I)
        for what, found in _reduction_scans(I, test_bounds).items():
            if found:
                failures.append((name, what, "spurious"))
    report(5, "reductions", not failures,
           f"{len(SOLVABLE)} solvable, {len(UNSOLVABLE)} unsolvable, {len(failures)} failures")
    assert not failures


def _is_marked_copy(x, P):
    if len(x) % 2:
        return False
    w = x[: len(x) // 2]
    return all(not s.marked for s in w) and x == w + w.markall() and fa.accepts(P, w)


def _inclusion_predicate(y, I, sharp):
    """(1) y is not of the form u#v# with u, v over the domain, or (2) it is and u != v or g(u) != h(v)."""
    parts = str(y).split(str(sharp))
    if len(parts) != 3 or parts[2] != "":
        return True
    u, v = Word.parse(parts[0]), Word.parse(parts[1])
    return u != v or I.g(u) != I.h(v)


def test_criterion_6_counter_machines():
    start = time.perf_counter()
    bad = []
    a_plus = fa.nonempty_words(AB, [AB.symbols[0]])
    ab_star = fa.Nfa.build(AB, [(0, AB.symbols[0], 1), (1, AB.symbols[1], 0)], [0], [0])
    for label, P in (("sigma*", fa.universal(AB)), ("a+", a_plus), ("(ab)*", ab_star)):
        M = counters.complement_marked_copy_machine(P)
        for x in all_words(AB_MARKED, 8):
            if counters.run(M, x) != (not _is_marked_copy(x, P)):
                bad.append((label, str(x)))
    instances = [I for I, _ in SOLVABLE.values()][:3] + list(UNSOLVABLE.values())[:3]
    for I in instances:
        M = counters.counter_inclusion_machine(I.g, I.h)
        sharp = next(s for s in M.alphabet if s not in I.domain)
        for y in all_words(M.alphabet, 8):
            if counters.run(M, y) != _inclusion_predicate(y, I, sharp):
                bad.append((pcp.format_pcp(I), str(y)))
        for u in all_words(I.domain, 4):
            if not u:
                continue
            square = u + Word((sharp,)) + u + Word((sharp,))
            if counters.run(M, square) == (I.g(u) == I.h(u)):
                bad.append((pcp.format_pcp(I), "square " + str(u)))
    elapsed = time.perf_counter() - start
    report(6, "counter machines", not bad and elapsed < 120, f"{len(bad)} mismatches, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 120


def test_criterion_7_shuffle_dynamic_programming():
    bad = []
    # words of each length grouped by number of a's: only these can be interleavings
    by_count = {}
    for length in range(13):
        for k in range(length + 1):
            by_count[length, k] = [
                Word(AB.symbols[0] if i in pos else AB.symbols[1] for i in range(length))
                for pos in map(set, combinations(range(length), k))]
    a = AB.symbols[0]
    for u in all_words(AB, 6):
        for v in all_words(AB, 6):
            members = shuffle_set(u, v)
            for x in by_count[len(u) + len(v), u.count(a) + v.count(a)]:
                ok, cert = shuffle_membership(x, u, v)
                if ok != (x in members):
                    bad.append((str(x), str(u), str(v)))
                elif ok and Word(x[i] for i in sorted(cert)) != u:
                    bad.append((str(x), str(u), str(v), "certificate"))
            stray = u + v + Word((a,))
            if shuffle_membership(stray, u, v)[0]:
                bad.append((str(stray), str(u), str(v), "length"))
    for w in all_words(AB, 6):
        for x in shuffle_set(w, w.markall()):
            if self_shuffle_check(x, "marked", allow_empty=True) != w:
                bad.append((str(x), "marked"))
    report(7, "shuffle DP", not bad, f"{len(bad)} mismatches")
    assert not bad


def test_criterion_8_non_closure_fixtures():
    bad = []
    a = lambda n: "a" * n  # noqa: E731
    b = lambda n: "b" * n  # noqa: E731
    c = lambda n: "c" * n  # noqa: E731
    r = range(1, 4)

    def matching(words, pattern):
        return {str(x) for x in words if re.fullmatch(pattern, str(x))}

    L1 = [W(a(n) + b(n)) for n in r]
    L2 = [W(c(m) + a(m)) for m in r]
    got = matching(oracle.shuffle_of_sets(L1, L2), "a*c*b*a*")
    if got != {a(n) + c(m) + b(n) + a(m) for n in r for m in r}:
        bad.append("anbn shuffle cmam")

    K1 = [W(a(n) + "b" + a(n)) for n in r]
    K2 = [W(b(m) + "a" + b(m)) for m in r]
    got = matching(oracle.shuffle_of_sets(K1, K2), "a*b*a*b*")
    if got != {a(m) + b(n + 1) + a(m + 1) + b(n) for m in r for n in r}:
        bad.append("binary shuffle example")

    P = [W(a(n) + b(m)) for n in r for m in r]
    got = matching(oracle.mirror_shuffle_set(P), "a*b*a*")
    if got != {a(n) + b(2 * m) + a(n) for n in r for m in r}:
        bad.append("M_P for a+b+")

    P = [W(a(n) + b(n)) for n in r]
    got = matching(oracle.mirror_shuffle_set(P), "a*b*a*")
    if got != {a(n) + b(2 * n) + a(n) for n in r}:
        bad.append("M_L for anbn")

    # the palindrome language from the mirror decisions
    E = cfg.palindrome_grammar(AB)
    if cfg.enumerate_words(E, 4) != {w for w in all_words(AB, 4) if len(w) % 2 == 0 and w == w.reversed()}:
        bad.append("E")
    report(8, "fixtures", not bad, ", ".join(bad) or "all members present")
    assert not bad


def _run_cli(capsys, *argv):
    code = cli_main([str(x) for x in argv])
    out = capsys.readouterr().out
    return code, out


def test_criterion_9_cli_round_trip(tmp_path, capsys):
    bad = []
    solvable, _ = SOLVABLE["ab/a,b/bb"]
    unsolvable = UNSOLVABLE["a/ab,b/ba"]
    pcp_file = tmp_path / "solvable.pcp"
    pcp_file.write_text(pcp.format_pcp(solvable))
    bad_file = tmp_path / "unsolvable.pcp"
    bad_file.write_text(pcp.format_pcp(unsolvable))
    aa = tmp_path / "aa.fa"
    aa.write_text("alphabet: a\nstates: p q\ninitial: p\nfinal: p\ntrans: p a q\ntrans: q a p\n")

    jobs = [(c, pcp_file, []) for c in ("L2", "L2-marked", "Ln", "Lomega", "Lsharp", "L1", "Lk",
                                        "overflow-automaton", "counter-inclusion-machine")]
    jobs += [("Ln", pcp_file, ["--n", "3", "--separator"]), ("Lk", pcp_file, ["--k", "3"])]
    jobs += [(c, aa, []) for c in ("mc-complement-machine", "nth-root", "star-root", "mirror-grammar")]
    jobs += [("mirror-grammar", aa, ["--k", "0"])]
    for construction, source, flags in jobs:
        out_file = tmp_path / f"{construction}{len(flags)}.out"
        code, _ = _run_cli(capsys, "build", construction, source, "-o", out_file, *flags)
        text = out_file.read_text()
        again = parse_text(text)
        code2, printed = _run_cli(capsys, "build", construction, source, *flags)
        if code or code2 or printed != text:
            bad.append((construction, "rebuild differs"))
        if format_object(again) != text:
            bad.append((construction, "round trip"))

    root = tmp_path / "root.fa"
    _run_cli(capsys, "build", "nth-root", aa, "--n", "2", "-o", root)
    code, out = _run_cli(capsys, "member", root, "aaa")
    if "member: true" not in out:
        bad.append(("nth-root", "aaa"))

    results = {}
    for label, source in (("solvable", pcp_file), ("unsolvable", bad_file)):
        grammar = tmp_path / f"{label}.g"
        _run_cli(capsys, "build", "L2", source, "-o", grammar)
        first = _run_cli(capsys, "scan", "square", grammar, "--max-len", "14")
        second = _run_cli(capsys, "scan", "square", grammar, "--max-len", "14")
        if first != second:
            bad.append((label, "scan not reproducible"))
        results[label] = first[1]
    if "result: yes" not in results["solvable"] or "member: abb21abb21" not in results["solvable"]:
        bad.append(("solvable", results["solvable"]))
    if "result: no_up_to_bound" not in results["unsolvable"]:
        bad.append(("unsolvable", results["unsolvable"]))
    report(9, "CLI round trip", not bad, f"{len(jobs)} builds")
    assert not bad
