"""Command-line front end.

Reports are ``key: value`` lines (or one JSON object with ``--json``).  The
exit status only says whether an answer was obtained; the truth value is in
the report.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import automata as fa
from . import counters
from . import decisions as dec
from . import grammars as cfg
from . import oracle
from . import pcp
from .automata import Gnfa, Nfa
from .counters import OneCounterMachine
from .errors import (
    CapacityError,
    IndeterminateError,
    ParseError,
    PreconditionError,
    SizeLimitError,
)
from .grammars import Cfg
from .words import Word

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_PRECONDITION = 2
EXIT_CAPACITY = 3

ENV_MAX_LEN = "COPYSHUFFLE_MAX_LEN"
ENV_CAPACITY = "COPYSHUFFLE_CAPACITY"
ENV_CANDIDATES = "COPYSHUFFLE_MAX_CANDIDATES"


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{name}={raw!r} is not an integer") from None


def _defaults() -> dict:
    return {
        "max_len": _env_int(ENV_MAX_LEN, 10),
        "capacity": _env_int(ENV_CAPACITY, 2**16),
        "max_candidates": _env_int(ENV_CANDIDATES, 200_000),
    }


# loading

def detect_kind(text: str) -> str:
    """One of 'grammar', 'pcp', 'machine', 'automaton'."""
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "->" in line:
            return "grammar"
        key = line.partition(":")[0].strip()
        if key in ("start", "terminals"):
            return "grammar"
        if key == "domain":
            return "pcp"
        if key == "trans" and len(line.partition(":")[2].split()) == 5:
            return "machine"
    return "automaton"


def parse_text(text: str):
    kind = detect_kind(text)
    if kind == "grammar":
        return cfg.parse_grammar(text)
    if kind == "pcp":
        return pcp.parse_pcp(text)
    if kind == "machine":
        return counters.parse_machine(text)
    return fa.parse_automaton(text)


def load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return parse_text(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def format_object(obj) -> str:
    if isinstance(obj, Cfg):
        return cfg.format_grammar(obj)
    if isinstance(obj, OneCounterMachine):
        return counters.format_machine(obj)
    if isinstance(obj, pcp.PcpInstance):
        return pcp.format_pcp(obj)
    return fa.format_automaton(obj)


def _regular(obj, path: str) -> Nfa:
    if isinstance(obj, Gnfa):
        return obj.expand()
    if isinstance(obj, Nfa):
        return obj
    raise PreconditionError(f"{path}: expected a finite automaton")


def _instance(obj, path: str) -> pcp.PcpInstance:
    if not isinstance(obj, pcp.PcpInstance):
        raise PreconditionError(f"{path}: expected a PCP instance")
    return obj


# output

def emit(report: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(report, sort_keys=True) + "\n")
        return
    for key, value in report.items():
        if isinstance(value, bool):
            value = str(value).lower()
        elif value is None:
            continue
        elif isinstance(value, (list, tuple)):
            if not value:
                continue
            value = " ".join(map(str, value))
        out.write(f"{key}: {value}\n")


def _decision_dict(report: dec.DecisionReport, extra: dict) -> dict:
    d = report.as_dict()
    d.update(extra)
    return d


# subcommands

DECIDE_KINDS = ("square", "power", "marked-copy", "reverse-copy", "mirror-k", "mirror-star",
                "squares-subset")


def cmd_decide(args) -> dict:
    objs = [load(p) for p in args.inputs]
    cap = args.capacity
    kind = args.kind
    if kind == "squares-subset":
        if len(objs) != 2:
            raise PreconditionError("squares-subset needs two files: P then R")
        P, R = (_regular(o, p) for o, p in zip(objs, args.inputs))
        report = dec.squares_subset(P, R, cap)
    else:
        if len(objs) != 1:
            raise PreconditionError(f"{kind} takes one automaton file")
        R = _regular(objs[0], args.inputs[0])
        if kind == "square":
            report = dec.has_power(R, 2, None, args.allow_empty, cap)
        elif kind == "power":
            P = _regular(load(args.p), args.p) if args.p else None
            report = dec.has_power(R, args.n, P, args.allow_empty, cap)
        elif kind == "marked-copy":
            report = dec.has_marked_copy(R, args.allow_empty, cap)
        elif kind == "reverse-copy":
            if args.method == "grammar":
                report = dec.has_reverse_copy_cfg(R, args.allow_empty)
            else:
                report = dec.has_reverse_copy(R, args.allow_empty, cap)
        elif kind == "mirror-k":
            if args.method == "grammar":
                report = dec.has_mirror_product_cfg(R, args.k)
            else:
                report = dec.has_mirror_product(R, args.k, cap)
        else:
            if args.method == "grammar":
                report = dec.has_mirror_star_cfg(R)
            else:
                report = dec.has_mirror_star(R, cap)
    d = _decision_dict(report, {"kind": kind, "capacity": cap})
    if not args.witness:
        d.pop("factors", None)
    return d


def cmd_scan(args) -> dict:
    L = load(args.input)
    if isinstance(L, (OneCounterMachine, pcp.PcpInstance)):
        raise PreconditionError(f"{args.input}: scan needs an automaton or a grammar")
    budget = oracle.SearchBudget(args.max_len, args.max_candidates)
    result = oracle.scan_for_form(L, args.form, budget, n=args.n, k=args.k,
                                  allow_empty=args.allow_empty, strategy=args.strategy)
    d = result.as_dict()
    budget_info = d.pop("budget")
    d["max_len"] = budget_info["max_len"]
    d["max_candidates"] = budget_info["max_candidates"]
    return d


BUILDS = ("L2", "L2-marked", "Ln", "Lomega", "Lsharp", "L1", "Lk", "overflow-automaton",
          "mc-complement-machine", "counter-inclusion-machine", "nth-root", "star-root",
          "mirror-grammar")


def build_object(construction: str, obj, path: str, n: int = 2, k: int = 1,
                 separator: bool = False, cap: int = 2**16):
    if construction in ("L2", "L2-marked", "Ln", "Lomega", "Lsharp", "L1", "Lk",
                        "overflow-automaton", "counter-inclusion-machine"):
        I = _instance(obj, path)
        if construction == "L2":
            return pcp.build_L2(I)
        if construction == "L2-marked":
            return pcp.build_L2_marked(I)
        if construction == "Ln":
            return pcp.build_Ln(I, n, separator=separator)
        if construction == "Lomega":
            return pcp.build_Lomega(I)
        if construction == "Lsharp":
            return pcp.build_Lsharp(I)
        if construction == "L1":
            return pcp.build_L1(I)
        if construction == "Lk":
            return pcp.build_Lk(I, k)
        if construction == "overflow-automaton":
            return pcp.marked_shuffle_automaton(I)
        return counters.counter_inclusion_machine(I.g, I.h)
    R = _regular(obj, path)
    if construction == "mc-complement-machine":
        return counters.complement_marked_copy_machine(R)
    if construction == "nth-root":
        return fa.normalized(dec.nth_root(R, n, cap))
    if construction == "star-root":
        return fa.normalized(dec.star_root(R, cap))
    if construction == "mirror-grammar":
        base = cfg.mirror_k_grammar(R.alphabet, k) if k else cfg.mirror_star_grammar(R.alphabet)
        return cfg.normalized(cfg.trim(cfg.intersect_regular(base, R)))
    raise PreconditionError(f"unknown construction {construction!r}")


def cmd_build(args) -> str:
    obj = load(args.input)
    built = build_object(args.construction, obj, args.input, n=args.n, k=args.k,
                         separator=args.separator, cap=args.capacity)
    text = format_object(built)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    return text


def cmd_pcp(args) -> dict:
    I = _instance(load(args.input), args.input)
    w = pcp.solve_bounded(I, args.max_len)
    d = {"solution": None if w is None else str(w), "max_len": args.max_len}
    if w is not None:
        d["image"] = str(I.g(w))
    else:
        d["result"] = "none up to bound"
        if all(len(I.g.images[a]) < len(I.h.images[a]) for a in I.domain) or \
                all(len(I.g.images[a]) > len(I.h.images[a]) for a in I.domain):
            d["note"] = "one morphism is strictly longer on every letter, so no solution exists"
    return d


def cmd_member(args) -> dict:
    obj = load(args.input)
    w = Word.parse(args.word)
    if isinstance(obj, Cfg):
        result = cfg.membership(obj, w)
    elif isinstance(obj, OneCounterMachine):
        result = counters.run(obj, w, args.step_cap)
    elif isinstance(obj, (Nfa, Gnfa)):
        result = fa.accepts(_regular(obj, args.input), w)
    else:
        raise PreconditionError(f"{args.input}: a PCP instance has no members")
    return {"word": str(w), "member": result}


def build_parser() -> argparse.ArgumentParser:
    d = _defaults()
    parser = argparse.ArgumentParser(
        prog="copyshuffle",
        description="Decide and search for copies, shuffles and mirrors in formal languages.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, budget=False):
        p.add_argument("--json", action="store_true", help="emit one JSON object")
        p.add_argument("--capacity", type=int, default=d["capacity"],
                       help="state cap for products and subset constructions")
        if budget:
            p.add_argument("--max-len", type=int, default=d["max_len"])
            p.add_argument("--max-candidates", type=int, default=d["max_candidates"])

    p = sub.add_parser("decide", help="run an exact decision procedure on a regular language")
    p.add_argument("kind", choices=DECIDE_KINDS)
    p.add_argument("inputs", nargs="+", help="automaton file (P then R for squares-subset)")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--p", help="automaton file restricting the root (power only)")
    p.add_argument("--allow-empty", action="store_true")
    p.add_argument("--witness", action="store_true", help="also print mirror factors")
    p.add_argument("--method", choices=("relation", "grammar"), default="relation")
    common(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("scan", help="bounded search for a member of a given form")
    p.add_argument("form", choices=[f.replace("_", "-") for f in oracle.FORMS])
    p.add_argument("input")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--allow-empty", action="store_true")
    p.add_argument("--strategy", choices=("members", "candidates"), default="members",
                   help="walk the members of the language, or the words of the form")
    common(p, budget=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("build", help="emit a constructed automaton, grammar or machine")
    p.add_argument("construction", choices=BUILDS)
    p.add_argument("input")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1, help="mirror-grammar: 0 means any number of factors")
    p.add_argument("--separator", action="store_true", help="Ln: put # before each tail block")
    p.add_argument("-o", "--output")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("pcp", help="bounded search for a PCP solution")
    p.add_argument("input")
    p.add_argument("--max-len", type=int, default=d["max_len"])
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pcp)

    p = sub.add_parser("member", help="membership of one word")
    p.add_argument("input")
    p.add_argument("word", help="word such as ab~a, or _ for the empty word")
    p.add_argument("--step-cap", type=int, default=counters.DEFAULT_STEP_CAP)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_member)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        result = args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (SizeLimitError, IndeterminateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    if isinstance(result, str):
        if not getattr(args, "output", None):
            sys.stdout.write(result)
    else:
        emit(result, args.json)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
