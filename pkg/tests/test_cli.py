import json
import subprocess
import sys

import pytest

from copyshuffle.cli import EXIT_CAPACITY, EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, main

AB_STAR = "alphabet: a b\ninitial: 0\nfinal: 0\ntrans: 0 a 1\ntrans: 1 b 0\n"
CLASSIC = "domain: 1 2 3\n1: a | baa\n2: ab | aa\n3: bba | bb\n"


def finite(*words, alphabet="a b"):
    lines = [f"alphabet: {alphabet}", "initial: s", "final: t"]
    lines += [f"trans: s {w} t" for w in words]
    return "\n".join(lines) + "\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(text):
    return dict(line.split(": ", 1) for line in text.splitlines())


def test_decide_square(files, capsys):
    code, out, _ = run(capsys, "decide", "square", files("r.aut", AB_STAR))
    assert code == EXIT_OK
    got = report(out)
    assert (got["answer"], got["witness"], got["member"]) == ("true", "ab", "abab")


def test_decide_squares_subset(files, capsys):
    P = files("p.aut", finite("a", "b"))
    R = files("r.aut", finite("aa"))
    code, out, _ = run(capsys, "decide", "squares-subset", P, R)
    got = report(out)
    assert code == EXIT_OK and got["answer"] == "false" and got["witness"] == "b"


def test_decide_mirror_product(files, capsys):
    path = files("m.aut", finite("abbabaab"))
    code, out, _ = run(capsys, "decide", "mirror-k", path, "--k", "2", "--witness")
    got = report(out)
    assert code == EXIT_OK and got["answer"] == "true"
    assert got["factors"] == "ab ba"
    _, out, _ = run(capsys, "decide", "mirror-k", path, "--k", "2", "--method", "grammar")
    assert report(out)["answer"] == "true"


def test_decide_json(files, capsys):
    code, out, _ = run(capsys, "decide", "square", files("r.aut", finite("ab")), "--json")
    d = json.loads(out)
    assert code == EXIT_OK and d["answer"] is False and d["witness"] is None


def test_scan(files, capsys):
    code, out, _ = run(capsys, "scan", "square", files("r.aut", AB_STAR), "--max-len", "6")
    got = report(out)
    assert code == EXIT_OK and got["result"] == "yes" and got["witness"] == "ab"
    assert got["max_len"] == "6"
    _, out, _ = run(capsys, "scan", "palindrome", files("s.aut", finite("ab")))
    assert report(out)["result"] == "no_up_to_bound"


def test_scan_budget_from_environment(files, capsys, monkeypatch):
    monkeypatch.setenv("COPYSHUFFLE_MAX_LEN", "3")
    _, out, _ = run(capsys, "scan", "square", files("r.aut", finite("abab")))
    got = report(out)
    assert got["max_len"] == "3" and got["result"] == "no_up_to_bound"


def test_pcp(files, capsys):
    code, out, _ = run(capsys, "pcp", files("c.pcp", CLASSIC))
    got = report(out)
    assert code == EXIT_OK and got["solution"] == "3231" and got["image"] == "bbaabbbaa"
    _, out, _ = run(capsys, "pcp", files("u.pcp", "domain: 1\n1: a | aa\n"))
    got = report(out)
    assert got["result"] == "none up to bound" and "note" in got


def test_member_and_build(files, capsys, tmp_path):
    out_file = tmp_path / "l2.cfg"
    code, _, _ = run(capsys, "build", "L2", files("i.pcp", "domain: 1\n1: ab | ab\n"), "-o", out_file)
    assert code == EXIT_OK
    _, out, _ = run(capsys, "member", out_file, "ab1ab1")
    assert report(out) == {"word": "ab1ab1", "member": "true"}
    _, out, _ = run(capsys, "member", files("r.aut", AB_STAR), "_")
    assert report(out)["member"] == "true"


def test_exit_codes(files, capsys):
    code, _, err = run(capsys, "decide", "square", files("bad.aut", "alphabet: a\nbogus: x\n"))
    assert code == EXIT_PARSE and err.startswith("error:")
    assert run(capsys, "decide", "square", "/nonexistent/file")[0] == EXIT_PARSE
    pcp_file = files("c.pcp", CLASSIC)
    assert run(capsys, "decide", "square", pcp_file)[0] == EXIT_PRECONDITION
    assert run(capsys, "member", pcp_file, "1")[0] == EXIT_PRECONDITION
    assert run(capsys, "decide", "square", files("r.aut", AB_STAR), "--capacity", "1")[0] == EXIT_CAPACITY


def test_module_entry_point(files):
    path = files("r.aut", AB_STAR)
    proc = subprocess.run([sys.executable, "-m", "copyshuffle", "decide", "square", path],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "witness: ab" in proc.stdout
