import io
import json

import pytest

from mixtree.cli import BROOM_CSV_HEADER, main
from mixtree.enumeration import EXTREMAL_CSV_HEADER
from conftest import FIG2_EDGES


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def p4(tmp_path):
    p = tmp_path / "p4.txt"
    p.write_text("0 1\n1 2\n2 3\n")
    return str(p)


def test_analyze_text(p4):
    code, out = run("analyze", p4)
    assert code == 0
    assert "t_mix = 19/6 (~3.16666" in out
    assert "z=0, z'=3" in out


def test_analyze_json(p4):
    code, out = run("analyze", p4, "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["t_mix"]["num"] == 19 and rec["t_mix"]["den"] == 6


def test_analyze_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n1 2\n2 0\n")
    assert run("analyze", str(bad))[0] == 2
    assert run("analyze", str(tmp_path / "missing.txt"))[0] == 2
    assert "HasCycleError" in capsys.readouterr().err


def test_broom(tmp_path):
    code, out = run("broom", "--n", "13", "--d", "5")
    assert code == 0
    assert "ell=5 r=4" in out and "115/6" in out
    # stdout is itself a readable edge list
    f = tmp_path / "b.txt"
    f.write_text(out)
    assert run("analyze", str(f))[1].count("115/6") >= 1
    assert run("broom", "--n", "6", "--d", "5", "--ell", "3")[0] == 2


def test_table():
    code, out = run("table", "--n-max", "6")
    lines = out.strip().splitlines()
    assert lines[0] == ",".join(BROOM_CSV_HEADER)
    assert len(lines) == 1 + 1 + 2 + 3
    assert all(l.endswith("true") for l in lines[1:])
    assert run("table", "--n-max", "3")[1].strip() == ",".join(BROOM_CSV_HEADER)


def test_verify():
    code, out = run("verify", "--n-max", "7")
    assert code == 0
    assert out.splitlines()[0] == ",".join(EXTREMAL_CSV_HEADER)
    assert run("verify", "--n-max", "7", "--d", "4")[1].count("\n") == 1 + 3
    assert run("verify", "--n-max", "11")[0] == 2
    assert run("verify", "--n-max", "13", "--long")[0] == 2


def test_verify_threads(monkeypatch):
    monkeypatch.setenv("MIXTREE_THREADS", "2")
    assert run("verify", "--n-max", "6") == run("verify", "--n-max", "6")


def test_evolve(tmp_path):
    src = tmp_path / "fig2.txt"
    src.write_text("".join(f"{a} {b}\n" for a, b in FIG2_EDGES))
    code, out = run("evolve", str(src))
    assert code == 0 and "115/6" in out and "149/6" in out
    dest = tmp_path / "cert.json"
    assert run("evolve", str(src), "--format", "json", "--out", str(dest)) == (0, "")
    assert len(json.loads(dest.read_text())["steps"]) == 6


def test_simulate(p4):
    a = run("simulate", p4, "--start", "0", "--trials", "2000", "--seed", "5", "--format", "json")
    b = run("simulate", p4, "--start", "0", "--trials", "2000", "--seed", "5", "--format", "json")
    assert a == b and a[0] == 0
    assert json.loads(a[1])["trials"] == 2000
    assert run("simulate", p4, "--start", "9")[0] == 2


def test_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["analyze"])
    assert e.value.code == 2
