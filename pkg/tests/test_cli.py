import subprocess
import sys

import pytest

from homfill.builders.basic import torus
from homfill.cli import EXIT_BUDGET, EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, main
from homfill.complex import Chain, boundary
from homfill.fileio import dumps_chain
from homfill.rings import Z


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err
    return _run


@pytest.fixture
def k3(tmp_path, run):
    path = tmp_path / "k3.txt"
    assert run("build", "kq", 3, "-o", path)[0] == EXIT_OK
    return path


def test_homology_row(tmp_path, run):
    path = tmp_path / "k5.txt"
    run("build", "kq", 5, "-o", path)
    code, out, _ = run("homology", path, "--ring", "Z", "--degree", 1)
    assert code == EXIT_OK and out == "H1 = Z/5\n"
    code, out, _ = run("homology", path, "--ring", "mod:2")
    assert out.splitlines()[2] == "H1,0"


def test_fill_mod2_core_loop(tmp_path, run, k3):
    chain = tmp_path / "core.txt"
    chain.write_text("1 Z {e0: 1, e1: 1, e2: 1, e3: 1}\n")
    code, out, _ = run("fill", k3, chain, "--ring", "mod:2")
    rec = dict(line.split(": ", 1) for line in out.splitlines())
    assert code == EXIT_OK and rec["status"] == "Optimal" and rec["mass"] == "1"
    code, out, _ = run("fill", k3, chain, "--ring", "Z")
    assert "status: Unfillable" in out
    code, out, _ = run("fill", k3, chain, "--ring", "scaled:3")
    assert "mass: 1/3" in out


def test_exit_codes(tmp_path, run, k3):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    code, _, err = run("homology", empty)
    assert code == EXIT_PARSE and "parse error" in err
    assert run("homology", k3, "--ring", "mod:4")[0] == EXIT_PARSE
    assert run("homology", tmp_path / "missing.txt")[0] == EXIT_PARSE
    bad = tmp_path / "bad.txt"
    bad.write_text("1 Z {e0: 1}\n")
    assert run("fill", k3, bad)[0] == EXIT_PRECONDITION
    assert run("fill", k3, bad, "--budget-nodes", 0)[0] == EXIT_PARSE


def test_budget_exit_code(tmp_path, run):
    path = tmp_path / "t.txt"
    run("build", "grid", "torus", 4, "-o", path)
    chain = tmp_path / "c.txt"
    X = torus(4, 4)
    signs = {c: (1 if i % 3 else -1) for i, c in enumerate(X.ids(2))}
    chain.write_text(dumps_chain(boundary(Chain(X, 2, Z, signs))))
    code, out, _ = run("fill", path, chain, "--budget-nodes", 1)
    assert code in (EXIT_OK, EXIT_BUDGET)
    if code == EXIT_BUDGET:
        assert "status: BudgetExceeded" in out


def test_roundtrip(tmp_path, run, k3):
    assert run("roundtrip", k3)[1] == "true\n"
    lines = k3.read_text().splitlines()
    head = [ln for ln in lines if ln.split()[0].endswith(":")]
    body = [ln for ln in lines if ln not in head]
    permuted = tmp_path / "perm.txt"
    permuted.write_text("\n".join(head + body[::-1]) + "\n")
    canon = tmp_path / "canon.txt"
    assert run("roundtrip", permuted, "--write", canon)[1] == "true\n"
    assert canon.read_text() == k3.read_text()
    truncated = tmp_path / "trunc.txt"
    truncated.write_text("\n".join(lines[:-1]) + "\nD 2 [(e0, 3\n")
    code, _, err = run("roundtrip", truncated)
    assert code == EXIT_PARSE and f"line {len(lines)}" in err


def test_builders(tmp_path, run):
    flag = tmp_path / "y.txt"
    flag.write_text("vertex x\nvertex y\nedge x y\n")
    code, out, _ = run("build", "salvetti", flag)
    assert code == EXIT_OK and "S" in out
    c = tmp_path / "c.txt"
    run("build", "grid", "disk", 2, "-o", c)
    assert run("build", "product", c, c)[0] == EXIT_OK
    assert run("build", "double", "--length", 2, "--tree", "0-1,1-2")[0] == EXIT_OK
    assert run("build", "double", "--tree", "0-x")[0] == EXIT_PARSE
    assert run("build", "kq", 4)[0] == EXIT_PRECONDITION


def test_growth_commands(tmp_path, run):
    code, out, _ = run("growth", "exponents", "--n-max", 3)
    assert out.splitlines()[:3] == ["n,e_n,decimal,bound_margin", "1,5,5.000000000000,0.386294361120",
                                    "2,17/2,8.500000000000,0.795836866004"]
    table = tmp_path / "t.csv"
    table.write_text("x,y\n" + "".join(f"{x},{x * x}\n" for x in range(1, 9)))
    code, out, _ = run("growth", "fit", table)
    assert "slope: 2.000000" in out
    code, out, _ = run("growth", "compare", f"table:{table}", "power:2")
    assert "holds: true" in out and "x_max=8" in out
    sparse = tmp_path / "s.csv"
    sparse.write_text("".join(f"{10 ** k},{100 ** k}\n" for k in range(4)))
    assert "caveat:" in run("growth", "compare", f"table:{sparse}", "power:2")[1]
    assert run("growth", "compare", "power:x", "power:2")[0] != EXIT_OK


def test_lift_profile_certify_clip(tmp_path, run):
    code, out, _ = run("lift", "--random", 20, "--seed", 4)
    rows = [r.split(",") for r in out.splitlines()[1:]]
    assert code == EXIT_OK and len(rows) == 20
    assert all(int(r[4]) <= int(r[5]) for r in rows)
    assert run("lift", "--random", 20, "--seed", 4)[1] == out
    d = tmp_path / "d.txt"
    run("build", "grid", "disk", 2, "-o", d)
    code, out, _ = run("profile", d, "--x-max", 8)
    assert out.splitlines()[-1] == "8,4,0"
    code, out, _ = run("certify", "--length", 5, "--path", "1-4")
    assert "certified_bound: 3" in out and "valid: true" in out
    code, out, _ = run("clipfill", "--length", 3, "--tree", "0-1,1-2", "--cycle", "0:0-2", "--cycle", "1:1-3")
    assert code == EXIT_OK and out.startswith("step,leaf,into")
    assert "# status=Optimal" in out


def test_separation_is_reproducible(run):
    a = run("separation", "--q", "3", "--forms", "cw")[1]
    b = run("separation", "--q", "3", "--forms", "cw", "--workers", 8)[1]
    assert a == b
    assert "K3.cw.core,Z,Unfillable" in a
    assert "K3.cw.core,scaled:3,Optimal,1/3" in a


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "homfill.cli", "growth", "exponents", "--n-max", "2"],
                         capture_output=True, text=True, check=True).stdout
    assert out.splitlines()[-1].startswith("2,17/2")
