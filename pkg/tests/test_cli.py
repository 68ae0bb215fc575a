import json
import subprocess
import sys


from stonelogic.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_truth_invalid(capsys):
    code, out, _ = run(capsys, "check", "--logic", "LS", "--semantics", "truth", "~~p |- p")
    assert code == 1
    assert out.splitlines() == ["logic LS semantics truth in 3~", "INVALID", "countermodel p=a", "values lhs=1 rhs=a"]


def test_check_valid(capsys):
    code, out, _ = run(capsys, "check", "--logic", "LS", "--semantics", "falsity", "~~p |- p")
    assert code == 0 and out.splitlines()[-1] == "VALID"
    code, out, _ = run(capsys, "check", "--logic", "LDS", "!!p |- p")
    assert code == 0


def test_check_four(capsys):
    code, out, _ = run(capsys, "check", "--logic", "LDBS", "p & !p |- q | ~q")
    assert code == 1 and "countermodel p=u1 q=u2" in out
    code, out, _ = run(capsys, "check", "--logic", "LDBS", "--semantics", "both", "p & !p |- q | ~q")
    assert code == 0


def test_check_roughset(capsys, tmp_path):
    code, out, _ = run(capsys, "check", "--logic", "LS", "--semantics", "roughset", "~~p |- p")
    assert code == 1 and any(line.startswith("point ") for line in out.splitlines())
    space = tmp_path / "s.json"
    space.write_text(json.dumps({"universe": ["a", "b"], "blocks": [["a"], ["b"]]}))
    code, out, _ = run(capsys, "check", "--logic", "LS", "--semantics", "roughset", "--space", str(space), "~~p |- p")
    assert code == 0


def test_check_usage_errors(capsys):
    code, _, err = run(capsys, "check", "--logic", "LS", "!p |- p")
    assert code == 2 and "not in the language" in err
    code, _, err = run(capsys, "check", "--logic", "LDBS", "--semantics", "roughset", "p |- p")
    assert code == 2
    code, _, err = run(capsys, "check", "--logic", "LS", "p |-")
    assert code == 2 and "error" in err
    assert run(capsys, "check", "--logic", "XX", "p |- p")[0] == 2
    assert run(capsys)[0] == 2


def test_valuation_guard(capsys):
    seq = " & ".join(f"p{i}" for i in range(11)) + " |- p0"
    code, _, err = run(capsys, "countermodel", "--algebra", "4", seq)
    assert code == 2 and "error" in err
    code, out, _ = run(capsys, "countermodel", "--algebra", "2", "--no-limit", seq)
    assert code == 0 and out.startswith("no countermodel")


def test_countermodel(capsys):
    code, out, _ = run(capsys, "countermodel", "--algebra", "3s", "T |- p | ~p")
    assert code == 1 and out.splitlines()[0] == "countermodel p=a"


def test_build_and_classify(capsys, tmp_path):
    f = tmp_path / "b3.json"
    dot = tmp_path / "b3.dot"
    fig = tmp_path / "b3.png"
    code, _, _ = run(capsys, "algebra", "build", "b3", "1", "-o", str(f), "--dot", str(dot), "--figure", str(fig))
    assert code == 0 and fig.exists() and dot.read_text().startswith("digraph")
    code, out, _ = run(capsys, "algebra", "classify", str(f))
    assert code == 0
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert lines["elements"] == "4" and lines["double-stone"] == "yes"
    assert lines["verdict"] == "double Stone algebra"


def test_classify_non_stone(capsys, tmp_path):
    f = tmp_path / "n.json"
    f.write_text(json.dumps({"elements": ["0", "a", "b", "c", "1"],
                             "covers": [["0", "a"], ["0", "b"], ["a", "c"], ["b", "c"], ["c", "1"]]}))
    code, out, _ = run(capsys, "algebra", "classify", str(f))
    assert "stone no" in out and "dual-stone yes" in out
    assert out.splitlines()[-1] == "verdict dual Stone algebra"
    f.write_text("{")
    assert run(capsys, "algebra", "classify", str(f))[0] == 2
    assert run(capsys, "algebra", "classify", str(tmp_path / "missing.json"))[0] == 2


def test_iso(capsys):
    code, out, _ = run(capsys, "iso", "three-two", "1")
    assert code == 0
    assert out.splitlines()[0] == "VALID ISO 3^1 -> (2^1)^[2] as Stone and dual Stone algebras, 3 elements"
    code, out, _ = run(capsys, "iso", "four-three", "2")
    assert code == 0 and "16 elements" in out and len(out.splitlines()) == 17
    assert run(capsys, "iso", "three-two", "-1")[0] == 2


def test_roughset(capsys, tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"universe": ["a", "b", "c", "d"], "blocks": [["a", "b"], ["c", "d"]]}))
    code, out, _ = run(capsys, "roughset", "--space", str(f), "list")
    assert code == 0 and out.splitlines()[-1] == "count 9"
    code, out, _ = run(capsys, "roughset", "--space", str(f), "algebra", "double")
    assert code == 0 and len(json.loads(out)["elements"]) == 9


def test_audit(capsys):
    code, out, _ = run(capsys, "audit", "--logic", "LDBS", "--variant", "as-written")
    assert code == 1 and out.splitlines()[-1] == "1 violated schemas"
    code, out, _ = run(capsys, "audit", "--logic", "LS", "--algebra", "3s")
    assert code == 0
    assert run(capsys, "audit", "--logic", "LDS", "--algebra", "3s")[0] == 2


def test_prove_check(capsys, tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("# commutativity\n1: p & q |- q ; Conj-Elim-R\n2: p & q |- p ; Conj-Elim-L\n3: p & q |- q & p ; Conj-Intro(1,2)\n")
    code, out, _ = run(capsys, "prove-check", "--logic", "DLL", str(f))
    assert code == 0 and out.splitlines() == ["OK 3 steps", "proves p & q |- q & p"]
    f.write_text("1: p |- q ; Reflexivity\n")
    code, out, _ = run(capsys, "prove-check", "--logic", "DLL", str(f))
    assert code == 1 and out.startswith("FAIL step 1:")


def test_console_script_module():
    r = subprocess.run([sys.executable, "-m", "stonelogic.cli", "iso", "three-two", "0"], capture_output=True, text=True)
    assert r.returncode == 0 and "1 elements" in r.stdout
