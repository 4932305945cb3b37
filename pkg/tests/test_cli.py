import json
import subprocess
import sys

import pytest

from ccslc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse(capsys):
    code, out, _ = run(capsys, "parse", "a.0||b.0")
    assert code == 0 and out.splitlines()[0] == "a.0 || b.0"


def test_parse_error_exits_2(capsys):
    code, _, err = run(capsys, "parse", "a.(")
    assert code == 2 and "parse error" in err


def test_eq_exit_codes(capsys):
    assert run(capsys, "eq", "--rel", "rbb", "a.tau.b.0", "a.b.0")[0] == 0
    code, out, _ = run(capsys, "eq", "--rel", "rbb", "tau.a.0", "a.0")
    assert code == 1 and "tau" in out
    assert run(capsys, "eq", "--method", "naive", "tau.a.0", "a.0")[0] == 0


def test_json_output(capsys):
    code, out, _ = run(capsys, "depth", "a.0 || a.(a.0+a.a.0)", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert (data["depth"], data["rdepth"]) == (4, 4)
    code, out, _ = run(capsys, "eq", "a.0", "b.0", "--format", "json")
    data = json.loads(out)
    assert code == 1 and data["result"] is False and data["witness"]


def test_lts_formats(capsys):
    code, out, _ = run(capsys, "lts", "a.0 || ~a.0", "--format", "dot")
    assert code == 0 and out.startswith("digraph") and out.count("->") == 5
    code, out, _ = run(capsys, "lts", "a.0 || ~a.0", "--format", "json")
    assert len(json.loads(out)["edges"]) == 5
    with pytest.raises(SystemExit) as err:
        main(["depth", "a.0", "--format", "dot"])
    assert err.value.code == 2


def test_deterministic_output(capsys):
    a = run(capsys, "decompose", "a.0 || (b.0 || a.0)", "--format", "json")
    b = run(capsys, "decompose", "a.0 || (b.0 || a.0)", "--format", "json")
    assert a == b
    data = json.loads(a[1])
    assert data["recomposition_verified"] and len(data["factors"]) == 3


def test_decompose_open_term_is_a_domain_error(capsys):
    code, _, err = run(capsys, "decompose", "a.$x")
    assert code == 2 and "error" in err


def test_normalize(capsys, tmp_path):
    trace = tmp_path / "n.trace"
    code, out, _ = run(capsys, "normalize", "a.0 || b.0", "--trace", str(trace))
    assert code == 0 and "a.b.0 + b.a.0" in out
    assert trace.read_text().splitlines()[-1].startswith("QED ")
    assert run(capsys, "check-proof", str(trace))[0] == 0


def test_prove_then_check(capsys, tmp_path):
    f = tmp_path / "p.trace"
    code, _, _ = run(capsys, "prove", "a.0 || ~a.0", "a.~a.0 + ~a.a.0 + tau.0", "--out", str(f))
    assert code == 0
    code, out, _ = run(capsys, "check-proof", str(f), "--format", "json")
    assert code == 0 and json.loads(out)["valid"] is True
    lines = f.read_text().splitlines()
    lines[-1] = "QED a.0 || ~a.0 = tau.0"
    f.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "check-proof", str(f))
    assert code == 1 and "invalid" in out


def test_prove_unrelated_exits_1(capsys):
    assert run(capsys, "prove", "tau.a.0", "a.0")[0] == 1


def test_missing_file_exits_2(capsys, tmp_path):
    assert run(capsys, "check-proof", str(tmp_path / "none.trace"))[0] == 2


def test_family(capsys):
    code, out, _ = run(capsys, "family", "--n", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert data["lhs_has_Pn"] and not data["rhs_has_Pn"] and data["proof_valid"]


def test_axioms(capsys):
    code, out, _ = run(capsys, "axioms", "list", "--alphabet", "a")
    assert code == 0 and "TB[a]:" in out
    code, out, _ = run(capsys, "axioms", "soundness", "--count", "10", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["sound"] and data["relation"] == "rbb"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ccslc", "eq", "a.0", "tau.a.0"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "true" in res.stdout
