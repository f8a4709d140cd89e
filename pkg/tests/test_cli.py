import json
import subprocess
import sys

import pytest

from fop.cli import run


def fop(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_entail_eagle(capsys):
    code, out, _ = fop(capsys, "entail", "demos/eagle.fop", "--query", "demos/flies_father.fop")
    assert code == 0 and out == "PROVED\n"


def test_concrete_value(capsys):
    code, out, _ = fop(capsys, "value", "demos/schema31.fop", "--concrete")
    assert code == 0 and out == "8\n"


def test_parse_error_position(capsys):
    code, out, err = fop(capsys, "parse", "demos/bad.fop")
    assert code >= 64 and out == ""
    assert "bad.fop:4:12:" in err


def test_missing_file_and_usage(capsys):
    assert fop(capsys, "parse", "demos/nope.fop")[0] == 66
    assert fop(capsys, "frobnicate")[0] == 64
    assert fop(capsys, "normalize", "demos/eagle.fop")[0] == 64


def test_parse_round_trip(capsys, tmp_path):
    code, out, _ = fop(capsys, "parse", "demos/eagle.fop")
    assert code == 0
    path = tmp_path / "again.fop"
    path.write_text(out)
    assert fop(capsys, "parse", str(path))[1] == out


def test_fol_translation(capsys):
    code, out, _ = fop(capsys, "parse", "demos/eagle.fol", "--mode", "B", "--simplify")
    assert code == 0 and "flies(x) - bird(x) ^ bird(y) - eagle(y)" in out


def test_normalize_reduced_json(capsys):
    code, out, _ = fop(capsys, "normalize", "--reduced", "demos/eagle.fop", "--json")
    data = json.loads(out)
    assert code == 0 and "eagle(Stanley) - 1" in data["clauses"]
    assert len(data["origins"]) == len(data["clauses"])


def test_value_with_model(capsys):
    code, out, _ = fop(capsys, "value", "demos/chain.fop", "--model", "demos/chain_model.txt")
    assert code == 0 and out == "0\n"


def test_value_bounds(capsys):
    code, out, _ = fop(capsys, "value", "demos/eagle.fop", "--json")
    assert code == 0 and json.loads(out) == {"lower": "0", "upper": "0"}


def test_feasibility(capsys):
    assert fop(capsys, "feasible", "demos/schema31.fop")[:2] == (0, "FEASIBLE\n")
    code, out, _ = fop(capsys, "feasible", "--naive", "demos/chain.fop", "--depth", "2")
    assert code == 2 and out.startswith("UNKNOWN")


def test_prove_then_verify(capsys, tmp_path):
    trace = tmp_path / "t.json"
    code, out, _ = fop(capsys, "prove", "demos/chain.fop", "--emit-trace", str(trace))
    assert code == 0 and out == "PROVED\n"
    assert json.loads(trace.read_text())["version"] == 1
    assert fop(capsys, "verify", "demos/chain.fop", "--trace", str(trace))[:2] == (0, "VALID\n")
    data = json.loads(trace.read_text())
    data["terminal"]["farkas"] = ["0"] * len(data["terminal"]["farkas"])
    trace.write_text(json.dumps(data))
    assert fop(capsys, "verify", "demos/chain.fop", "--trace", str(trace))[0] == 1


def test_unwritable_trace(capsys):
    code, _, err = fop(capsys, "prove", "demos/chain.fop", "--emit-trace", "/nonexistent/dir/t.json")
    assert code >= 64 and err


def test_ground_lp(capsys):
    code, out, _ = fop(capsys, "ground", "demos/eagle.fop", "--lp", "-", "--depth", "1")
    assert code == 0 and out.startswith("\\ exact") and "General" in out


@pytest.mark.parametrize("argv", [
    ["entail", "demos/eagle.fop", "--query", "demos/flies_father.fop", "--json"],
    ["ground", "demos/eagle.fop", "--lp", "-"],
    ["normalize", "--reduced", "demos/schema31.fop"],
])
def test_byte_identical_runs(argv):
    runs = [subprocess.run([sys.executable, "-m", "fop.cli", *argv], capture_output=True)
            for _ in range(2)]
    assert runs[0].returncode == runs[1].returncode == 0
    assert runs[0].stdout == runs[1].stdout and runs[0].stdout
