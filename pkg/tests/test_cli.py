import json
import subprocess
import sys

import pytest

from schurpair import cli
from schurpair.errors import NoComplement
from schurpair.homology import MULTIPLIER_CACHE


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_multiplier_text(capsys):
    code, out, _ = run(capsys, "multiplier", "D8")
    assert code == 0
    assert out.strip() == "M = Z2 (order 2), t = 2"


def test_multiplier_json_flag_before_command(capsys):
    code, out, _ = run(capsys, "--format", "json", "multiplier", "Z2 x Z2 x Z2")
    assert code == 0
    data = json.loads(out)
    assert data["multiplier"] == [2, 2, 2] and data["t"] == 0


@pytest.mark.parametrize("n_spec,k_spec,t,case", [
    ("Z9", "1", 1, "T13.i"),
    ("Z3 x Z3", "Z3", 0, "T10.b"),
    ("Z4", "Z2", 2, "T14.iv"),
])
def test_classify_examples(capsys, n_spec, k_spec, t, case):
    code, out, _ = run(capsys, "classify", n_spec, k_spec, "--format", "json")
    assert code == 0
    verdict = json.loads(out)["verdict"]
    assert verdict["t"] == t and case in verdict["matched"]
    assert verdict["status"] == "Confirmed"


def test_pair_report(capsys):
    code, out, _ = run(capsys, "pair", "Z4", "Z2")
    assert code == 0
    assert "M(G,N) = Z2" in out and "t = 2" in out


def test_pair_with_action(capsys, tmp_path):
    action = tmp_path / "inv.json"
    action.write_text(json.dumps({"generator_images": {"1": [0, 3, 2, 1]}}))
    code, out, _ = run(capsys, "--format", "json", "pair", "Z4", "Z2", "--action", str(action))
    assert code == 0
    assert json.loads(out)["mG"] == [2]


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "--order", "3^3")
    assert code == 0
    assert len(out.strip().splitlines()) == 5
    assert run(capsys, "catalog", "--order", "2^4")[0] == 2


def test_parse_error_exit(capsys):
    code, out, err = run(capsys, "multiplier", "Z4 x")
    assert code == 2 and out == ""
    assert "ParseError" in err and "offset 4" in err


def test_semantic_error_exit(capsys):
    assert run(capsys, "multiplier", "E1(2)")[0] == 2


def test_budget_exit(capsys):
    code, _, err = run(capsys, "multiplier", "Z64")
    assert code == 3 and "BudgetExceeded" in err
    code, _, err = run(capsys, "verify", "T15", "--p", "2", "--budget", "16")
    assert code == 3 and "T15.xiii" in err


def test_unknown_theorem_exit(capsys):
    assert run(capsys, "verify", "T7")[0] == 2


def test_missing_complement_exit(capsys, monkeypatch):
    def boom(*a, **k):
        raise NoComplement("no complement")
    monkeypatch.setattr(cli.C, "report_pair", boom)
    assert run(capsys, "pair", "Z2", "Z2")[0] == 5


def test_verify_t10(capsys):
    code, out, _ = run(capsys, "verify", "T10", "--p", "2", "--budget", "32")
    assert code == 0
    assert "0 mismatches" in out


def test_cache_file(capsys, tmp_path):
    path = tmp_path / "cache.json"
    MULTIPLIER_CACHE.clear()
    assert run(capsys, "--cache", str(path), "multiplier", "Q8")[0] == 0
    assert path.exists() and json.loads(path.read_text())
    MULTIPLIER_CACHE.clear()
    code, out, _ = run(capsys, "multiplier", "Q8", "--cache", str(path))
    assert code == 0 and out.startswith("M = 1")
    assert len(MULTIPLIER_CACHE) >= 1


def test_json_output_is_stable():
    cmd = [sys.executable, "-m", "schurpair", "verify", "T13", "--p", "2", "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and json.loads(first)["ok"]
