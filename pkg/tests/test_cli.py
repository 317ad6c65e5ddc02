import json
import subprocess
import sys

import pytest

from kwb.cli import InputError, Report, main, parse_selector, parse_window
from kwb.fixtures import write_all


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def groups(rep):
    return [(r["group"]["free_rank"], r["group"]["invariant_factors"]) for r in rep["results"] if "group" in r]


def test_negk_f3(capsys):
    code, rep = run_json(capsys, "negk", "--ring", "F3", "--depth", "2")
    assert code == 0 and groups(rep) == [(0, []), (0, [])]
    assert rep["instance"]["mode"].startswith("auto")


def test_negk_oracle(capsys):
    code, rep = run_json(capsys, "negk", "--oracle", "k_minus_one.json", "--depth", "1")
    assert code == 0 and groups(rep) == [(1, [])]
    assert "oracle" in rep["results"][0]["provenance"]


def test_negk_zero_ring(capsys):
    code, rep = run_json(capsys, "negk", "--ring", "Zmod1", "--depth", "3")
    assert code == 0 and groups(rep) == [(0, [])] * 3


def test_bhs_check_f5(capsys):
    code, out, _ = run(capsys, "bhs-check", "--ring", "F5", "--degree", "1")
    assert code == 0 and "pass" in out and "witness" in out
    code, rep = run_json(capsys, "bhs-check", "--ring", "F5", "--degree", "1")
    assert rep["verdict"] == "pass" and rep["results"][0]["witness"]


def test_contract_check_z(capsys):
    code, rep = run_json(capsys, "contract-check", "--ring", "Z", "--c", "0", "--window", "-1..1")
    assert code == 0 and rep["verdict"] == "pass"


def test_kh_f3(capsys):
    code, rep = run_json(capsys, "kh", "--ring", "F3", "--degree", "1", "--bound", "4")
    r = rep["results"][0]
    assert code == 0 and r["group"] == {"free_rank": 0, "invariant_factors": [2]} and r["stable_index"] == 0


def test_nk_oracle(capsys):
    code, rep = run_json(capsys, "nk", "--oracle", "nk_z2.json", "--degree", "0")
    assert code == 0
    plus = next(r for r in rep["results"] if r["sign"] == "+")
    assert plus["group"]["invariant_factors"] == [2] and plus["splitting_ok"]


def test_twisted_cli(capsys):
    code, rep = run_json(capsys, "bhs-check", "--oracle", "twisted_ambiguous.json", "--degree", "1", "--twist", "psi")
    assert code == 0 and rep["verdict"] == "consistent-up-to-extension"


def test_failed_check_exits_1(capsys):
    code, rep = run_json(capsys, "bhs-check", "--oracle", "corrupted_double_j.json", "--degree", "0")
    assert code == 1 and rep["verdict"] != "pass"
    code, _, _ = run(capsys, "contract-check", "--oracle", "free_flavor.json", "--c", "0", "--window", "-1..1")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["negk", "--ring", "Q"],
    ["negk", "--ring", "F6"],
    ["negk"],
    ["negk", "--ring", "F3", "--oracle", "nk_z2.json"],
    ["bhs-check", "--ring", "F3", "--twist", "phi"],
    ["negk", "--oracle", "no_such_file.json"],
    ["contract-check", "--ring", "Z", "--window", "1..0"],
    ["negk", "--ring", "F3", "--depth", "-1"],
    ["frobnicate"],
])
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_json_is_deterministic_and_round_trips(capsys):
    argv = ("report", "--ring", "F3", "--format", "json")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    rep = Report.from_dict(json.loads(a))
    assert rep.to_json() == a


def test_report_on_oracle(capsys):
    code, rep = run_json(capsys, "report", "--oracle", "k_minus_one.json")
    sections = {r["section"] for r in rep["results"]}
    assert {"negk", "bhs-check", "contract-check", "kh", "tower"} <= sections


def test_f2_report_is_a_gap(capsys):
    code, rep = run_json(capsys, "report", "--ring", "F2")
    assert code == 1 and rep["verdict"] == "gap"


def test_kwb_fixtures_env(tmp_path, monkeypatch, capsys):
    write_all(tmp_path)
    data = json.loads((tmp_path / "k_minus_one.json").read_text())
    data["mode"] = "relocated"
    (tmp_path / "k_minus_one.json").write_text(json.dumps(data))
    monkeypatch.setenv("KWB_FIXTURES", str(tmp_path))
    code, rep = run_json(capsys, "negk", "--oracle", "k_minus_one.json", "--depth", "1")
    assert code == 0 and "relocated" in rep["results"][0]["provenance"]


def test_selector_grammar():
    X = parse_selector("F3[t][t,t^-1]")
    assert [a.kind for a in X.chain] == ["poly", "laurent"]
    assert parse_window("-3..1") == (-3, 1)
    # any variable name is allowed
    assert [a.kind for a in parse_selector("F3[s][s^-1]").chain] == ["poly", "negpoly"]
    for bad in ("F3[t^2]", "Z[t", "W", "F3[t,s]"):
        with pytest.raises(InputError):
            parse_selector(bad)


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "kwb", "negk", "--ring", "Zmod1", "--depth", "1"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "K_-1 = 0" in p.stdout
