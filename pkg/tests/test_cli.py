import json
import subprocess
import sys

import pytest

from chowcfg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_betti_csv(capsys):
    code, out, _ = run(capsys, "betti", "--m", "5", "--theta", "canonical", "--max-degree", "4", "--output", "csv")
    assert code == 0
    assert out.splitlines() == ["degree,dimension", "0,1", "1,5", "2,1", "3,0", "4,0"]


def test_betti_json_theta_minus(capsys):
    code, out, _ = run(capsys, "betti", "--m", "6", "--theta", "theta-minus", "--max-degree", "4", "--output", "json")
    rep = json.loads(out)
    assert code == 0 and rep["schema"] == "chowcfg/1"
    assert rep["poincare"] == [1, 6, 6, 1]
    assert len(rep["generators"]) == 10
    assert rep["theta"]["weights"][0] == "1/8"


def test_betti_inline_weights(capsys):
    code, out, _ = run(capsys, "betti", "--theta", "3/4,5/12,5/12,5/12", "--max-degree", "3", "--output", "csv")
    assert code == 0
    assert out.splitlines()[1:] == ["0,1", "1,1", "2,0", "3,0"]


def test_stability_json(capsys):
    code, out, _ = run(capsys, "stability", "--m", "6", "--theta", "theta-plus", "--epsilon", "1/6",
                       "--deformation-of", "canonical", "--output", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["coprime"] and rep["nontrivial"]
    assert len(rep["minimal_forbidden"]) == 15
    assert rep["deformation_of"]["is_deformation"]


def test_stability_file(capsys, tmp_path):
    p = tmp_path / "theta.json"
    p.write_text(json.dumps({"weights": ["2/3", "2/3", "2/3"]}))
    code, out, _ = run(capsys, "stability", "--theta", str(p), "--output", "csv")
    assert code == 0
    assert out.splitlines() == ["subset,minimal", "1 2,1", "1 3,1", "2 3,1", "1 2 3,0"]


def test_relations(capsys):
    code, out, _ = run(capsys, "relations", "--m", "4", "--subset", "1", "2", "3", "--output", "json")
    rep = json.loads(out)
    assert code == 0 and rep["oracle_agrees"]
    assert rep["I"] == [1, 2, 3]


def test_nilpotent_witness(capsys):
    code, out, _ = run(capsys, "nilpotent", "--theta", "theta-minus", "--witness", "0,1,1,1,1,0", "--output", "json")
    assert code == 0 and json.loads(out)["square_is_zero"]
    code, out, _ = run(capsys, "nilpotent", "--theta", "theta-plus", "--witness", "0,1,1,1,1,0", "--output", "json")
    assert code == 0 and not json.loads(out)["square_is_zero"]


def test_verify_lemma_rs_text(capsys):
    code, out, _ = run(capsys, "verify", "lemma-rs", "--m", "4")
    assert code == 0
    assert "all oracle identities hold" in out
    assert "m=4 I={1,2} " in out


def test_aut_check(capsys, tmp_path):
    p = tmp_path / "a.json"
    p.write_text(json.dumps({"matrix": [["0", "-2", "0"], ["2", "0", "0"], ["0", "0", "2"]]}))
    code, out, _ = run(capsys, "aut", "check", "--matrix", str(p), "--output", "json")
    rep = json.loads(out)
    assert code == 0 and rep["automorphism"]
    assert rep["factorization"] == {"d": "2/1", "sigma": [2, 1, 3], "signs": [1, -1, 1]}
    p.write_text(json.dumps([["1", "1", "0"], ["0", "1", "1"], ["1", "0", "1"]]))
    code, out, _ = run(capsys, "aut", "check", "--matrix", str(p), "--output", "text")
    assert code == 0 and out.startswith("not an automorphism")


def test_distinguish_text(capsys):
    code, out, _ = run(capsys, "distinguish", "--n", "3", "--samples", "5", "--output", "text")
    assert code == 0
    assert out.rstrip().endswith("verdict: rings distinguished")


@pytest.mark.parametrize(
    "argv",
    [
        ["betti", "--m", "5", "--theta", "bogus", "--max-degree", "2"],
        ["betti", "--m", "5", "--theta", "theta-plus", "--max-degree", "2"],
        ["betti", "--m", "5", "--theta", "canonical", "--max-degree", "-1"],
        ["stability", "--m", "6", "--theta", "theta-plus", "--epsilon", "9/10"],
        ["nilpotent", "--theta", "theta-minus", "--witness", "0,0.5,1,1,1,0"],
        ["distinguish", "--n", "9"],
        ["verify", "aut", "--m", "3"],
        ["aut", "check", "--matrix", "/nonexistent.json"],
        ["relations", "--m", "2"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("chowcfg: error:")


def test_malformed_epsilon_rejected_by_parser(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["stability", "--m", "6", "--theta", "theta-plus", "--epsilon", "0.1"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "chowcfg", "betti", "--m", "5", "--theta", "canonical", "--max-degree", "2",
         "--output", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["degree,dimension", "0,1", "1,5", "2,1"]
