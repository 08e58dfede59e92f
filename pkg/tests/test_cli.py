import json
import subprocess
import sys

import pytest

from stronglie.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expect_fail_short_char2(capsys):
    code, out, _ = run(capsys, "check", "--variant", "I", "--k", "4", "--p", "2", "--which", "short", "--expect-fail")
    assert code == 2
    assert json.loads(out)["holds"] is False


def test_expect_fail_when_everything_holds(capsys):
    code, _, _ = run(capsys, "check", "--variant", "I", "--k", "4", "--p", "3", "--expect-fail")
    assert code == 1


def test_plain_failure_exits_1(capsys):
    code, _, _ = run(capsys, "check", "--variant", "I", "--k", "4", "--p", "2", "--which", "short")
    assert code == 1


def test_k5_variant_ii(capsys):
    code, out, _ = run(capsys, "check", "--variant", "II", "--k", "5", "--p", "7", "--no-timings")
    assert code == 0
    data = json.loads(out)
    assert len(data["results"]) == 35
    assert all(r["reduces_to_zero"] for r in data["results"])


def test_json_is_byte_identical(capsys):
    args = ("check", "--variant", "II", "--k", "4", "--p", "3,5", "--no-timings", "--certificates")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args, "--jobs", "4")
    assert first == second
    assert [d["p"] for d in json.loads(first)] == [3, 5]


def test_replay(capsys):
    code, out, _ = run(capsys, "replay-appendix", "--p", "5")
    assert code == 0
    steps = [s["step"] for s in json.loads(out)["steps"]]
    assert "star1" in steps and "pumpkin10" in steps
    code, out, _ = run(capsys, "replay-appendix", "--p", "5", "--format", "text")
    assert "⋆1" in out and "\U0001f38310" in out


def test_replay_char2_is_an_error(capsys):
    code, _, err = run(capsys, "replay-appendix", "--p", "2")
    assert code == 1 and "p != 2" in err


def test_sigma(capsys):
    code, out, _ = run(capsys, "sigma", "--k", "4", "--p", "3", "--operator", "swap")
    assert code == 0 and json.loads(out)["triangularized"]
    code, _, _ = run(capsys, "sigma", "--k", "4", "--p", "2", "--which", "short", "--expect-fail")
    assert code == 2
    code, out, _ = run(capsys, "sigma", "--k", "5", "--p", "3", "--operator", "mirror", "--format", "text")
    assert code == 0 and "76x38" in out


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--ring", "heisenberg", "--p", "3", "--k", "2")
    data = json.loads(out)
    assert code == 0 and data["identity_I"]["checked"] == 729
    code, out, _ = run(capsys, "oracle", "--ring", "class3", "--p", "3", "--k", "2", "--expect-fail")
    assert code == 2
    code, out, _ = run(capsys, "oracle", "--ring", "heisenberg", "--p", "3", "--k", "2", "--extend", "2")
    assert code == 0 and json.loads(out)["dim"] == 6


def test_quotient_dims(capsys):
    code, out, _ = run(capsys, "quotient-dims", "--k", "5", "--p", "3", "--max-degree", "8")
    assert code == 0
    dims = {tuple(d["multiweight"]): d["dim"] for d in json.loads(out)["dimensions"]}
    assert dims[(4, 4)] == 0 and dims[(1, 1)] == 2


def test_gen_relations_round_trip(capsys, tmp_path):
    target = tmp_path / "k4.rel"
    code, _, _ = run(capsys, "gen-relations", "--k", "4", "--out", str(target))
    assert code == 0 and target.read_text().startswith("#k=4\n#p=3\n")
    code, out, _ = run(capsys, "check", "--k", "4", "--p", "3", "--relations", str(target), "--no-timings")
    assert code == 0 and json.loads(out)["relations"] == "k4"


def test_gen_relations_pool(capsys):
    code, out, _ = run(capsys, "gen-relations", "--k", "3", "--p", "5", "--pool", "1,a,b")
    assert code == 0
    assert "T1_1_1: a^2*b + a*b*a + b*a^2" in out


def test_usage_errors_name_the_flag(capsys):
    with pytest.raises(SystemExit) as e:
        main(["check", "--k", "4", "--p", "4"])
    assert e.value.code == 1
    assert "--p" in capsys.readouterr().err
    with pytest.raises(SystemExit) as e:
        main(["check", "--k", "4", "--variant", "IV"])
    assert e.value.code == 1 and "--variant" in capsys.readouterr().err
    code, _, err = run(capsys, "check", "--k", "7", "--p", "3")
    assert code == 1 and "--k" in err
    code, _, err = run(capsys, "check", "--k", "4", "--relations", "/nonexistent.rel")
    assert code == 1 and "--relations" in err


def test_data_env_override(capsys, tmp_path, monkeypatch):
    (tmp_path / "k2.rel").write_text("#k=2\nE1: a*b\n")
    monkeypatch.setenv("STRONGLIE_DATA", str(tmp_path))
    from stronglie.relations import paper_relation_set

    paper_relation_set.cache_clear()
    try:
        code, out, _ = run(capsys, "check", "--k", "2", "--p", "3", "--no-timings")
        assert code == 0
        assert json.loads(out)["relation_labels"] == ["E1", "E1'"]
    finally:
        paper_relation_set.cache_clear()


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "stronglie.cli", "check", "--k", "3", "--p", "3", "--format", "text"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "holds" in res.stdout
