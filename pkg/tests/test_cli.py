import io
import json

import pytest

from ltsfit.cli import main
from ltsfit.modelio import builtin_text


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_evaluate_good():
    code, out = run("evaluate", "--model", "builtin:good", "--no-timing")
    assert code == 0
    assert "|M| = 3" in out
    assert "K=9000: 0.249972" in out
    assert "status: converged" in out
    assert "time:" not in out


def test_evaluate_bad():
    code, out = run("evaluate", "--model", "builtin:bad", "--no-timing")
    assert code == 0
    assert "|M| = 5" in out
    assert "K=8192: 0.138165" in out
    assert "K=9000: 0.138168" in out


def test_evaluate_prints_timing_by_default():
    code, out = run("evaluate", "--model", "builtin:toy")
    assert code == 0 and "time:" in out


def test_evaluate_is_deterministic():
    assert run("evaluate", "--model", "builtin:bad", "--no-timing") == run(
        "evaluate", "--model", "builtin:bad", "--no-timing"
    )


def test_evaluate_bad_aggregate_variable(tmp_path, capsys):
    fit = tmp_path / "f.json"
    fit.write_text(json.dumps({"fitness": [{"type": "length_counter"}], "aggregate": "x1 / x2"}))
    code, _ = run("evaluate", "--model", "builtin:good", "--fitness", str(fit))
    assert code == 1
    assert "x2" in capsys.readouterr().err


def test_evaluate_rejects_check_k_above_k(capsys):
    code, _ = run("evaluate", "--model", "builtin:good", "--k", "100", "--check-k", "200")
    assert code == 1
    assert "--check-k" in capsys.readouterr().err


def test_evaluate_with_model_file_needs_fitness(tmp_path):
    model = tmp_path / "m.json"
    model.write_text(builtin_text("simple_comm_good.json"))
    assert run("evaluate", "--model", str(model))[0] == 1
    code, out = run("evaluate", "--model", str(model), "--fitness", "builtin:rate_fitness", "--no-timing")
    assert code == 0 and "0.249972" in out


def test_evaluate_scaled_backend():
    code, out = run("evaluate", "--model", "builtin:bad", "--backend", "scaled", "--no-timing")
    assert code == 0 and "K=9000: 0.138168" in out


def _two_cycle(tmp_path):
    model = tmp_path / "cycle.json"
    model.write_text(json.dumps({"alphabet": ["x", "y"], "processes": [
        {"name": "C", "states": ["p", "q"], "initial": ["p"],
         "transitions": [["p", "x", "q"], ["q", "y", "p"]]}]}))
    fit = tmp_path / "rate.json"
    fit.write_text(json.dumps({"fitness": [{"type": "label_counter", "labels": ["x"]},
                                           {"type": "length_counter"}], "aggregate": "x1 / x2"}))
    return str(model), str(fit)


def test_evaluate_unstable_exits_2(tmp_path):
    model, fit = _two_cycle(tmp_path)
    code, out = run("evaluate", "--model", model, "--fitness", fit, "--k", "3", "--check-k", "2")
    assert code == 2 and "unstable" in out


def test_evaluate_undefined_exits_2(tmp_path):
    model, fit = _two_cycle(tmp_path)
    code, out = run("evaluate", "--model", model, "--fitness", fit, "--k", "2", "--check-k", "1")
    assert code == 2 and "undefined" in out


def test_compare_good_vs_bad():
    code, out = run("compare", "--model", "builtin:good", "--model", "builtin:bad", "--no-timing")
    assert code == 0
    assert "verdict: Preferred(A)" in out
    code, out = run("compare", "--model", "builtin:bad", "--model", "builtin:good",
                    "--compare", "leq", "--no-timing")
    assert "verdict: Preferred(A)" in out


def test_compare_with_itself():
    code, out = run("compare", "--model", "builtin:good", "--model", "builtin:good", "--no-timing")
    assert code == 0 and "verdict: Equal" in out


def test_compare_unstable_side(tmp_path):
    model, fit = _two_cycle(tmp_path)
    code, out = run("compare", "--model", model, "--model", model, "--fitness", fit,
                    "--k", "3", "--check-k", "2", "--no-timing")
    assert code == 2 and "verdict: Incomparable" in out


def test_compare_needs_two_models():
    assert run("compare", "--model", "builtin:good")[0] == 1


def test_validate_all_fixtures():
    code, out = run("validate")
    assert code == 0
    assert "FAIL" not in out
    assert out.count("PASS") == 20


def test_validate_toy():
    code, out = run("validate", "--model", "builtin:toy", "--max-n", "12")
    assert code == 0 and out.count("PASS") == 2


def test_validate_corrupted_xi():
    code, out = run("validate", "--model", "builtin:toy", "--corrupt-xi")
    assert code == 2
    assert "FAIL at n=2" in out


def test_validate_max_n_zero():
    code, out = run("validate", "--model", "builtin:good", "--max-n", "0")
    assert code == 0 and "0..0" in out


def test_inspect_toy():
    code, out = run("inspect", "--model", "builtin:toy")
    assert code == 0
    assert "0 1 1 0 0\n0 1 1 0 0\n0 1 0 1 0\n0 0 0 1 1\n0 0 0 1 0" in out


def test_inspect_good_legend():
    code, out = run("inspect", "--model", "builtin:good")
    assert code == 0
    assert "== product with f1: 4 states" in out


def test_inspect_empty_alphabet(tmp_path):
    model = tmp_path / "m.json"
    model.write_text('{"alphabet": [], "processes": []}')
    assert run("inspect", "--model", str(model), "--fitness", "builtin:rate_fitness")[0] == 1


def test_series_csv(tmp_path):
    target = tmp_path / "s.csv"
    ks = ",".join(str(2**i) for i in range(4, 14))
    code, _ = run("series", "--model", "builtin:good", "--ks", ks, "--out", str(target))
    assert code == 0
    lines = target.read_text().splitlines()
    assert lines[0] == "K,comp1"
    assert len(lines) == 11
    k, value = lines[-1].split(",")
    assert k == "8192" and abs(float(value) - 0.25) < 1e-3
    assert len(value.split(".")[1]) == 7


def test_series_rows_match_checkpoints():
    code, out = run("series", "--model", "builtin:bad", "--ks", "8192,9000", "--precision", "6")
    assert code == 0
    assert out.splitlines() == ["K,comp1", "8192,0.138165", "9000,0.138168"]


def test_series_single_k():
    code, out = run("series", "--model", "builtin:good", "--ks", "100")
    assert code == 0 and len(out.splitlines()) == 2


def test_series_bad_list():
    assert run("series", "--model", "builtin:good", "--ks", "a,b")[0] == 1


def test_unknown_command_is_a_usage_error():
    with pytest.raises(SystemExit):
        run("frobnicate")
