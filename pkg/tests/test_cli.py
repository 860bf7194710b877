import json

import pytest

import GanalysisSL
import GcliSL
from GnumericsSL import ConvergenceError


def run(capsys, *argv):
    code = GcliSL.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_p0star_digits(capsys):
    code, out, _ = run(capsys, "p0star", "--digits", "20")
    assert code == 0
    assert out == "1.44705435001627940656\n"


def test_constant_50_digits(capsys):
    code, out, _ = run(capsys, "constant", "--digits", "50")
    assert code == 0
    assert out == "1.36945140399377005843552792420621433660771875900631\n"


def test_constant_with_too_small_configured_guard(capsys, isolated_config):
    import GreferenceSL
    isolated_config.write_text(json.dumps({"guard_digits": 3}))
    code, out, _ = run(capsys, "constant", "--digits", "20")
    assert code == 0
    assert out == GreferenceSL.reference_prefix("C", 20) + "\n"


def test_p0star_50_digits_json(capsys):
    code, out, _ = run(capsys, "p0star", "--digits", "50", "--format", "json")
    payload = json.loads(out)
    assert code == 0
    assert payload["p0_star"] == "1.44705435001627940656436532022322150134511477660996"
    assert payload["n"] == 92


def test_plan_json(capsys):
    code, out, _ = run(capsys, "plan", "--digits", "400", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"target_digits": 400, "n": 704, "series_terms": 471, "working_digits": 410}


def test_plan_uses_env_default(capsys, monkeypatch):
    monkeypatch.setenv("SHALLIT_DIGITS", "30")
    code, out, _ = run(capsys, "plan", "--format", "json")
    assert code == 0 and json.loads(out)["target_digits"] == 30


def test_trajectory_csv(capsys):
    code, out, _ = run(capsys, "trajectory", "--n", "3", "--digits", "20", "--format", "csv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "j,p,u,lambda"
    assert len(lines) == 5
    assert lines[1].startswith("0,1.41421356237309504880,0.00000000000000000000,")
    assert "\r" not in out


def test_cn_range(capsys):
    code, out, _ = run(capsys, "cn", "--n", "1..4", "--digits", "20", "--format", "csv", "--workers", "2")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "n,digits,A_n,C_n,C_n_traj,C_n_traj_prime,C_n_quad"
    assert [line.split(",")[0] for line in lines[1:]] == ["1", "2", "3", "4"]
    assert lines[1].split(",")[3] == "1." + "0" * 20


def test_rates_csv_columns(capsys):
    code, out, _ = run(capsys, "rates", "--quantity", "lambda_star", "--n", "5..9",
                       "--digits", "30", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "n,gap,gap_times_rho_pow"
    assert len(out.splitlines()) == 6


def test_slope_text(capsys):
    code, out, _ = run(capsys, "slope", "--terms", "20", "--digits", "16")
    assert code == 0
    assert out.startswith("-1.30324635") and len(out.strip()) == len("-1.") + 16


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--n", "1..6", "--digits", "30", "--format", "json")
    payload = json.loads(out)
    assert code == 0 and payload["passed"] is True
    assert {c["n"] for c in payload["checks"]} == set(range(1, 7))


def test_output_file(capsys, tmp_path):
    target = tmp_path / "plan.json"
    code, out, _ = run(capsys, "plan", "--digits", "50", "--format", "json", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["n"] == 92


def test_output_is_deterministic(capsys):
    first = run(capsys, "cn", "--n", "5..7", "--digits", "25", "--format", "json")
    second = run(capsys, "cn", "--n", "5..7", "--digits", "25", "--format", "json")
    assert first[0] == 0 and first[1] == second[1]


@pytest.mark.parametrize("argv", [
    ["constant", "--digits", "10"],
    ["constant", "--digits", "many"],
    ["plan", "--bogus"],
    [],
    ["cn", "--n", "0"],
    ["cn", "--n", "5..3"],
    ["trajectory", "--n", "1..3"],
    ["rates", "--quantity", "u_mid_gap", "--n", "20..21", "--digits", "20"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_help_exits_0(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "verify" in out


def test_precision_failure_exits_1(capsys):
    code, out, err = run(capsys, "rates", "--quantity", "p0_gap", "--n", "18..22", "--digits", "16")
    assert code == 1 and out == ""
    assert "PrecisionError" in err


def test_convergence_failure_exits_1(capsys, monkeypatch):
    def fail(*args, **kwargs):
        raise ConvergenceError("stuck", last_iterates=(1, 2))
    monkeypatch.setattr(GanalysisSL, "slope_sigma", fail)
    code, _, err = run(capsys, "slope", "--terms", "20", "--digits", "16")
    assert code == 1 and "stuck" in err


def test_failed_verification_exits_1(capsys, monkeypatch):
    import GverifySL
    real = GverifySL.run_invariant_suite

    def failing(*args, **kwargs):
        report = real(*args, **kwargs)
        report.checks[0].passed = False
        return report
    monkeypatch.setattr(GverifySL, "run_invariant_suite", failing)
    code, out, _ = run(capsys, "verify", "--n", "2", "--digits", "20")
    assert code == 1
    assert "FAIL" in out
