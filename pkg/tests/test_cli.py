import json
import math

from pytest import approx, raises

from gevrey_nse.calibration import load_constants
from gevrey_nse.cli import main, run_verify
from gevrey_nse.errors import ConfigurationError
from gevrey_nse.snapshots import read_json_lines, read_snapshot


def _read(path):
    return json.loads(path.read_text(encoding="utf-8"))


def _run(*args):
    return main([*map(str, args), "--no-progress"])


def test_simulate_taylor_green(small_config, tmp_path):
    path = small_config(initial_condition="taylor_green", initial_amplitude=1.0)
    assert _run("simulate", "--config", path) == 0
    output = tmp_path / "output"
    records = read_json_lines(output / "diagnostics.jsonl")
    assert [record["t"] for record in records] == approx([0.0, 0.02, 0.04, 0.06, 0.08, 0.1])
    assert records[0]["energy"] == approx(math.pi ** 2)
    assert records[-1]["energy"] == approx(math.pi ** 2 * math.exp(-0.4), rel=1e-6)
    final = read_snapshot(output / "final_state.bin")
    assert final.coefficient((1, 1))[0] == approx(-0.25j * math.exp(-0.2), rel=1e-6)
    report = _read(output / "simulate_report.json")
    assert report["status"] == "ok"
    assert report["constants_version"] == 1
    assert report["dissipation_from_balance"] == approx(report["dissipation"]["eps"], rel=1e-2)
    assert (output / "spectrum_final.csv").is_file()
    assert (output / "spectrum_mean.csv").is_file()


def test_simulate_is_deterministic(small_config, tmp_path):
    path = small_config()
    assert _run("simulate", "--config", path, "--out", tmp_path / "first") == 0
    assert _run("simulate", "--config", path, "--out", tmp_path / "second") == 0
    first = (tmp_path / "first" / "diagnostics.jsonl").read_bytes()
    assert first == (tmp_path / "second" / "diagnostics.jsonl").read_bytes()
    assert _run("simulate", "--config", path, "--out", tmp_path / "third", "--seed", "4") == 0
    assert first != (tmp_path / "third" / "diagnostics.jsonl").read_bytes()


def test_simulate_stability_violation(small_config, tmp_path):
    assert _run("simulate", "--config", small_config(dt=1.0)) == 1
    assert not (tmp_path / "output").exists()


def test_simulate_numerical_abort(small_config, tmp_path):
    assert _run("simulate", "--config", small_config(initial_amplitude=1e120)) == 2
    report = _read(tmp_path / "output" / "abort_report.json")
    assert report["status"] == "numerical_abort"
    assert report["time"] == 0.0
    assert read_snapshot(tmp_path / "output" / "abort_state.bin").is_finite()



def _long_forced_run(small_config):
    return small_config(forcing="random", forcing_amplitude=1.0, horizon=200000.0, dt=10.0, stability_cap=1e12)


def test_simulate_saturating_forcing_norm(small_config, tmp_path):
    assert _run("simulate", "--config", _long_forced_run(small_config)) == 2
    report = _read(tmp_path / "output" / "abort_report.json")
    assert report["status"] == "numerical_abort"
    assert report["time"] == 0.0
    assert "Tf=200000.0" in report["message"]
    assert read_snapshot(tmp_path / "output" / "abort_state.bin").is_finite()
    assert not (tmp_path / "output" / "diagnostics.jsonl").exists()


def test_picard_saturating_forcing_norm(small_config, tmp_path):
    assert _run("picard", "--config", _long_forced_run(small_config)) == 2
    report = _read(tmp_path / "output" / "abort_report.json")
    assert report["status"] == "gevrey_saturation"
    assert "Tf=200000.0" in report["message"]
    assert report["shell"] > 0
    assert report["config"]["horizon"] == 200000.0


def test_picard_small_data(small_config, tmp_path):
    assert _run("picard", "--config", small_config(truncation=12, initial_band_high=12)) == 0
    theorem = _read(tmp_path / "output" / "theorem.json")
    assert theorem["C_star"] == approx(1 / 720)
    assert theorem["global_existence"]
    report = _read(tmp_path / "output" / "picard_report.json")
    assert report["status"] == "converged"
    assert report["picard"]["in_e"]
    assert report["weak_residual"]["passed"]
    comparison = report["radius"]["comparison"]
    assert comparison["method"] == "loglinear_fit"
    assert comparison["verdict"] == "PASS"
    assert comparison["ratio"] >= 1


def test_picard_large_data_does_not_converge(small_config, tmp_path):
    path = small_config(theorem="7.1", forcing="random", forcing_amplitude=1e-8, initial_amplitude=5.0)
    assert _run("picard", "--config", path) == 3
    report = _read(tmp_path / "output" / "picard_report.json")
    assert report["status"] in ("diverged", "not_converged")
    assert not _read(tmp_path / "output" / "theorem.json")["hypothesis"]


def test_picard_force_dominated_exponents(small_config, tmp_path):
    path = small_config(theorem="7.1", forcing="random", forcing_amplitude=1e-6, sigma="-3/4", q="59/49")
    assert _run("picard", "--config", path) in (0, 3)
    theorem = _read(tmp_path / "output" / "theorem.json")
    assert theorem["beta"]["exact"] == "15/59"
    assert theorem["q_prime"]["exact"] == "59/10"
    assert theorem["radius_exponent"]["exact"] == "59/64"


def test_picard_theorem_without_forcing(small_config):
    assert _run("picard", "--config", small_config(theorem="7.1")) == 1


def test_radius(small_config, tmp_path):
    assert _run("radius", "--config", small_config(truncation=12, initial_band_high=12)) == 0
    report = _read(tmp_path / "output" / "radius_report.json")
    assert report["comparison"]["verdict"] == "PASS"
    assert report["fit"]["lambda_hat"] > 0
    assert len(report["radii"]) == 5
    assert report["growth"]["exponent"] > 0
    assert (tmp_path / "output" / "shells.csv").is_file()


def test_spectrum(small_config, tmp_path):
    assert _run("spectrum", "--config", small_config()) == 0
    report = _read(tmp_path / "output" / "spectrum_fit.json")
    assert math.isfinite(report["spectrum"]["fitted_exponent"])
    assert (tmp_path / "output" / "spectrum_mean.csv").is_file()
    assert len(report["spectrum"]["bands"]) == 4


def test_verify_semigroup(tmp_path):
    assert _run("verify", "--suite", "semigroup", "--cases", "5", "--out", tmp_path / "verify") == 0
    report = _read(tmp_path / "verify" / "verify_report.json")
    assert report["suites"]["semigroup"]["checks"] == 20
    assert report["suites"]["semigroup"]["failures"] == 0
    assert not (tmp_path / "verify" / "verify_failures.json").exists()


def test_verify_with_config(small_config, tmp_path):
    assert _run("verify", "--config", small_config(), "--suite", "lemmas", "--cases", "2") == 0
    assert _read(tmp_path / "output" / "verify_report.json")["seed"] == 3


def test_verify_failures_are_dumped(tmp_path):
    weak = load_constants().frozen_from({"linear_x_prefactor": 1e-9})
    assert run_verify("lemmas", weak, output_dir=tmp_path, cases=2, progress=False) == 4
    failures = _read(tmp_path / "verify_failures.json")
    assert failures
    assert {failure["name"] for failure in failures} == {"linear_x"}


def test_verify_unknown_suite(tmp_path):
    assert _run("verify", "--suite", "everything", "--out", tmp_path) == 1
    with raises(ConfigurationError):
        run_verify("everything", load_constants(), output_dir=tmp_path)


def test_corrupt_constants_file(small_config, tmp_path):
    corrupt = tmp_path / "constants.ini"
    corrupt.write_text("[constants]\nversion = 1\nlinear_x_prefactor = lots\n", encoding="utf-8")
    assert _run("simulate", "--config", small_config(constants_file=corrupt)) == 1


def test_command_line_errors(tmp_path, monkeypatch):
    assert main(["simulate"]) == 1
    assert main(["unknown"]) == 1
    assert main(["simulate", "--config", str(tmp_path / "missing.ini")]) == 1
    monkeypatch.setenv("GEVREY_NSE_THREADS", "zero")
    assert main(["verify", "--suite", "semigroup", "--cases", "1", "--out", str(tmp_path)]) == 1


def test_calibrate(small_config, tmp_path):
    assert _run("calibrate", "--config", small_config(), "--cases", "1") == 0
    constants = load_constants(tmp_path / "output" / "constants.ini")
    assert constants.version == 2
    assert constants.source == "calibrated"
