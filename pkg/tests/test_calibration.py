from pytest import approx, raises

from gevrey_nse.calibration import (CALIBRATION_MARGIN, CONSTANT_NAMES, default_constants_path, load_constants,
                                    save_constants)
from gevrey_nse.errors import ConfigurationError


def test_load_default_constants():
    constants = load_constants()
    assert constants.version == 1
    assert constants.source == "bound"
    assert constants.linear_x_prefactor == 3.7
    assert constants.linear_y_prefactor == 5.0
    assert constants.nonlinear_prefactor == 6.0
    assert constants.agmon_slack == 4.0
    assert default_constants_path().name == "constants.ini"


def test_save_then_load(tmp_path):
    constants = load_constants()
    path = tmp_path / "constants.ini"
    save_constants(constants, path)
    assert load_constants(path) == constants


def test_frozen_from():
    constants = load_constants()
    frozen = constants.frozen_from({"nonlinear_prefactor": 2.0})
    assert frozen.version == 2
    assert frozen.source == "calibrated"
    assert frozen.nonlinear_prefactor == approx(CALIBRATION_MARGIN * 2.0)
    assert frozen.linear_x_prefactor == constants.linear_x_prefactor
    with raises(ConfigurationError):
        constants.frozen_from({"speed_of_light": 1.0})


def _write(tmp_path, text):
    path = tmp_path / "constants.ini"
    path.write_text(text, encoding="utf-8")
    return path


def _valid_lines(**overrides):
    values = {"version": "1", **{name: "1.0" for name in CONSTANT_NAMES}, **overrides}
    return "[constants]\n" + "".join(f"{key} = {value}\n" for key, value in values.items() if value is not None)


def test_minimal_file(tmp_path):
    constants = load_constants(_write(tmp_path, _valid_lines()))
    assert constants.source == "unknown"
    assert constants.chebyshev_w == 1.0


def test_invalid_files(tmp_path):
    with raises(ConfigurationError):
        load_constants(tmp_path / "missing.ini")
    with raises(ConfigurationError):
        load_constants(_write(tmp_path, "not an ini file\n"))
    with raises(ConfigurationError):
        load_constants(_write(tmp_path, "[other]\nversion = 1\n"))
    with raises(ConfigurationError):
        load_constants(_write(tmp_path, _valid_lines(speed_of_light="1.0")))
    with raises(ConfigurationError):
        load_constants(_write(tmp_path, _valid_lines(version="zero")))
    with raises(ConfigurationError):
        load_constants(_write(tmp_path, _valid_lines(version="0")))
    with raises(ConfigurationError):
        load_constants(_write(tmp_path, _valid_lines(agmon_slack=None)))
    with raises(ConfigurationError):
        load_constants(_write(tmp_path, _valid_lines(agmon_slack="many")))
    with raises(ConfigurationError):
        load_constants(_write(tmp_path, _valid_lines(agmon_slack="-1")))
    with raises(ConfigurationError):
        load_constants(_write(tmp_path, _valid_lines(agmon_slack="inf")))
