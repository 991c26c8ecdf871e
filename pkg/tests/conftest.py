import math

import pytest

from gevrey_nse.spectral import PhysicalParams, SpectralField, random_field


@pytest.fixture
def unit_params():
    """2D box of side 2 pi with unit viscosity, so kappa0 = 1"""
    return PhysicalParams(2, 2 * math.pi, 1.0)


@pytest.fixture
def unit_params_3d():
    return PhysicalParams(3, 2 * math.pi, 1.0)


@pytest.fixture
def shear_pair(unit_params):
    """Conjugate pair +-(1, 0) carrying (0, 1)"""
    return SpectralField.from_modes(unit_params, 4, {(1, 0): (0.0, 1.0)})


@pytest.fixture
def random_2d(unit_params):
    return random_field(unit_params, 6, (1.0, 6.0), seed=7)


@pytest.fixture
def small_config(tmp_path):
    """Writes a small run configuration and returns its path"""
    def write(**overrides):
        values = {
            "dimension": "2",
            "truncation": "6",
            "dt": "0.01",
            "horizon": "0.1",
            "initial_condition": "random",
            "initial_band_low": "1",
            "initial_band_high": "6",
            "initial_amplitude": "1e-6",
            "seed": "3",
            "snapshot_stride": "2",
            "output_dir": str(tmp_path / "output"),
            "picard_points": "8",
            "log_level": "WARNING",
        }
        values.update({key: str(value) for key, value in overrides.items()})
        path = tmp_path / "run.ini"
        lines = ["[run]"] + [f"{key} = {value}" for key, value in values.items()]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path
    return write
