"""
Run configuration : documented keys, defaults, validation and logging setup
"""
# gevrey-nse - Gevrey norm Navier-Stokes simulator and verifier
# Copyright (C) 2026  gevrey-nse developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
import logging
import math
import sys
from configparser import ConfigParser, DuplicateOptionError, DuplicateSectionError, Error, ParsingError
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path

from gevrey_nse.calibration import load_constants
from gevrey_nse.errors import ConfigurationError
from gevrey_nse.forcing import ForcingSchedule
from gevrey_nse.mild import THEOREMS, as_fraction, check_stability
from gevrey_nse.snapshots import read_snapshot
from gevrey_nse.spectral import AMPLITUDE_PROFILES, PhysicalParams, random_field, taylor_green

_LOGGER = logging.getLogger(__name__)

# keys used to retrieve config values
_DIMENSION = "dimension"
_BOX_LENGTH = "box_length"
_VISCOSITY = "viscosity"
_TRUNCATION = "truncation"
_DT = "dt"
_HORIZON = "horizon"
_INITIAL_CONDITION = "initial_condition"
_INITIAL_BAND_LOW = "initial_band_low"
_INITIAL_BAND_HIGH = "initial_band_high"
_INITIAL_AMPLITUDE = "initial_amplitude"
_INITIAL_PROFILE = "initial_profile"
_INITIAL_DECAY = "initial_decay"
_INITIAL_FILE = "initial_file"
_SEED = "seed"
_FORCING = "forcing"
_FORCING_KAPPA_BAR = "forcing_kappa_bar"
_FORCING_AMPLITUDE = "forcing_amplitude"
_SIGMA = "sigma"
_Q = "q"
_LAMBDA_SCHEDULE = "lambda_schedule"
_THEOREM = "theorem"
_OUTPUT_DIR = "output_dir"
_SNAPSHOT_STRIDE = "snapshot_stride"
_AVERAGING_HORIZON = "averaging_horizon"
_CONSTANTS_FILE = "constants_file"
_STABILITY_CAP = "stability_cap"
_PICARD_POINTS = "picard_points"
_PICARD_TOLERANCE = "picard_tolerance"
_PICARD_MAX_ITERATIONS = "picard_max_iterations"
_RADIUS_BUDGET = "radius_budget"
_FIT_BAND_LOW = "fit_band_low"
_FIT_BAND_HIGH = "fit_band_high"
_LOG_LEVEL = "log_level"

# keys used to describe logging level
_LOG_LEVEL_DEBUG = "DEBUG"
_LOG_LEVEL_INFO = "INFO"
_LOG_LEVEL_WARNING = "WARNING"
_LOG_LEVEL_ERROR = "ERROR"
_LOG_LEVEL_CRITICAL = "CRITICAL"

# store of matches between human readable log levels and logging module constants
_LOG_LEVELS = {
    _LOG_LEVEL_DEBUG:       logging.DEBUG,
    _LOG_LEVEL_INFO:        logging.INFO,
    _LOG_LEVEL_WARNING:     logging.WARNING,
    _LOG_LEVEL_ERROR:       logging.ERROR,
    _LOG_LEVEL_CRITICAL:    logging.CRITICAL,
}

INITIAL_TAYLOR_GREEN = "taylor_green"
INITIAL_RANDOM = "random"
INITIAL_FILE = "file"
_INITIAL_CONDITIONS = (INITIAL_TAYLOR_GREEN, INITIAL_RANDOM, INITIAL_FILE)

FORCING_NONE = "none"
FORCING_RANDOM = "random"
_FORCINGS = (FORCING_NONE, FORCING_RANDOM)

SCHEDULE_SQRT_NU_T = "sqrt_nu_t"

# run default values
_DEFAULTS = {
    _DIMENSION:             "2",
    _BOX_LENGTH:            repr(2 * math.pi),
    _VISCOSITY:             "1.0",
    _TRUNCATION:            "16",
    _DT:                    "1e-3",
    _HORIZON:               "1.0",
    _INITIAL_CONDITION:     INITIAL_RANDOM,
    _INITIAL_BAND_LOW:      "1.0",
    _INITIAL_BAND_HIGH:     "4.0",
    _INITIAL_AMPLITUDE:     "1.0",
    _INITIAL_PROFILE:       "flat",
    _INITIAL_DECAY:         "0.0",
    _INITIAL_FILE:          "",
    _SEED:                  "0",
    _FORCING:               FORCING_NONE,
    _FORCING_KAPPA_BAR:     "2.0",
    _FORCING_AMPLITUDE:     "1.0",
    _SIGMA:                 "0",
    _Q:                     "2",
    _LAMBDA_SCHEDULE:       SCHEDULE_SQRT_NU_T,
    _THEOREM:               "3.1",
    _OUTPUT_DIR:            "output",
    _SNAPSHOT_STRIDE:       "100",
    _AVERAGING_HORIZON:     "",
    _CONSTANTS_FILE:        "",
    _STABILITY_CAP:         "10.0",
    _PICARD_POINTS:         "24",
    _PICARD_TOLERANCE:      "1e-10",
    _PICARD_MAX_ITERATIONS: "50",
    _RADIUS_BUDGET:         "2.0",
    _FIT_BAND_LOW:          "",
    _FIT_BAND_HIGH:         "",
    _LOG_LEVEL:             _LOG_LEVEL_INFO,
}
_RUN_SECTION_NAME = "run"

# in here, we maintain a list of third party loggers for which we don't want to see anything but WARNING & up
_THIRD_PARTY_LOG_POLLUTERS = [
    'numba.core.ssa',
    'numba.core.byteflow',
    'numba.core.interpreter',
]


def init_logging(level=_LOG_LEVEL_INFO):
    """
    Configures the logging system on stdout.

    :param level: one of DEBUG, INFO, WARNING, ERROR, CRITICAL
    :type level: str

    :raises ConfigurationError: unknown level
    """
    if level not in _LOG_LEVELS:
        raise ConfigurationError(f"{_LOG_LEVEL}={level!r} must be one of {sorted(_LOG_LEVELS)}")
    logging.basicConfig(level=_LOG_LEVELS[level],
                        format='%(asctime)s - %(levelname)s - %(name)s - %(message)s',
                        stream=sys.stdout)
    logging.getLogger().setLevel(_LOG_LEVELS[level])
    for third_party_log_polluter in _THIRD_PARTY_LOG_POLLUTERS:
        logging.getLogger(third_party_log_polluter).setLevel(logging.WARNING)


@dataclass(frozen=True)
class RunConfig:
    """
    Validated run configuration
    """
    params: PhysicalParams
    K: int
    dt: float
    horizon: float
    initial_condition: str
    initial_band: tuple
    initial_amplitude: float
    initial_profile: str
    initial_decay: float
    initial_file: Path
    seed: int
    forcing: str
    forcing_kappa_bar: float
    forcing_amplitude: float
    sigma: Fraction
    q: object
    lambda_schedule: str
    theorem: str
    output_dir: Path
    snapshot_stride: int
    averaging_horizon: float
    constants_file: Path
    stability_cap: float
    picard_points: int
    picard_tolerance: float
    picard_max_iterations: int
    radius_budget: float
    fit_band: tuple
    log_level: str

    @property
    def steps(self):
        """Number of time steps covering the horizon"""
        return max(1, int(round(self.horizon / self.dt)))

    def initial_field(self):
        """
        Builds the configured initial data.

        :rtype: gevrey_nse.spectral.SpectralField
        """
        if self.initial_condition == INITIAL_TAYLOR_GREEN:
            return taylor_green(self.params, self.K, self.initial_amplitude)
        if self.initial_condition == INITIAL_FILE:
            field_ = read_snapshot(self.initial_file)
            if field_.params != self.params or field_.K != self.K:
                raise ConfigurationError(f"{_INITIAL_FILE}={self.initial_file} does not match the configured "
                                         f"dimension, box_length, viscosity and truncation")
            return field_
        return random_field(self.params, self.K, self.initial_band, self.seed, self.initial_profile,
                            self.initial_decay, self.initial_amplitude)

    def forcing_schedule(self):
        """
        Builds the configured time-independent forcing, None when unforced.

        :rtype: gevrey_nse.forcing.ForcingSchedule
        """
        if self.forcing == FORCING_NONE:
            return None
        force = random_field(self.params, self.K, (1.0, self.forcing_kappa_bar), self.seed + 1,
                             amplitude=self.forcing_amplitude)
        return ForcingSchedule.constant(force)

    def constants(self):
        """
        :rtype: gevrey_nse.calibration.CalibrationConstants
        """
        return load_constants(self.constants_file)

    def as_dict(self):
        """:rtype: dict"""
        values = {}
        for item in fields(self):
            value = getattr(self, item.name)
            if isinstance(value, PhysicalParams):
                value = {"n": value.n, "L": value.L, "nu": value.nu}
            elif isinstance(value, (Path, Fraction)):
                value = str(value)
            elif isinstance(value, float) and math.isinf(value):
                value = "inf"
            values[item.name] = value
        return values


class _Reader:
    """Typed access to the run section with field-precise errors"""

    def __init__(self, parser):
        self._parser = parser

    def raw(self, key):
        """Value of a key, falling back to its default"""
        return self._parser.get(_RUN_SECTION_NAME, key, fallback=_DEFAULTS[key]).strip()

    def number(self, key):
        """:rtype: float"""
        raw = self.raw(key)
        try:
            value = float(raw)
        except ValueError as error:
            raise ConfigurationError(f"{key}={raw!r} is not a number") from error
        if math.isnan(value):
            raise ConfigurationError(f"{key}={raw!r} is not a number")
        return value

    def positive(self, key):
        """:rtype: float"""
        value = self.number(key)
        if not (math.isfinite(value) and value > 0):
            raise ConfigurationError(f"{key}={value} must be a positive number")
        return value

    def integer(self, key, minimum=None):
        """:rtype: int"""
        raw = self.raw(key)
        try:
            value = int(raw)
        except ValueError as error:
            raise ConfigurationError(f"{key}={raw!r} is not an integer") from error
        if minimum is not None and value < minimum:
            raise ConfigurationError(f"{key}={value} must be >= {minimum}")
        return value

    def choice(self, key, choices):
        """:rtype: str"""
        value = self.raw(key)
        if value not in choices:
            raise ConfigurationError(f"{key}={value!r} must be one of {list(choices)}")
        return value

    def exponent(self, key):
        """Exact exponent, inf allowed"""
        raw = self.raw(key)
        if raw.lower() == "inf":
            return math.inf
        try:
            return as_fraction(raw)
        except (ValueError, ZeroDivisionError) as error:
            raise ConfigurationError(f"{key}={raw!r} is not a number") from error

    def optional_path(self, key):
        """Existing file or None when the key is empty"""
        raw = self.raw(key)
        if not raw:
            return None
        path = Path(raw).expanduser()
        if not path.is_file():
            raise ConfigurationError(f"{key}={raw} : no such file")
        return path


def _read_parser(path):
    parser = ConfigParser()
    try:
        with open(path, encoding="utf-8") as config_file:
            parser.read_file(config_file)
    except OSError as os_error:
        raise ConfigurationError(f"cannot read config file {path} : {os_error}") from os_error
    except (DuplicateOptionError, DuplicateSectionError, ParsingError) as parsing_error:
        raise ConfigurationError(f"invalid config file {path} : {parsing_error}") from parsing_error
    except Error as parsing_error:
        raise ConfigurationError(f"invalid config file {path} : {parsing_error}") from parsing_error
    if not parser.has_section(_RUN_SECTION_NAME):
        raise ConfigurationError(f"config file {path} has no [{_RUN_SECTION_NAME}] section")
    unknown_sections = [section for section in parser.sections() if section != _RUN_SECTION_NAME]
    if unknown_sections:
        raise ConfigurationError(f"config file {path} has unknown sections : {unknown_sections}")
    unknown = sorted(set(parser.options(_RUN_SECTION_NAME)) - set(_DEFAULTS))
    if unknown:
        raise ConfigurationError(f"config file {path} has unknown keys : {unknown}")
    return parser


def load_run_config(path, seed=None, output_dir=None):
    """
    Reads and validates a run configuration file.

    :param path: INI file with a single [run] section
    :param seed: overrides the seed key
    :param output_dir: overrides the output_dir key

    :rtype: RunConfig

    :raises ConfigurationError: unreadable file, unknown key or invalid value
    """
    parser = _read_parser(path)
    if seed is not None:
        parser.set(_RUN_SECTION_NAME, _SEED, str(seed))
    if output_dir is not None:
        parser.set(_RUN_SECTION_NAME, _OUTPUT_DIR, str(output_dir))
    reader = _Reader(parser)

    params = PhysicalParams(reader.integer(_DIMENSION), reader.positive(_BOX_LENGTH), reader.positive(_VISCOSITY))
    K = reader.integer(_TRUNCATION, minimum=1)
    dt = reader.positive(_DT)
    horizon = reader.positive(_HORIZON)

    initial_condition = reader.choice(_INITIAL_CONDITION, _INITIAL_CONDITIONS)
    band = (reader.positive(_INITIAL_BAND_LOW), reader.positive(_INITIAL_BAND_HIGH))
    if not band[0] < band[1] <= K:
        raise ConfigurationError(f"{_INITIAL_BAND_LOW}={band[0]}, {_INITIAL_BAND_HIGH}={band[1]} "
                                 f"must satisfy low < high <= {_TRUNCATION}={K}")
    initial_file = reader.optional_path(_INITIAL_FILE)
    if initial_condition == INITIAL_FILE and initial_file is None:
        raise ConfigurationError(f"{_INITIAL_CONDITION}={INITIAL_FILE} needs {_INITIAL_FILE}")
    if initial_condition == INITIAL_TAYLOR_GREEN and params.n != 2:
        raise ConfigurationError(f"{_INITIAL_CONDITION}={INITIAL_TAYLOR_GREEN} needs {_DIMENSION}=2")
    initial_decay = reader.number(_INITIAL_DECAY)
    if initial_decay < 0:
        raise ConfigurationError(f"{_INITIAL_DECAY}={initial_decay} must be >= 0")

    forcing = reader.choice(_FORCING, _FORCINGS)
    kappa_bar = reader.positive(_FORCING_KAPPA_BAR)
    if not 1 <= kappa_bar <= K:
        raise ConfigurationError(f"{_FORCING_KAPPA_BAR}={kappa_bar} must lie in [1, {_TRUNCATION}={K}]")

    sigma = reader.exponent(_SIGMA)
    if sigma == math.inf or sigma <= -1:
        raise ConfigurationError(f"{_SIGMA}={reader.raw(_SIGMA)} must be a finite number > -1")
    q = reader.exponent(_Q)
    if not q > 1:
        raise ConfigurationError(f"{_Q}={reader.raw(_Q)} must be > 1")

    horizon_average = reader.raw(_AVERAGING_HORIZON)
    averaging_horizon = horizon if not horizon_average else reader.positive(_AVERAGING_HORIZON)
    if averaging_horizon > horizon:
        raise ConfigurationError(f"{_AVERAGING_HORIZON}={averaging_horizon} exceeds {_HORIZON}={horizon}")

    fit_low, fit_high = reader.raw(_FIT_BAND_LOW), reader.raw(_FIT_BAND_HIGH)
    fit_band = (reader.positive(_FIT_BAND_LOW) if fit_low else K / 4,
                reader.positive(_FIT_BAND_HIGH) if fit_high else 3 * K / 4)
    if not fit_band[0] < fit_band[1]:
        raise ConfigurationError(f"{_FIT_BAND_LOW}={fit_band[0]} must be < {_FIT_BAND_HIGH}={fit_band[1]}")

    radius_budget = reader.positive(_RADIUS_BUDGET)
    if not radius_budget > 1:
        raise ConfigurationError(f"{_RADIUS_BUDGET}={radius_budget} must be > 1")

    stability_cap = reader.positive(_STABILITY_CAP)
    check_stability(params, K, dt, stability_cap)

    config = RunConfig(
        params=params, K=K, dt=dt, horizon=horizon,
        initial_condition=initial_condition, initial_band=band,
        initial_amplitude=reader.positive(_INITIAL_AMPLITUDE),
        initial_profile=reader.choice(_INITIAL_PROFILE, AMPLITUDE_PROFILES),
        initial_decay=initial_decay, initial_file=initial_file,
        seed=reader.integer(_SEED, minimum=0),
        forcing=forcing, forcing_kappa_bar=kappa_bar, forcing_amplitude=reader.positive(_FORCING_AMPLITUDE),
        sigma=sigma, q=q,
        lambda_schedule=reader.choice(_LAMBDA_SCHEDULE, (SCHEDULE_SQRT_NU_T,)),
        theorem=reader.choice(_THEOREM, THEOREMS),
        output_dir=Path(reader.raw(_OUTPUT_DIR)).expanduser(),
        snapshot_stride=reader.integer(_SNAPSHOT_STRIDE, minimum=1),
        averaging_horizon=averaging_horizon,
        constants_file=reader.optional_path(_CONSTANTS_FILE),
        stability_cap=stability_cap,
        picard_points=reader.integer(_PICARD_POINTS, minimum=3),
        picard_tolerance=reader.positive(_PICARD_TOLERANCE),
        picard_max_iterations=reader.integer(_PICARD_MAX_ITERATIONS, minimum=1),
        radius_budget=radius_budget, fit_band=fit_band,
        log_level=reader.choice(_LOG_LEVEL, tuple(_LOG_LEVELS)),
    )

    _LOGGER.debug("Run config dump - START")
    for key, value in config.as_dict().items():
        _LOGGER.debug("%s = %s", key, value)
    _LOGGER.debug("Run config dump - END")
    return config
