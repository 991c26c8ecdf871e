"""
Versioned absolute constants standing for the unspecified constants of the estimates
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
from configparser import ConfigParser, Error
from dataclasses import asdict, dataclass, replace
from importlib import resources

from gevrey_nse.errors import ConfigurationError

_LOGGER = logging.getLogger(__name__)

_SECTION_NAME = "constants"

# keys used to retrieve constants
_VERSION = "version"
_SOURCE = "source"
CONSTANT_NAMES = (
    "linear_x_prefactor",
    "linear_y_prefactor",
    "nonlinear_prefactor",
    "corollary_prefactor",
    "brezis_gallouet",
    "agmon_slack",
    "chebyshev_a",
    "chebyshev_b",
    "chebyshev_w",
)

# calibrated constants are frozen at this multiple of the largest observed ratio
CALIBRATION_MARGIN = 1.1


@dataclass(frozen=True)
class CalibrationConstants:
    """
    Named absolute constants, with the version and origin of the file they come from
    """
    version: int
    source: str
    linear_x_prefactor: float
    linear_y_prefactor: float
    nonlinear_prefactor: float
    corollary_prefactor: float
    brezis_gallouet: float
    agmon_slack: float
    chebyshev_a: float
    chebyshev_b: float
    chebyshev_w: float

    def as_dict(self):
        """:rtype: dict"""
        return asdict(self)

    def frozen_from(self, observed_ratios):
        """
        Builds the next version where each observed constant is frozen at
        CALIBRATION_MARGIN x its largest observed ratio.

        :param observed_ratios: map from constant name to largest observed ratio
        :type observed_ratios: dict

        :rtype: CalibrationConstants
        """
        updates = {}
        for name, ratio in observed_ratios.items():
            if name not in CONSTANT_NAMES:
                raise ConfigurationError(f"unknown constant {name!r}")
            updates[name] = CALIBRATION_MARGIN * ratio
        return replace(self, version=self.version + 1, source="calibrated", **updates)


def default_constants_path():
    """
    Path of the constants file shipped with the package.

    :rtype: pathlib.Path
    """
    return resources.files("gevrey_nse") / "data" / "constants.ini"


def load_constants(path=None):
    """
    Reads and validates a constants file.

    :param path: file to read, defaults to the shipped constants
    :type path: str or pathlib.Path

    :rtype: CalibrationConstants

    :raises ConfigurationError: missing or corrupt file, missing or non positive constant
    """
    path = default_constants_path() if path is None else path
    parser = ConfigParser()
    try:
        with open(path, encoding="utf-8") as constants_file:
            parser.read_file(constants_file)
    except OSError as os_error:
        raise ConfigurationError(f"cannot read constants file {path} : {os_error}") from os_error
    except Error as parsing_error:
        raise ConfigurationError(f"corrupt constants file {path} : {parsing_error}") from parsing_error

    if not parser.has_section(_SECTION_NAME):
        raise ConfigurationError(f"constants file {path} has no [{_SECTION_NAME}] section")
    section = parser[_SECTION_NAME]

    unknown = set(section.keys()) - set(CONSTANT_NAMES) - {_VERSION, _SOURCE}
    if unknown:
        raise ConfigurationError(f"constants file {path} has unknown keys : {sorted(unknown)}")

    try:
        version = int(section[_VERSION])
    except (KeyError, ValueError) as error:
        raise ConfigurationError(f"constants file {path} : invalid or missing version") from error
    if version < 1:
        raise ConfigurationError(f"constants file {path} : version={version} must be >= 1")

    values = {}
    for name in CONSTANT_NAMES:
        try:
            value = float(section[name])
        except KeyError as error:
            raise ConfigurationError(f"constants file {path} : missing constant {name}") from error
        except ValueError as error:
            raise ConfigurationError(f"constants file {path} : {name}={section[name]!r} is not a number") from error
        if not (math.isfinite(value) and value > 0):
            raise ConfigurationError(f"constants file {path} : {name}={value} must be a positive number")
        values[name] = value

    constants = CalibrationConstants(version=version, source=section.get(_SOURCE, "unknown"), **values)
    _LOGGER.debug("Loaded constants version %d (%s) from %s", version, constants.source, path)
    return constants


def save_constants(constants, path):
    """
    Writes a constants file.

    :type constants: CalibrationConstants
    :param path: destination file
    :type path: str or pathlib.Path
    """
    parser = ConfigParser()
    parser.add_section(_SECTION_NAME)
    parser.set(_SECTION_NAME, _VERSION, str(constants.version))
    parser.set(_SECTION_NAME, _SOURCE, constants.source)
    for name in CONSTANT_NAMES:
        parser.set(_SECTION_NAME, name, repr(float(getattr(constants, name))))
    with open(path, "w", encoding="utf-8") as constants_file:
        parser.write(constants_file)
    _LOGGER.info("Constants version %d saved to %s", constants.version, path)
