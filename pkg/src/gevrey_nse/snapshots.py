"""
Run artifacts : binary field snapshots, JSON-lines time series, CSV spectra and shell tables,
JSON reports
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
import csv
import json
import logging
import math
from pathlib import Path

import numpy as np

from gevrey_nse.errors import ConfigurationError
from gevrey_nse.spectral import PhysicalParams, SpectralField, get_lattice

_LOGGER = logging.getLogger(__name__)

SNAPSHOT_FORMAT = "gevrey-nse-snapshot"
SNAPSHOT_VERSION = 1


def _record_dtype(n):
    return np.dtype([("k", "<i4", (n,)), ("u", "<f8", (2 * n,))])


def _to_json(value):
    """json.dumps default hook for numpy scalars, arrays and non finite floats"""
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _sanitize(value):
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {key: _sanitize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(item) for item in value]
    return value


def dumps(payload):
    """
    Deterministic JSON text : sorted keys, non finite floats spelled as strings.

    :rtype: str
    """
    return json.dumps(_sanitize(payload), sort_keys=True, default=_to_json)


def write_snapshot(field_, path):
    """
    Writes a field as a JSON header line followed by little-endian records of n int32
    wave vector components and 2n float64 interleaved real and imaginary parts.

    :type field_: gevrey_nse.spectral.SpectralField
    :param path: destination file
    """
    params = field_.params
    header = {"format": SNAPSHOT_FORMAT, "version": SNAPSHOT_VERSION, "n": params.n, "L": params.L,
              "nu": params.nu, "K": field_.K, "count": field_.lattice.count}
    records = np.zeros(field_.lattice.count, dtype=_record_dtype(params.n))
    records["k"] = field_.lattice.vectors
    interleaved = np.empty((field_.lattice.count, 2 * params.n))
    interleaved[:, 0::2] = field_.coeffs.real
    interleaved[:, 1::2] = field_.coeffs.imag
    records["u"] = interleaved
    with open(path, "wb") as snapshot_file:
        snapshot_file.write((dumps(header) + "\n").encode("utf-8"))
        snapshot_file.write(records.tobytes())
    _LOGGER.debug("Snapshot written to %s", path)


def read_snapshot(path):
    """
    Reads a binary snapshot.

    :rtype: gevrey_nse.spectral.SpectralField

    :raises ConfigurationError: missing, truncated or foreign file
    """
    try:
        with open(path, "rb") as snapshot_file:
            header = json.loads(snapshot_file.readline().decode("utf-8"))
            payload = snapshot_file.read()
    except OSError as os_error:
        raise ConfigurationError(f"cannot read snapshot {path} : {os_error}") from os_error
    except (UnicodeDecodeError, json.JSONDecodeError) as error:
        raise ConfigurationError(f"snapshot {path} has no valid header : {error}") from error

    if not isinstance(header, dict) or header.get("format") != SNAPSHOT_FORMAT:
        raise ConfigurationError(f"{path} is not a {SNAPSHOT_FORMAT} file")
    params = PhysicalParams(int(header["n"]), float(header["L"]), float(header["nu"]))
    K = int(header["K"])
    dtype = _record_dtype(params.n)
    if len(payload) != int(header["count"]) * dtype.itemsize:
        raise ConfigurationError(f"snapshot {path} is truncated")
    records = np.frombuffer(payload, dtype=dtype)
    lattice = get_lattice(params.n, K)
    coeffs = np.zeros((lattice.count, params.n), dtype=np.complex128)
    values = records["u"][:, 0::2] + 1j * records["u"][:, 1::2]
    for vector, value in zip(records["k"], values):
        slot, conjugate = lattice.locate(tuple(vector))
        coeffs[slot] = np.conj(value) if conjugate else value
    return SpectralField(params, K, coeffs)


def write_field_csv(field_, path):
    """
    Human readable dump : one row per stored wave vector.
    """
    n = field_.n
    header = [f"k{axis}" for axis in range(n)]
    header += [f"{part}{axis}" for axis in range(n) for part in ("re", "im")]
    with open(path, "w", newline="", encoding="utf-8") as csv_file:
        writer = csv.writer(csv_file)
        writer.writerow(header)
        for vector, value in zip(field_.lattice.vectors, field_.coeffs):
            row = [int(component) for component in vector]
            row += [repr(float(part)) for component in value for part in (component.real, component.imag)]
            writer.writerow(row)


class JsonLinesWriter:
    """
    Appends one JSON object per line, flushing after each record.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._file = None

    def __enter__(self):
        self._file = open(self.path, "w", encoding="utf-8")
        return self

    def __exit__(self, *exc_info):
        self._file.close()
        self._file = None

    def write(self, record):
        """
        :param record: mapping, or object with an as_dict method
        """
        payload = record.as_dict() if hasattr(record, "as_dict") else record
        self._file.write(dumps(payload) + "\n")
        self._file.flush()


def read_json_lines(path):
    """
    :rtype: list
    """
    with open(path, encoding="utf-8") as lines_file:
        return [json.loads(line) for line in lines_file if line.strip()]


def write_spectrum_csv(bands, path):
    """
    Rows (kappa, e_band).
    """
    with open(path, "w", newline="", encoding="utf-8") as csv_file:
        writer = csv.writer(csv_file)
        writer.writerow(["kappa", "e_band"])
        for kappa, value in bands:
            writer.writerow([repr(float(kappa)), repr(float(value))])


def write_shell_csv(estimate, kappa0, path):
    """
    Rows (shell, |k| of the shell maximum, shell maximum, fitted line value).

    :type estimate: gevrey_nse.radius.RadiusEstimate
    """
    fitted = estimate.fitted(kappa0)
    with open(path, "w", newline="", encoding="utf-8") as csv_file:
        writer = csv.writer(csv_file)
        writer.writerow(["shell", "k_norm", "shell_max", "fitted"])
        for (shell, norm, value), line in zip(estimate.shell_maxima, fitted):
            writer.writerow([int(shell), repr(float(norm)), repr(float(value)), repr(float(line))])


def write_report(payload, path):
    """
    Writes a JSON report.
    """
    with open(path, "w", encoding="utf-8") as report_file:
        report_file.write(json.dumps(_sanitize(payload), sort_keys=True, indent=2, default=_to_json))
        report_file.write("\n")
    _LOGGER.info("Report written to %s", path)
