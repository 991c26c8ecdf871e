"""
Body force schedules : time-independent or sampled on a time grid
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

import numpy as np

from gevrey_nse.errors import ArgumentError, ConfigurationError
from gevrey_nse.spectral import leray_project

_LOGGER = logging.getLogger(__name__)


class ForcingSchedule:
    """
    Divergence-free body force f(t).

    Forces are Leray projected on construction. A sampled schedule is linearly
    interpolated between its samples.
    """

    def __init__(self, fields, times=None):
        if not fields:
            raise ArgumentError("a forcing schedule needs at least one field")
        first = fields[0]
        for other in fields[1:]:
            first.check_compatible(other)
        self._fields = [leray_project(item) for item in fields]
        if times is None:
            if len(fields) != 1:
                raise ArgumentError("a time-independent forcing holds exactly one field")
            self._times = None
        else:
            times = np.asarray(times, dtype=np.float64)
            if times.shape != (len(fields),):
                raise ArgumentError(f"{len(fields)} forcing samples do not match {times.shape} times")
            if len(times) < 2 or np.any(np.diff(times) <= 0):
                raise ArgumentError("forcing sample times must be strictly increasing, at least 2 of them")
            self._times = times

    @classmethod
    def constant(cls, field_):
        """
        Time-independent forcing.

        :rtype: ForcingSchedule
        """
        return cls([field_])

    @classmethod
    def sampled(cls, times, fields):
        """
        Forcing sampled on a time grid.

        :rtype: ForcingSchedule
        """
        return cls(list(fields), times)

    @property
    def is_time_independent(self):
        """:rtype: bool"""
        return self._times is None

    @property
    def times(self):
        """Sample times, None for a time-independent forcing"""
        return self._times

    @property
    def fields(self):
        """Projected forcing samples"""
        return list(self._fields)

    @property
    def params(self):
        """:rtype: gevrey_nse.spectral.PhysicalParams"""
        return self._fields[0].params

    @property
    def K(self):  # pylint: disable=invalid-name
        """:rtype: int"""
        return self._fields[0].K

    @property
    def horizon(self):
        """
        Last time the forcing is known at, infinite for a time-independent forcing.

        :rtype: float
        """
        return math.inf if self._times is None else float(self._times[-1])

    def check_compatible(self, field_):
        """
        :raises ConfigurationError: field_ does not share params and truncation with the forcing
        """
        try:
            self._fields[0].check_compatible(field_)
        except ConfigurationError as error:
            raise ConfigurationError(f"forcing does not match the flow : {error}") from error

    def at(self, t):
        """
        Forcing at time t.

        :rtype: gevrey_nse.spectral.SpectralField

        :raises ArgumentError: t lies outside the sampled window
        """
        if self._times is None:
            return self._fields[0]
        if t < self._times[0] or t > self._times[-1]:
            raise ArgumentError(f"t={t} outside forcing window [{self._times[0]}, {self._times[-1]}]")
        right = int(np.searchsorted(self._times, t, side="left"))
        if self._times[right] == t:
            return self._fields[right]
        left = right - 1
        weight = (t - self._times[left]) / (self._times[right] - self._times[left])
        return (1 - weight) * self._fields[left] + weight * self._fields[right]

    def summary(self):
        """Short description used in logs"""
        kind = "constant" if self._times is None else f"sampled({len(self._times)})"
        return f"ForcingSchedule({kind}, n={self.params.n}, K={self.K})"
