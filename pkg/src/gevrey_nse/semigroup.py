"""
Heat semigroup and Gevrey weight interplay as checkable inequalities : heat smoothing,
radius schedule absorption, convolution algebra bound and heat-bilinear estimate
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
from dataclasses import dataclass, field

import numpy as np
from scipy import signal
from tqdm import tqdm

from gevrey_nse.code_utilities import log
from gevrey_nse.datastore import INEQUALITY_SLACK
from gevrey_nse.errors import ArgumentError
from gevrey_nse.norms import gevrey
from gevrey_nse.spectral import PhysicalParams, bilinear_fft, heat_propagate, random_field

_LOGGER = logging.getLogger(__name__)

# constant of the radius schedule absorption for lam(t) = sqrt(nu t)
SCHEDULE_CONSTANT = math.exp(0.5)


@dataclass
class SmoothingEstimateReport:
    """
    Both sides of an estimate lhs <= rhs, rhs including constant_used.
    """
    name: str
    lhs: float
    rhs: float
    constant_used: float
    ratio: float = field(init=False)
    passed: bool = field(init=False)
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.rhs > 0:
            self.ratio = self.lhs / self.rhs
        else:
            self.ratio = 0.0 if self.lhs <= 0 else math.inf
        self.passed = bool(self.ratio <= 1 + INEQUALITY_SLACK)

    def as_dict(self):
        """:rtype: dict"""
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant_used,
            "ratio": self.ratio,
            "passed": self.passed,
            "parameters": self.parameters,
        }


def _power(base, exponent):
    """base ** exponent with 0 ** 0 = 1"""
    if exponent == 0:
        return 1.0
    return base ** exponent


def heat_smoothing_constant(beta):
    """
    sup over x >= 0 of x^(beta/2) exp(-x), that is (beta / 2e)^(beta/2).

    :rtype: float
    """
    return _power(beta / (2 * math.e), beta / 2)


def algebra_constant(gamma):
    """
    Constant of the convolution algebra bound, 2^max(gamma, 1).

    :rtype: float
    """
    return 2.0 ** max(gamma, 1.0)


def heat_bilinear_constant(gamma, delta):
    """
    algebra_constant(gamma) ((1 + delta - gamma) / 2e)^max(0, alpha), alpha = (1 + delta - gamma) / 2

    :rtype: float
    """
    alpha = (1 + delta - gamma) / 2
    return algebra_constant(gamma) * _power((1 + delta - gamma) / (2 * math.e), max(0.0, alpha))


@log
def check_heat_smoothing(u, lam, sigma, beta, t):
    """
    Checks (nu t)^(beta/2) |exp(-nu t A) u|_{lam, sigma+beta} <= (beta/2e)^(beta/2) |u|_{lam, sigma}.

    :type u: gevrey_nse.spectral.SpectralField

    :rtype: SmoothingEstimateReport

    :raises ArgumentError: t <= 0 or beta < 0
    """
    if not t > 0:
        raise ArgumentError(f"t={t} must be > 0")
    if beta < 0:
        raise ArgumentError(f"beta={beta} must be >= 0")
    constant = heat_smoothing_constant(beta)
    lhs = _power(u.params.nu * t, beta / 2) * gevrey(heat_propagate(u, t), lam, sigma + beta)
    rhs = constant * gevrey(u, lam, sigma)
    return SmoothingEstimateReport("heat_smoothing", lhs, rhs, constant,
                                   parameters={"lambda": lam, "sigma": sigma, "beta": beta, "t": t})


@log
def check_schedule_absorption(u, s, t, sigma):
    """
    Checks |exp(-nu (t-s) A) u|_{lam(t), sigma} <= e^(1/2) |exp(-(nu/2) (t-s) A) u|_{lam(s), sigma}
    for lam(t) = sqrt(nu t).

    :rtype: SmoothingEstimateReport

    :raises ArgumentError: unless 0 <= s < t
    """
    if s < 0 or not s < t:
        raise ArgumentError(f"(s, t)=({s}, {t}) must satisfy 0 <= s < t")
    nu = u.params.nu
    lhs = gevrey(heat_propagate(u, t - s), math.sqrt(nu * t), sigma)
    rhs = SCHEDULE_CONSTANT * gevrey(heat_propagate(u, t - s, nu_scale=0.5), math.sqrt(nu * s), sigma)
    return SmoothingEstimateReport("schedule_absorption", lhs, rhs, SCHEDULE_CONSTANT,
                                   parameters={"s": s, "t": t, "sigma": sigma})


def modulus_convolution(u, v):
    """
    Scalar convolution |u| * |v| over the doubled box |k|_inf <= 2K.

    :return: (vectors, values) with vectors shaped (M, n) in lexicographic order
    :rtype: tuple
    """
    u.check_compatible(v)
    lattice = u.lattice
    shape = (lattice.side,) * u.n
    u_moduli = np.sqrt(np.sum(np.abs(u.box_coefficients()) ** 2, axis=1)).reshape(shape)
    v_moduli = np.sqrt(np.sum(np.abs(v.box_coefficients()) ** 2, axis=1)).reshape(shape)
    values = signal.convolve(u_moduli, v_moduli, mode="full", method="direct")
    axes = [np.arange(-2 * u.K, 2 * u.K + 1)] * u.n
    grids = np.meshgrid(*axes, indexing="ij")
    vectors = np.stack([grid.ravel() for grid in grids], axis=1)
    return vectors, np.clip(values.ravel(), 0.0, None)


def _convolution_gevrey_norm(u, v, lam, gamma):
    vectors, values = modulus_convolution(u, v)
    norms = np.sqrt(np.sum(vectors * vectors, axis=1).astype(np.float64))
    kappa0 = u.params.kappa0
    with np.errstate(divide="ignore"):
        weights = np.where(norms > 0, norms ** gamma, 1.0 if gamma == 0 else 0.0)
    return kappa0 ** gamma * float(np.sum(np.exp(lam * kappa0 * norms) * weights * values))


@log
def check_algebra_bound(u, v, lam, gamma):
    """
    Checks |(|u| * |v|)|_{lam, gamma} <= 2^max(gamma, 1) kappa0^-gamma |u|_{lam, gamma} |v|_{lam, gamma}.

    :rtype: SmoothingEstimateReport

    :raises ArgumentError: gamma < 0 or lam < 0
    """
    if gamma < 0:
        raise ArgumentError(f"gamma={gamma} must be >= 0")
    if lam < 0:
        raise ArgumentError(f"lambda={lam} must be >= 0")
    constant = algebra_constant(gamma)
    lhs = _convolution_gevrey_norm(u, v, lam, gamma)
    rhs = constant * u.params.kappa0 ** -gamma * gevrey(u, lam, gamma) * gevrey(v, lam, gamma)
    return SmoothingEstimateReport("algebra_bound", lhs, rhs, constant,
                                   parameters={"lambda": lam, "gamma": gamma})


@log
def check_heat_bilinear(u, v, lam, gamma, delta, t):
    """
    Checks |exp(-nu t A) B[u, v]|_{lam, delta}
    <= C kappa0^(1+delta-2 gamma) (nu kappa0^2 t)^-max(0, alpha) |u|_{lam, gamma} |v|_{lam, gamma}
    with alpha = (1 + delta - gamma) / 2 and C = :func:`heat_bilinear_constant`.

    :rtype: SmoothingEstimateReport

    :raises ArgumentError: t <= 0 or gamma < 0
    """
    if not t > 0:
        raise ArgumentError(f"t={t} must be > 0")
    if gamma < 0:
        raise ArgumentError(f"gamma={gamma} must be >= 0")
    params = u.params
    alpha = (1 + delta - gamma) / 2
    constant = heat_bilinear_constant(gamma, delta)
    lhs = gevrey(heat_propagate(bilinear_fft(u, v), t), lam, delta)
    rhs = (constant * params.kappa0 ** (1 + delta - 2 * gamma)
           * _power(params.nu * params.kappa0 ** 2 * t, -max(0.0, alpha))
           * gevrey(u, lam, gamma) * gevrey(v, lam, gamma))
    return SmoothingEstimateReport("heat_bilinear", lhs, rhs, constant,
                                   parameters={"lambda": lam, "gamma": gamma, "delta": delta, "t": t})


def _random_case_field(rng, dimension=None):
    n = int(rng.choice([2, 3])) if dimension is None else dimension
    K = 6 if n == 2 else 3
    params = PhysicalParams(n, float(rng.uniform(0.5, 2.0)) * 2 * math.pi, float(rng.uniform(0.1, 2.0)))
    return params, K


def _sample_fields(rng, count):
    params, K = _random_case_field(rng)
    fields = []
    for _ in range(count):
        high = float(rng.uniform(1.0, K))
        fields.append(random_field(params, K, (1.0, high), int(rng.integers(2 ** 32)),
                                   amplitude=float(rng.uniform(0.1, 10.0))))
    return fields


@log
def run_semigroup_suite(cases=1000, seed=0, progress=False):
    """
    Runs every semigroup estimate over pinned random cases.

    :param cases: number of cases per estimate
    :type cases: int
    :param seed: seed of the case generator
    :type seed: int
    :param progress: display a progress bar
    :type progress: bool

    :return: all reports
    :rtype: list
    """
    rng = np.random.default_rng(seed)
    reports = []
    for _ in tqdm(range(cases), desc="semigroup", disable=not progress):
        u, v = _sample_fields(rng, 2)
        lam = float(rng.uniform(0.0, 0.5))
        beta = float(rng.uniform(0.0, 1.0))
        sigma = float(rng.uniform(-1.0, 1.0))
        t = float(rng.uniform(1e-3, 1.0))
        reports.append(check_heat_smoothing(u, lam, sigma, beta, t))

        s = float(rng.uniform(0.0, t))
        reports.append(check_schedule_absorption(u, s, t, sigma))

        gamma = float(rng.choice([0.0, 0.5, 1.0, 2.0]))
        reports.append(check_algebra_bound(u, v, lam, gamma))

        delta = float(rng.uniform(gamma - 1.5, gamma + 1.0))
        reports.append(check_heat_bilinear(u, v, lam, gamma, delta, t))
    failures = [report for report in reports if not report.passed]
    _LOGGER.info("Semigroup suite : %d checks, %d failures", len(reports), len(failures))
    return reports
