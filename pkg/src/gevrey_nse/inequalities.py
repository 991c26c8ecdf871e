"""
Numerical verification of the auxiliary inequalities : beta-type time integrals, the Mf and
Grashof number bracket, time averaged Brezis-Gallouet and Agmon type bounds, the linear and
nonlinear mild solution estimates, and the calibration of their absolute constants
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
import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
from scipy import integrate
from tqdm import tqdm

from gevrey_nse.code_utilities import log
from gevrey_nse.datastore import APPENDIX_SLACK
from gevrey_nse.errors import ArgumentError, DomainError
from gevrey_nse.mild import (beta_integral_constant, duhamel_trajectory, evaluate_phi, linear_constant_x,
                             linear_constant_y, nonlinear_lemma_constant, smoothing_gap, time_grid,
                             trajectory_norms)
from gevrey_nse.norms import (SqrtSchedule, compute_data_numbers, conjugate_exponent, gevrey,
                              mf_grashof_constants)
from gevrey_nse.forcing import ForcingSchedule
from gevrey_nse.spectral import PROFILE_GAUSSIAN_DECAY, PhysicalParams, SpectralField, random_field, support_radius
from gevrey_nse.turbulence import time_average

_LOGGER = logging.getLogger(__name__)

# beta integral grid
BETA_B_VALUES = (0.0, 0.5, 1.0, 10.0)
BETA_EXPONENTS = (0.0, 0.25, 0.5, 0.75, 0.9)
BETA_T_VALUES = (0.01, 0.1, 1.0, 5.0, 10.0)

AGMON_SIGMAS = (-1.4, -1.0, -0.75, -0.6)

# (sigma, q) pairs swept by the lemma suite
LEMMA_SETTINGS = ((0.0, 2.0), (-0.5, 2.0), (-0.75, 59 / 49), (0.0, math.inf), (-0.5, math.inf))

LEMMA_GRID_POINTS = 24


@dataclass
class InequalityCase:
    """
    Both sides of an inequality lhs <= rhs, rhs including constant.
    """
    name: str
    lhs: float
    rhs: float
    constant: float
    parameters: dict = field(default_factory=dict)
    passed: bool = field(init=False)
    ratio: float = field(init=False)

    def __post_init__(self):
        self.passed = bool(self.lhs <= self.rhs * (1 + APPENDIX_SLACK))
        if self.rhs > 0:
            self.ratio = self.lhs / self.rhs
        else:
            self.ratio = 0.0 if self.lhs <= 0 else math.inf

    def as_dict(self):
        """:rtype: dict"""
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant,
            "ratio": self.ratio,
            "passed": self.passed,
            "parameters": {key: _jsonable(value) for key, value in self.parameters.items()},
        }


def _jsonable(value):
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def _cap(s, b):
    """s ^ 1/b, with b = 0 read as no cap"""
    return s if b == 0 else min(s, 1 / b)


def _quad(function, low, high, points=None):
    value, _ = integrate.quad(function, low, high, points=points, epsabs=0.0, epsrel=1e-13, limit=500)
    return value


def beta_integral(b, c, d, t):
    """
    int_0^t exp(-b (t-s)) (t-s)^-c (s ^ 1/b)^-d ds.

    The integral is split at t/2. Substitutions v = s^(1-d) on the left half and
    u = (t-s)^(1-c) on the right half remove the endpoint singularities.

    :rtype: float
    """
    half = t / 2

    def left(v):
        s = v ** (1 / (1 - d))
        excess = 1.0 if b == 0 or s * b <= 1 else (s * b) ** d
        return math.exp(-b * (t - s)) * (t - s) ** -c * excess / (1 - d)

    def right(u):
        r = u ** (1 / (1 - c))
        return math.exp(-b * r) * _cap(t - r, b) ** -d / (1 - c)

    kinks_left = [(1 / b) ** (1 - d)] if b > 0 and 1 / b < half else None
    kinks_right = [(t - 1 / b) ** (1 - c)] if b > 0 and half < 1 / b < t else None
    return (_quad(left, 0.0, half ** (1 - d), kinks_left)
            + _quad(right, 0.0, half ** (1 - c), kinks_right))


@log
def check_beta_integral(b, c, d, t):
    """
    Checks int_0^t exp(-b (t-s)) / ((t-s)^c (s ^ 1/b)^d) ds <= C(c, d) (t ^ 1/b)^(1-c-d)
    with C(c, d) = max(B(1-c, 1-d), Gamma(1-c)), b = 0 meaning no cap.

    :rtype: InequalityCase

    :raises ArgumentError: c or d outside [0, 1), b < 0 or t <= 0
    """
    if not (0 <= c < 1 and 0 <= d < 1):
        raise ArgumentError(f"(c, d)=({c}, {d}) must lie in [0, 1)")
    if b < 0:
        raise ArgumentError(f"b={b} must be >= 0")
    if not t > 0:
        raise ArgumentError(f"t={t} must be > 0")
    constant = beta_integral_constant(c, d)
    lhs = beta_integral(b, c, d, t)
    rhs = constant * _cap(t, b) ** (1 - c - d)
    return InequalityCase("beta_integral", lhs, rhs, constant, {"b": b, "c": c, "d": d, "t": t})


@log
def check_mf_grashof(force, sigma, q, tau, lambda_f):
    """
    Checks C_low Mf <= (nu kappa0^2 tau)^(1/q) G <= C_n Mf for a time-independent forcing
    supported in |k| <= kbar / kappa0, Mf being computed over [0, tau] along
    lam(s) = min(sqrt(nu s), lambda_f).

    :type force: gevrey_nse.spectral.SpectralField
    :param tau: time horizon
    :param lambda_f: largest radius reached by the schedule

    :return: (lower, upper) cases
    :rtype: tuple

    :raises ArgumentError: zero force, tau <= 0 or lambda_f < 0
    """
    kappa_bar_ratio = support_radius(force)
    if kappa_bar_ratio == 0:
        raise ArgumentError("the Mf and Grashof bracket needs a nonzero force")
    if not tau > 0 or lambda_f < 0:
        raise ArgumentError(f"(tau, lambda_f)=({tau}, {lambda_f}) must satisfy tau > 0, lambda_f >= 0")
    params = force.params
    forcing = ForcingSchedule.constant(force)
    schedule = SqrtSchedule(params.nu, cap=lambda_f)
    numbers = compute_data_numbers(SpectralField.zeros(params, force.K), forcing, sigma, q, tau, schedule)
    lower, upper = mf_grashof_constants(params.n, kappa_bar_ratio, lambda_f, sigma, params.kappa0)
    exponent = 0.0 if q == math.inf else 1 / float(q)
    middle = (params.nu * params.kappa0 ** 2 * tau) ** exponent * numbers.G
    parameters = {"sigma": sigma, "q": q, "tau": tau, "lambda_f": lambda_f, "kappa_bar_ratio": kappa_bar_ratio,
                  "Mf": numbers.Mf, "G": numbers.G}
    return (InequalityCase("mf_grashof_lower", lower * numbers.Mf, middle, lower, parameters),
            InequalityCase("mf_grashof_upper", middle, upper * numbers.Mf, upper, parameters))


def _spectral_sums(field_):
    """Full lattice sums (sum |u|, sum |u|^2, sum |k|^2 |u|^2, sum |k|^4 |u|^2)"""
    moduli = field_.moduli()
    squares = field_.lattice.norms_squared
    return (2.0 * float(np.sum(moduli)), 2.0 * float(np.sum(moduli ** 2)),
            2.0 * float(np.sum(squares * moduli ** 2)), 2.0 * float(np.sum(squares ** 2 * moduli ** 2)))


def _average(source, functional, horizon):
    if isinstance(source, (list, tuple)):
        return float(np.mean([functional(item) for item in source]))
    return time_average(source, functional, horizon)


@log
def check_brezis_gallouet(source, horizon=None, constant=1.0):
    """
    Checks the time averaged 2D bound
    (nu kappa0)^2 <|u|_W^2> <= C <|A^1/2 u|^2> [1 + ln(kappa0^-2 <|A u|^2> / <|A^1/2 u|^2>)].

    :param source: trajectory averaged over [0, horizon], or a list of snapshots averaged
                   with equal weights
    :param horizon: averaging horizon, ignored for snapshot lists
    :param constant: absolute constant C

    :rtype: InequalityCase

    :raises DomainError: 3D input
    """
    first = source[0] if isinstance(source, (list, tuple)) else source.field(0)
    if first.n != 2:
        raise DomainError(f"the Brezis-Gallouet bound is two dimensional, got n={first.n}")
    params = first.params
    box = (2 * math.pi) ** params.n
    wiener_squared = _average(source, lambda u: _spectral_sums(u)[0] ** 2, horizon)
    grad_squared = _average(source, lambda u: _spectral_sums(u)[2], horizon)
    laplacian_squared = _average(source, lambda u: _spectral_sums(u)[3], horizon)
    if grad_squared == 0:
        return InequalityCase("brezis_gallouet", 0.0, 0.0, constant, {"lambda": math.nan})
    # physical norms : |A^1/2 u|^2 = (2 pi)^n sum |k|^2 |u|^2 with kappa0 factors cancelling
    optimum = math.sqrt(laplacian_squared / grad_squared)
    rhs = constant * box * grad_squared * (1 + math.log(laplacian_squared / grad_squared))
    return InequalityCase("brezis_gallouet", wiener_squared, rhs, constant,
                          {"lambda": optimum, "horizon": horizon})


def agmon_constant(sigma):
    """
    max(1 / sqrt(-(2 sigma + 1)), 1 / sqrt(2 sigma + 3))

    :raises DomainError: sigma outside (-3/2, -1/2)
    """
    if not -1.5 < sigma < -0.5:
        raise DomainError(f"sigma={sigma} must lie in (-3/2, -1/2)")
    return max(1 / math.sqrt(-(2 * sigma + 1)), 1 / math.sqrt(2 * sigma + 3))


@log
def check_agmon(field_, sigma, slack=1.0):
    """
    Checks the 3D bound sum (kappa0 |k|)^sigma |u(k)|
    <= slack C(sigma) kappa0^sigma a^-(sigma+1/2) b^(sigma+3/2)
    with a^2 = sum |u(k)|^2 and b^2 = sum |k|^2 |u(k)|^2.

    :param slack: lattice sum versus integral factor

    :rtype: InequalityCase

    :raises DomainError: non 3D field or sigma outside (-3/2, -1/2)
    """
    if field_.n != 3:
        raise DomainError(f"the Agmon bound is three dimensional, got n={field_.n}")
    constant = agmon_constant(sigma) * slack
    kappa0 = field_.params.kappa0
    moduli = field_.moduli()
    lhs = 2.0 * float(np.sum((kappa0 * field_.lattice.norms) ** sigma * moduli))
    _, low, grad, _ = _spectral_sums(field_)
    if low == 0:
        return InequalityCase("agmon", 0.0, 0.0, constant, {"sigma": sigma, "slack": slack, "measured_slack": 0.0})
    rhs = constant * kappa0 ** sigma * low ** (-(sigma + 0.5) / 2) * grad ** ((sigma + 1.5) / 2)
    # smallest slack the field needs
    measured = lhs * slack / rhs
    return InequalityCase("agmon", lhs, rhs, constant,
                          {"sigma": sigma, "C_sigma": agmon_constant(sigma), "slack": slack, "measured_slack": measured})


def _lemma_data(u0, forcing, sigma, q, T, points):
    grid = time_grid(T, points)
    phi = evaluate_phi(u0, forcing, grid)
    numbers = compute_data_numbers(u0, forcing, float(sigma), float(q), T)
    return phi, numbers


def _decay_sequence(u0, forcing, sigma, beta):
    """(nu t)^(beta/2) |Phi(t)|_{sqrt(nu t), sigma+beta} for t = 10^-j tau, j = 2..6"""
    params = u0.params
    tau = 1 / (params.nu * params.kappa0 ** 2)
    times = tau * np.array([1e-6, 1e-5, 1e-4, 1e-3, 1e-2])
    phi = evaluate_phi(u0, forcing, np.concatenate([[0.0], times]))
    return [(params.nu * t) ** (beta / 2) * gevrey(phi.field(index + 1), math.sqrt(params.nu * t), sigma + beta)
            for index, t in enumerate(times)][::-1]


@log
def check_linear_lemma(u0, forcing, sigma, q, T, constants, points=LEMMA_GRID_POINTS):
    """
    Checks the X and Y bounds of the linear part Phi on [0, T] :

    - (i) X(Phi) <= c_X (1/q')^(1/q') M
    - (ii) Y(Phi) <= c_Y C(q', beta) M
    - (iii) for beta > 0, (nu t)^(beta/2) |Phi(t)|_{sqrt(nu t), sigma+beta} decreases along
      t = 10^-2 tau, ..., 10^-6 tau

    with c_X, c_Y the calibrated linear prefactors. The small data flag
    M0 <= c (T nu kappa0^2)^(1/q') Mf is reported with (i).

    :return: cases (i), (ii) and, for beta > 0, (iii)
    :rtype: list

    :raises ArgumentError: as evaluate_phi
    """
    q_prime = conjugate_exponent(q)
    beta = float(smoothing_gap(sigma, q))
    phi, numbers = _lemma_data(u0, forcing, sigma, q, T, points)
    norms = trajectory_norms(phi, float(sigma), beta)
    params = u0.params

    constant_x = constants.linear_x_prefactor * linear_constant_x(q_prime)
    constant_y = constants.linear_y_prefactor * linear_constant_y(q_prime, beta)
    corollary = numbers.M0 <= (constants.corollary_prefactor
                               * (T * params.nu * params.kappa0 ** 2) ** (1 / float(q_prime)) * numbers.Mf)
    parameters = {"sigma": sigma, "q": q, "T": T, "beta": beta, "M": numbers.M}
    cases = [
        InequalityCase("linear_x", norms.X_norm, constant_x * numbers.M, constant_x,
                       {**parameters, "small_data": bool(corollary)}),
        InequalityCase("linear_y", norms.Y_norm, constant_y * numbers.M, constant_y, parameters),
    ]
    if beta > 0:
        values = _decay_sequence(u0, forcing, float(sigma), beta)
        steps = [after / before for before, after in zip(values, values[1:]) if before > 0]
        worst = max(steps, default=0.0)
        decades = [before / after for before, after in zip(values, values[1:]) if after > 0]
        cases.append(InequalityCase("linear_limit", worst, 1.0, 1.0,
                                    {**parameters, "decade_ratios": decades,
                                     "expected_rate": 10 ** (beta / 2)}))
    return cases


@log
def check_nonlinear_lemma(u_trajectory, v_trajectory, sigma, beta, constants):
    """
    Checks Z(w[u, v]) <= c_w C(beta) (nu kappa0^2 (T ^ tau))^((1-beta)/2) Y(u) Y(v) on the
    shared grid, c_w being the calibrated nonlinear prefactor.

    :rtype: InequalityCase
    """
    params = u_trajectory.params
    rate = params.nu * params.kappa0 ** 2
    horizon = float(u_trajectory.times[-1])
    w = duhamel_trajectory(u_trajectory, v_trajectory)
    lhs = trajectory_norms(w, sigma, beta).Z_norm
    y_u = trajectory_norms(u_trajectory, sigma, beta).Y_norm
    y_v = trajectory_norms(v_trajectory, sigma, beta).Y_norm
    constant = constants.nonlinear_prefactor * nonlinear_lemma_constant(beta)
    rhs = constant * (rate * min(horizon, 1 / rate)) ** ((1 - beta) / 2) * y_u * y_v
    return InequalityCase("nonlinear", lhs, rhs, constant, {"sigma": sigma, "beta": beta, "T": horizon})


def _random_params(rng, n):
    return PhysicalParams(n, float(rng.uniform(0.5, 2.0)) * 2 * math.pi, float(rng.uniform(0.1, 2.0)))


def _truncation(n):
    return 6 if n == 2 else 3


def _random_data(rng, params, K):
    seed = int(rng.integers(2 ** 32))
    return random_field(params, K, (1.0, float(K)), seed, amplitude_profile=PROFILE_GAUSSIAN_DECAY,
                        decay=float(rng.uniform(0.1, 0.5)) / params.kappa0,
                        amplitude=float(rng.uniform(1e-3, 1.0)) * params.nu * params.kappa0)


def _random_forcing(rng, params, K):
    high = float(rng.uniform(1.0, K))
    force = random_field(params, K, (1.0, high), int(rng.integers(2 ** 32)),
                         amplitude=float(rng.uniform(1e-3, 1.0)) * params.nu ** 2 * params.kappa0 ** 3)
    return ForcingSchedule.constant(force)


def _lemma_cases(rng, constants):
    n = int(rng.choice([2, 3]))
    params = _random_params(rng, n)
    K = _truncation(n)
    sigma, q = LEMMA_SETTINGS[int(rng.integers(len(LEMMA_SETTINGS)))]
    u0 = _random_data(rng, params, K)
    forcing = _random_forcing(rng, params, K) if rng.random() < 0.5 else None
    tau = 1 / (params.nu * params.kappa0 ** 2)
    T = float(rng.uniform(0.01, 2.0)) * tau
    cases = check_linear_lemma(u0, forcing, sigma, q, T, constants)

    beta = float(smoothing_gap(sigma, q))
    grid = time_grid(T, LEMMA_GRID_POINTS)
    u_trajectory = evaluate_phi(u0, forcing, grid)
    v_trajectory = evaluate_phi(_random_data(rng, params, K), None, grid)
    cases.append(check_nonlinear_lemma(u_trajectory, v_trajectory, sigma, beta, constants))
    return cases


@log
def run_lemma_suite(constants, cases=200, seed=0, progress=False):
    """
    Sweeps the linear and nonlinear estimates over pinned random data.

    :type constants: gevrey_nse.calibration.CalibrationConstants

    :rtype: list
    """
    rng = np.random.default_rng(seed)
    reports = []
    for _ in tqdm(range(cases), desc="lemmas", disable=not progress):
        reports.extend(_lemma_cases(rng, constants))
    failures = [case for case in reports if not case.passed]
    _LOGGER.info("Lemma suite : %d checks, %d failures", len(reports), len(failures))
    return reports


def beta_grid():
    """
    Pinned (b, c, d, t) grid, 500 points including the c = 1/2, d = 0 equality case.

    :rtype: list
    """
    return list(itertools.product(BETA_B_VALUES, BETA_EXPONENTS, BETA_EXPONENTS, BETA_T_VALUES))


def _ensemble(rng, size):
    params = _random_params(rng, 2)
    K = 8
    top = float(rng.uniform(2.0, K))
    return [random_field(params, K, (1.0, top), int(rng.integers(2 ** 32)),
                         amplitude=float(rng.uniform(0.1, 10.0))) for _ in range(size)]


@log
def run_appendix_suite(constants, seed=0, forces=50, ensembles=20, fields=200, ensemble_size=10, progress=False):
    """
    Runs the beta integral grid, the Mf and Grashof bracket on random band-limited forces,
    the Brezis-Gallouet bound on random 2D ensembles and the Agmon bound on random 3D fields.

    :type constants: gevrey_nse.calibration.CalibrationConstants

    :rtype: list
    """
    rng = np.random.default_rng(seed)
    reports = [check_beta_integral(*point) for point in tqdm(beta_grid(), desc="beta", disable=not progress)]

    for index in tqdm(range(forces), desc="mf-grashof", disable=not progress):
        n = 2 if index % 2 == 0 else 3
        params = _random_params(rng, n)
        K = 6 if n == 2 else 4
        kappa_bar = float(rng.uniform(1.0, 4.0))
        force = random_field(params, K, (1.0, kappa_bar), int(rng.integers(2 ** 32)),
                             amplitude=float(rng.uniform(0.01, 10.0)))
        sigma, q = (0.0, 2.0) if rng.random() < 0.5 else (-0.75, 59 / 49)
        tau = 1 / (params.nu * params.kappa0 ** 2)
        reports.extend(check_mf_grashof(force, sigma, q, tau, 1 / params.kappa0))

    for _ in tqdm(range(ensembles), desc="brezis-gallouet", disable=not progress):
        reports.append(check_brezis_gallouet(_ensemble(rng, ensemble_size), constant=constants.brezis_gallouet))

    for index in tqdm(range(fields), desc="agmon", disable=not progress):
        params = _random_params(rng, 3)
        top = float(rng.uniform(1.0, 6.0))
        u = random_field(params, 6, (1.0, top), int(rng.integers(2 ** 32)),
                         amplitude=float(rng.uniform(0.1, 10.0)))
        reports.append(check_agmon(u, AGMON_SIGMAS[index % len(AGMON_SIGMAS)], constants.agmon_slack))

    failures = [case for case in reports if not case.passed]
    _LOGGER.info("Appendix suite : %d checks, %d failures", len(reports), len(failures))
    return reports


@log
def calibrate_constants(constants, cases=200, seed=0, progress=False):
    """
    Runs the estimate sweeps with unit prefactors and freezes every observed constant at
    1.1 x its largest ratio, producing the next constants version.

    :type constants: gevrey_nse.calibration.CalibrationConstants

    :rtype: gevrey_nse.calibration.CalibrationConstants
    """
    unit = replace(constants, linear_x_prefactor=1.0, linear_y_prefactor=1.0, nonlinear_prefactor=1.0,
                   brezis_gallouet=1.0, agmon_slack=1.0)
    lemma_cases = run_lemma_suite(unit, cases=cases, seed=seed, progress=progress)
    appendix_cases = run_appendix_suite(unit, seed=seed, forces=0, ensembles=20, fields=200, progress=progress)
    observed = {}
    for name, key in (("linear_x", "linear_x_prefactor"), ("linear_y", "linear_y_prefactor"),
                      ("nonlinear", "nonlinear_prefactor")):
        ratio = max((case.ratio for case in lemma_cases if case.name == name), default=None)
        if ratio:
            observed[key] = ratio
    for name, key in (("brezis_gallouet", "brezis_gallouet"), ("agmon", "agmon_slack")):
        ratio = max((case.ratio for case in appendix_cases if case.name == name), default=None)
        if ratio:
            observed[key] = ratio
    _LOGGER.info("Observed constants : %s", observed)
    return constants.frozen_from(observed)
