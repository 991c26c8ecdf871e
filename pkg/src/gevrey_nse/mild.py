"""
Mild solutions : Duhamel terms, Picard iteration, exponential time differencing and the
quantities of the existence and radius theorems
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
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import optimize, special
from tqdm import tqdm

from gevrey_nse.code_utilities import log
from gevrey_nse.errors import (ArgumentError, ConfigurationError, DomainError, NonConvergenceError, NumericalAbort,
                               SaturationError)
from gevrey_nse.norms import (compute_data_numbers, conjugate_exponent, gevrey, mf_grashof_constants,
                              wiener_norm)
from gevrey_nse.spectral import SpectralField, bilinear_fft, leray_project, support_radius

_LOGGER = logging.getLogger(__name__)

# theorem identifiers
THEOREM_SMALL_DATA = "3.1"
THEOREM_GRASHOF_2D = "3.2"
THEOREM_GRASHOF_3D = "3.3"
THEOREM_FORCE_DOMINATED = "7.1"
THEOREMS = (THEOREM_SMALL_DATA, THEOREM_GRASHOF_2D, THEOREM_GRASHOF_3D, THEOREM_FORCE_DOMINATED)

# (dimension, sigma, q) pinned by the Grashof number theorems
_GRASHOF_SETTINGS = {
    THEOREM_GRASHOF_2D: (2, Fraction(0), Fraction(2)),
    THEOREM_GRASHOF_3D: (3, Fraction(-3, 4), Fraction(59, 49)),
}

# contraction budget of the fixed point argument
CONTRACTION_BUDGET = Fraction(1, 3)

# consecutive expanding Picard steps tolerated before giving up
DIVERGENCE_PATIENCE = 3

_CONTOUR_POINTS = 32
_CONTOUR = np.exp(1j * np.pi * (np.arange(1, _CONTOUR_POINTS + 1) - 0.5) / _CONTOUR_POINTS)


def phi_functions(z):
    """
    Exponential integrator weights phi1(z) = (e^z - 1) / z and phi2(z) = (e^z - 1 - z) / z^2,
    evaluated as means over a unit circle around z to avoid cancellation near 0.

    :param z: real arguments, usually -L h
    :type z: numpy.ndarray

    :return: (phi1, phi2) arrays shaped like z
    :rtype: tuple
    """
    points = np.asarray(z, dtype=np.float64)[..., None] + _CONTOUR
    exponentials = np.exp(points)
    phi1 = np.mean((exponentials - 1) / points, axis=-1).real
    phi2 = np.mean((exponentials - 1 - points) / points ** 2, axis=-1).real
    return phi1, phi2


def _rates(params, lattice):
    return params.nu * params.kappa0 ** 2 * lattice.norms_squared


def _power(base, exponent):
    if exponent == 0:
        return 1.0
    return float(base) ** float(exponent)


class TrajectorySample:
    """
    Fields sampled on a strictly increasing time grid.

    :param times: time grid
    :param coeffs: stacked coefficients shaped (len(times), count, n)
    """

    def __init__(self, params, K, times, coeffs):
        times = np.asarray(times, dtype=np.float64)
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if times.ndim != 1 or len(times) == 0:
            raise ArgumentError("a trajectory needs a non empty time grid")
        if np.any(np.diff(times) <= 0):
            raise ArgumentError("trajectory times must be strictly increasing")
        if coeffs.shape[0] != len(times):
            raise ArgumentError(f"{coeffs.shape[0]} samples do not match {len(times)} times")
        self.params = params
        self.K = K
        self.times = times
        self.coeffs = coeffs
        SpectralField(params, K, coeffs[0])

    @classmethod
    def from_fields(cls, times, fields):
        """
        :rtype: TrajectorySample
        """
        first = fields[0]
        for other in fields[1:]:
            first.check_compatible(other)
        return cls(first.params, first.K, times, np.stack([item.coeffs for item in fields]))

    def __len__(self):
        return len(self.times)

    def field(self, index):
        """
        :rtype: gevrey_nse.spectral.SpectralField
        """
        return SpectralField(self.params, self.K, self.coeffs[index])

    @property
    def fields(self):
        """All sampled fields"""
        return [self.field(index) for index in range(len(self.times))]

    @property
    def final(self):
        """Last sampled field"""
        return self.field(-1)

    def radius_schedule(self):
        """
        lam(t_i) = sqrt(nu t_i) on the grid.
        """
        return np.sqrt(self.params.nu * self.times)

    def index_of(self, t):
        """
        Grid index of time t.

        :raises ArgumentError: t is not on the grid
        """
        matches = np.flatnonzero(np.isclose(self.times, t, rtol=1e-12, atol=0.0))
        if not matches.size:
            raise ArgumentError(f"t={t} is not on the trajectory grid")
        return int(matches[0])

    def check_compatible(self, other):
        """
        :raises ArgumentError: the grids differ
        """
        SpectralField(self.params, self.K, self.coeffs[0]).check_compatible(other.field(0))
        if len(other.times) != len(self.times) or not np.array_equal(other.times, self.times):
            raise ArgumentError("trajectories do not share their time grid")

    def with_coeffs(self, coeffs):
        """:rtype: TrajectorySample"""
        return TrajectorySample(self.params, self.K, self.times, coeffs)

    def __sub__(self, other):
        self.check_compatible(other)
        return self.with_coeffs(self.coeffs - other.coeffs)

    def __add__(self, other):
        self.check_compatible(other)
        return self.with_coeffs(self.coeffs + other.coeffs)

    def summary(self):
        """Short description used in logs"""
        return f"TrajectorySample(n={self.params.n}, K={self.K}, samples={len(self.times)}, T={self.times[-1]:.3e})"


@dataclass(frozen=True)
class FunctionSpaceNorms:
    """
    Dimensionless trajectory norms X, Y and Z = max(X, Y)
    """
    X_norm: float
    Y_norm: float
    Z_norm: float
    beta: float
    sigma: float
    T: float


@log
def trajectory_norms(trajectory, sigma, beta):
    """
    Evaluates the X, Y and Z norms of a trajectory along lam(t) = sqrt(nu t) :

    - X = kappa0^-sigma / (nu kappa0) sup_t |u(t)|_{lam(t), sigma}
    - Y = kappa0^-sigma / (nu kappa0) sup_t (nu (t ^ tau))^(beta/2) |u(t)|_{lam(t), sigma+beta}

    with tau = 1 / (nu kappa0^2). Suprema are taken over the grid.

    :type trajectory: TrajectorySample

    :rtype: FunctionSpaceNorms
    """
    params = trajectory.params
    scale = params.kappa0 ** -sigma / (params.nu * params.kappa0)
    tau = 1 / (params.nu * params.kappa0 ** 2)
    radii = trajectory.radius_schedule()
    x_norm = 0.0
    y_norm = 0.0
    for index, t in enumerate(trajectory.times):
        sample = trajectory.field(index)
        x_norm = max(x_norm, scale * gevrey(sample, radii[index], sigma))
        weight = _power(params.nu * min(t, tau), beta / 2)
        if weight > 0:
            y_norm = max(y_norm, scale * weight * gevrey(sample, radii[index], sigma + beta))
    return FunctionSpaceNorms(X_norm=x_norm, Y_norm=y_norm, Z_norm=max(x_norm, y_norm),
                              beta=float(beta), sigma=float(sigma), T=float(trajectory.times[-1]))


def z_norm(trajectory, sigma, beta):
    """
    :rtype: float
    """
    return trajectory_norms(trajectory, sigma, beta).Z_norm


def time_grid(T, points, refinement=1e-4):
    """
    Grid on [0, T] geometrically refined towards 0.

    :param T: horizon
    :param points: number of grid points, 0 included
    :param refinement: first positive point as a fraction of T

    :rtype: numpy.ndarray
    """
    if not T > 0:
        raise ArgumentError(f"T={T} must be > 0")
    if points < 3:
        raise ArgumentError(f"points={points} must be >= 3")
    return np.concatenate([[0.0], T * np.geomspace(refinement, 1.0, points - 1)])


def _check_grid(t_grid):
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.ndim != 1 or len(t_grid) < 2 or t_grid[0] != 0 or np.any(np.diff(t_grid) <= 0):
        raise ArgumentError("time grids start at 0 and increase strictly")
    return t_grid


def _product_rule_step(previous, rates, step, left, right):
    """
    One step of int exp(-L (t-s)) N(s) ds with N linear on the step
    """
    phi1, phi2 = phi_functions(-rates * step)
    decay = np.exp(-rates * step)[:, None]
    return decay * previous + step * ((phi1 - phi2)[:, None] * left + phi2[:, None] * right)


@log
def evaluate_phi(u0, forcing, t_grid):
    """
    Evaluates Phi(t) = exp(-nu t A) u0 + int_0^t exp(-nu (t-s) A) P f(s) ds on a grid.

    The forcing integral is exact for time-independent forcing and follows the
    exponential product rule otherwise.

    :type u0: gevrey_nse.spectral.SpectralField
    :param forcing: body force, None for no forcing
    :type forcing: gevrey_nse.forcing.ForcingSchedule
    :param t_grid: time grid starting at 0

    :rtype: TrajectorySample

    :raises ArgumentError: the grid leaves [0, Tf]
    """
    t_grid = _check_grid(t_grid)
    rates = _rates(u0.params, u0.lattice)
    decays = np.exp(-np.outer(t_grid, rates))
    coeffs = decays[:, :, None] * u0.coeffs[None, :, :]
    if forcing is None:
        return TrajectorySample(u0.params, u0.K, t_grid, coeffs)

    forcing.check_compatible(u0)
    if t_grid[-1] > forcing.horizon:
        raise ArgumentError(f"t={t_grid[-1]} exceeds the forcing horizon {forcing.horizon}")
    if forcing.is_time_independent:
        weights = -np.expm1(-np.outer(t_grid, rates)) / rates
        coeffs = coeffs + weights[:, :, None] * forcing.at(0.0).coeffs[None, :, :]
        return TrajectorySample(u0.params, u0.K, t_grid, coeffs)

    integral = np.zeros_like(u0.coeffs)
    forced = [integral]
    for index in range(len(t_grid) - 1):
        integral = _product_rule_step(integral, rates, t_grid[index + 1] - t_grid[index],
                                      forcing.at(t_grid[index]).coeffs, forcing.at(t_grid[index + 1]).coeffs)
        forced.append(integral)
    return TrajectorySample(u0.params, u0.K, t_grid, coeffs + np.stack(forced))


@log
def duhamel_trajectory(u_trajectory, v_trajectory):
    """
    Evaluates w(t) = int_0^t exp(-nu (t-s) A) B[u(s), v(s)] ds on the shared grid.

    :rtype: TrajectorySample

    :raises ArgumentError: the trajectories do not share their grid
    """
    u_trajectory.check_compatible(v_trajectory)
    times = u_trajectory.times
    if times[0] != 0:
        raise ArgumentError("Duhamel integrals start at t=0")
    rates = _rates(u_trajectory.params, u_trajectory.field(0).lattice)
    nonlinear = [bilinear_fft(u_trajectory.field(index), v_trajectory.field(index)).coeffs
                 for index in range(len(times))]
    integral = np.zeros_like(nonlinear[0])
    values = [integral]
    for index in range(len(times) - 1):
        integral = _product_rule_step(integral, rates, times[index + 1] - times[index],
                                      nonlinear[index], nonlinear[index + 1])
        values.append(integral)
    return u_trajectory.with_coeffs(np.stack(values))


def evaluate_w(u_trajectory, v_trajectory, t=None):
    """
    Evaluates w(t) = int_0^t exp(-nu (t-s) A) B[u(s), v(s)] ds at one grid time.

    :param t: grid time, defaults to the last one

    :rtype: gevrey_nse.spectral.SpectralField

    :raises ArgumentError: grid mismatch or t off the grid
    """
    trajectory = duhamel_trajectory(u_trajectory, v_trajectory)
    index = -1 if t is None else trajectory.index_of(t)
    return trajectory.field(index)


@dataclass
class PicardReport:
    """
    Outcome of a Picard iteration
    """
    iterations: int
    converged: bool
    differences: list
    ratios: list
    phi_z_norm: float
    distance_to_phi: float
    e_radius: float
    in_e: bool
    residual: float

    @property
    def max_ratio(self):
        """Largest contraction ratio observed, 0 when fewer than two steps ran"""
        return max(self.ratios, default=0.0)

    def as_dict(self):
        """:rtype: dict"""
        return {
            "iterations": self.iterations,
            "converged": self.converged,
            "differences": list(self.differences),
            "ratios": list(self.ratios),
            "max_ratio": self.max_ratio,
            "phi_z_norm": self.phi_z_norm,
            "distance_to_phi": self.distance_to_phi,
            "e_radius": self.e_radius,
            "in_e": self.in_e,
            "residual": self.residual,
        }


@log
def picard_iterate(u0, forcing, theorem, t_grid, tol=1e-10, max_iters=50, progress=False):
    """
    Solves u = Phi - w[u, u] by Picard iteration u^(m+1) = Phi - w[u^m, u^m] from u^0 = Phi.

    Iteration stops once the Z norm of u^(m+1) - u^m falls under tol x Z(Phi). Contraction
    ratios are the quotients of successive differences.

    :type u0: gevrey_nse.spectral.SpectralField
    :type forcing: gevrey_nse.forcing.ForcingSchedule
    :param theorem: quantities of the run, giving sigma, beta and T*
    :type theorem: TheoremQuantities
    :param t_grid: grid inside [0, T*]
    :param tol: relative tolerance
    :param max_iters: iteration cap

    :return: (trajectory, report)
    :rtype: tuple

    :raises ArgumentError: the grid leaves [0, T*]
    :raises NonConvergenceError: DIVERGENCE_PATIENCE consecutive ratios exceed 1
    """
    t_grid = _check_grid(t_grid)
    if t_grid[-1] > theorem.T_star * (1 + 1e-12):
        raise ArgumentError(f"grid end {t_grid[-1]} exceeds T*={theorem.T_star}")
    sigma, beta = float(theorem.sigma), float(theorem.beta)

    phi = evaluate_phi(u0, forcing, t_grid)
    phi_norm = z_norm(phi, sigma, beta)
    differences = []
    ratios = []
    current = phi
    converged = phi_norm == 0
    expanding = 0
    iteration = 0
    with tqdm(total=max_iters, desc="picard", disable=not progress) as bar:
        while not converged and iteration < max_iters:
            iteration += 1
            try:
                following = phi - duhamel_trajectory(current, current)
                difference = z_norm(following - current, sigma, beta)
            except SaturationError as error:
                raise NonConvergenceError(f"Picard iterate {iteration} saturated : {error}", ratios) from error
            if differences and differences[-1] > 0:
                ratio = difference / differences[-1]
                ratios.append(ratio)
                expanding = expanding + 1 if ratio > 1 else 0
                if expanding >= DIVERGENCE_PATIENCE:
                    raise NonConvergenceError(
                        f"Picard iteration diverges : ratios {ratios[-DIVERGENCE_PATIENCE:]} > 1", ratios)
            differences.append(difference)
            current = following
            converged = difference <= tol * phi_norm
            bar.update(1)
    if phi_norm == 0:
        iteration = 1
        differences.append(0.0)

    if converged:
        _LOGGER.info("Picard converged in %d iterations, max ratio %.3e", iteration, max(ratios, default=0.0))
    else:
        _LOGGER.warning("Picard stopped after %d iterations without reaching tol=%.1e", iteration, tol)

    try:
        if phi_norm > 0:
            residual = z_norm(current - (phi - duhamel_trajectory(current, current)), sigma, beta) / phi_norm
        else:
            residual = 0.0
        distance = z_norm(current - phi, sigma, beta)
    except SaturationError as error:
        raise NonConvergenceError(f"Picard iterate {iteration} saturated : {error}", ratios) from error
    report = PicardReport(iterations=iteration, converged=converged, differences=differences, ratios=ratios,
                          phi_z_norm=phi_norm, distance_to_phi=distance, e_radius=theorem.e_radius,
                          in_e=bool(distance <= theorem.e_radius * (1 + tol)), residual=residual)
    return current, report


@dataclass(frozen=True)
class WeakResidualReport:
    """
    Finite difference check of du/dt = -nu A u - B[u, u] + P f along a trajectory
    """
    residual: float
    tolerance: float
    max_step: float
    passed: bool


@log
def weak_residual(trajectory, forcing=None):
    """
    Compares second order time differences of a trajectory with the right hand side of
    the equation.

    The residual is relative to the largest right hand side and the tolerance scales with
    the squared largest step times the squared fastest active rate.

    :type trajectory: TrajectorySample
    :type forcing: gevrey_nse.forcing.ForcingSchedule

    :rtype: WeakResidualReport
    """
    if len(trajectory) < 3:
        raise ArgumentError("weak residual needs at least 3 samples")
    params = trajectory.params
    lattice = trajectory.field(0).lattice
    rates = _rates(params, lattice)
    derivative = np.gradient(trajectory.coeffs, trajectory.times, axis=0, edge_order=2)
    residual = 0.0
    scale = 0.0
    for index, t in enumerate(trajectory.times):
        sample = trajectory.field(index)
        rhs = -rates[:, None] * sample.coeffs - bilinear_fft(sample, sample).coeffs
        if forcing is not None:
            rhs = rhs + forcing.at(t).coeffs
        residual = max(residual, float(np.max(np.abs(derivative[index] - rhs))))
        scale = max(scale, float(np.max(np.abs(rhs))))
    relative = residual / scale if scale > 0 else residual
    max_step = float(np.max(np.diff(trajectory.times)))
    populated = np.any(np.abs(trajectory.coeffs) > 0, axis=(0, 2))
    fastest = float(np.max(rates[populated], initial=0.0))
    tolerance = 10 * (max_step * fastest) ** 2 + 1e-9
    return WeakResidualReport(residual=relative, tolerance=tolerance, max_step=max_step,
                              passed=bool(relative <= tolerance))


def check_stability(params, K, dt, cap):
    """
    :raises ConfigurationError: dt nu kappa0^2 K^2 exceeds cap
    """
    if not dt > 0:
        raise ConfigurationError(f"dt={dt} must be > 0")
    number = dt * params.nu * params.kappa0 ** 2 * K ** 2
    if number > cap:
        raise ConfigurationError(f"dt={dt} violates stability cap : dt nu kappa0^2 K^2 = {number:.4g} > {cap}")


@lru_cache(maxsize=16)
def _etd_coefficients(params, K, dt):
    lattice = SpectralField.zeros(params, K).lattice
    rates = _rates(params, lattice)
    phi1, phi2 = phi_functions(-rates * dt)
    return np.exp(-rates * dt)[:, None], (dt * phi1)[:, None], (dt * phi2)[:, None]


def _nonlinear(state, forcing, t):
    value = -bilinear_fft(state, state).coeffs
    if forcing is not None:
        value = value + forcing.at(t).coeffs
    return value


def etd_step(state, dt, forcing=None, t=0.0):
    """
    Advances one step of second order exponential time differencing :

    a = exp(-L dt) u + dt phi1 N(u), u+ = a + dt phi2 (N(a) - N(u))

    with L = nu kappa0^2 |k|^2 and N(u) = -B[u, u] + P f. The result is Leray projected.

    :type state: gevrey_nse.spectral.SpectralField
    :param dt: time step
    :type forcing: gevrey_nse.forcing.ForcingSchedule
    :param t: time of state

    :rtype: gevrey_nse.spectral.SpectralField

    :raises NumericalAbort: the new state is not finite
    """
    if not dt > 0:
        raise ArgumentError(f"dt={dt} must be > 0")
    decay, weight1, weight2 = _etd_coefficients(state.params, state.K, dt)
    with np.errstate(over="ignore", invalid="ignore"):
        current = _nonlinear(state, forcing, t)
        stage = state.with_coeffs(decay * state.coeffs + weight1 * current)
        following = stage.coeffs + weight2 * (_nonlinear(stage, forcing, t + dt) - current)
    if not np.all(np.isfinite(following)):
        raise NumericalAbort(f"non finite state after step at t={t}", state, t)
    return leray_project(state.with_coeffs(following))


@log
def run_etd(u0, forcing, dt, steps, stride=1, callback=None, progress=False):
    """
    Integrates with :func:`etd_step`, keeping every stride-th state and the last one.

    :param steps: number of steps
    :param stride: snapshot stride
    :param callback: called as callback(t, state) on every kept state

    :rtype: TrajectorySample

    :raises NumericalAbort: a state becomes non finite
    """
    if steps < 1 or stride < 1:
        raise ArgumentError(f"steps={steps} and stride={stride} must be >= 1")
    state = u0
    times = [0.0]
    kept = [u0.coeffs]
    if callback is not None:
        callback(0.0, u0)
    for step in tqdm(range(1, steps + 1), desc="etd", disable=not progress):
        state = etd_step(state, dt, forcing, (step - 1) * dt)
        if step % stride == 0 or step == steps:
            times.append(step * dt)
            kept.append(state.coeffs)
            if callback is not None:
                callback(step * dt, state)
    return TrajectorySample(u0.params, u0.K, times, np.stack(kept))


def as_fraction(value):
    """
    Exact rational form of an exponent, math.inf kept as is.

    :rtype: fractions.Fraction or float
    """
    if value == math.inf:
        return math.inf
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        return Fraction(value).limit_denominator(1_000_000)
    return Fraction(value)


def smoothing_gap(sigma, q):
    """
    beta = 2 sigma_- / q' for q <= 2 and sigma_- for q >= 2, exact for rationals.

    :rtype: fractions.Fraction
    """
    sigma = as_fraction(sigma)
    q = as_fraction(q)
    q_prime = conjugate_exponent(q)
    sigma_minus = max(-sigma, Fraction(0))
    if q != math.inf and q <= 2:
        return 2 * sigma_minus / q_prime
    return sigma_minus


def force_radius_exponent(beta, q_prime):
    """
    1 / (1 - beta + 2/q'), exponent of Mf in the force dominated radius bound.
    """
    return 1 / (1 - beta + Fraction(2) / q_prime)


def small_data_radius_exponent(beta):
    """
    1 / (1 - beta), exponent of M in the small data radius bound.
    """
    return 1 / (1 - beta)


def beta_integral_constant(c, d):
    """
    max(B(1-c, 1-d), Gamma(1-c)).

    :rtype: float
    """
    c, d = float(c), float(d)
    if not (0 <= c < 1 and 0 <= d < 1):
        raise ArgumentError(f"(c, d)=({c}, {d}) must lie in [0, 1)")
    return max(special.beta(1 - c, 1 - d), special.gamma(1 - c))


def nonlinear_lemma_constant(beta):
    """
    max(C((1-beta)/2, beta), C(1/2, beta)) with C = :func:`beta_integral_constant`.
    """
    return max(beta_integral_constant((1 - beta) / 2, beta), beta_integral_constant(0.5, beta))


def linear_constant_x(q_prime):
    """
    (1/q')^(1/q')
    """
    q_prime = float(q_prime)
    return (1 / q_prime) ** (1 / q_prime)


def linear_constant_y(q_prime, beta):
    """
    beta^(beta/2) C(beta q'/2, 0)^(1/q') q'^(beta/2)
    """
    q_prime, beta = float(q_prime), float(beta)
    return (_power(beta, beta / 2) * beta_integral_constant(beta * q_prime / 2, 0) ** (1 / q_prime)
            * q_prime ** (beta / 2))


def energy_method_constant():
    """
    log(1 + gamma) / sqrt(gamma) where gamma solves log(1 + gamma) / (2 gamma) = 1 / (1 + gamma).

    :return: (constant, gamma)
    :rtype: tuple
    """
    gamma = optimize.brentq(lambda x: math.log1p(x) / (2 * x) - 1 / (1 + x), 1.0, 10.0, xtol=1e-14)
    return math.log1p(gamma) / math.sqrt(gamma), gamma


def energy_method_radius(u0):
    """
    Radius lower bound C kappa0^-1 / |u0|_W of unforced flows, the Wiener norm being
    dimensionless.

    :rtype: float
    """
    norm = wiener_norm(u0, dimensionless=True)
    if norm == 0:
        return math.inf
    constant, _ = energy_method_constant()
    return constant / (u0.params.kappa0 * norm)


@dataclass
class TheoremQuantities:
    """
    Everything an existence and radius theorem computes for a run
    """
    theorem_id: str
    sigma: Fraction
    q: object
    q_prime: Fraction
    beta: Fraction
    M0: float
    Mf: float
    M: float
    G: float
    C_star: float
    C_lower_star: float
    T_star: float
    radius_bound: float
    radius_prefactor: float
    radius_exponent: Fraction
    hypothesis: bool
    global_existence: bool
    corollary: bool
    e_radius: float
    constants_version: int
    grashof_radius_bound: float = None
    energy_radius: float = None
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        """:rtype: dict"""
        def exact(value):
            if value == math.inf:
                return "inf"
            return {"value": float(value), "exact": str(value)}
        return {
            "theorem": self.theorem_id,
            "sigma": exact(self.sigma),
            "q": exact(self.q),
            "q_prime": exact(self.q_prime),
            "beta": exact(self.beta),
            "M0": self.M0,
            "Mf": self.Mf,
            "M": self.M,
            "G": self.G,
            "C_star": self.C_star,
            "C_lower_star": self.C_lower_star,
            "T_star": self.T_star,
            "radius_bound": self.radius_bound,
            "radius_prefactor": self.radius_prefactor,
            "radius_exponent": exact(self.radius_exponent),
            "hypothesis": self.hypothesis,
            "global_existence": self.global_existence,
            "corollary": self.corollary,
            "e_radius": self.e_radius,
            "constants_version": self.constants_version,
            "grashof_radius_bound": self.grashof_radius_bound,
            "energy_radius": self.energy_radius,
        }


@log
def theorem_quantities(u0, forcing, sigma, q, which_theorem, Tf, constants):
    """
    Computes beta, q', the data numbers, C*, C_*, T* and the radius lower bound of a
    theorem, the unspecified absolute constant being 4 x nonlinear_prefactor x linear_y_prefactor.

    T* is clipped to Tf and the radius bound is sqrt(nu T*).

    :type u0: gevrey_nse.spectral.SpectralField
    :type forcing: gevrey_nse.forcing.ForcingSchedule
    :param sigma: Sobolev exponent, > -1
    :param q: time integrability exponent, > 1, math.inf allowed
    :param which_theorem: one of THEOREMS
    :param Tf: forcing horizon
    :type constants: gevrey_nse.calibration.CalibrationConstants

    :rtype: TheoremQuantities

    :raises DomainError: sigma <= -1
    :raises ArgumentError: q <= 1, unknown theorem or settings foreign to the theorem
    """
    sigma = as_fraction(sigma)
    q = as_fraction(q)
    if sigma <= -1:
        raise DomainError(f"sigma={sigma} must be > -1")
    q_prime = as_fraction(conjugate_exponent(q))
    if which_theorem not in THEOREMS:
        raise ArgumentError(f"unknown theorem {which_theorem!r}, expected one of {THEOREMS}")
    if which_theorem in _GRASHOF_SETTINGS:
        expected = _GRASHOF_SETTINGS[which_theorem]
        if (u0.n, sigma, q) != expected:
            raise ArgumentError(f"theorem {which_theorem} runs with (n, sigma, q)={expected}, "
                                f"got ({u0.n}, {sigma}, {q})")
        if forcing is None or not forcing.is_time_independent:
            raise ArgumentError(f"theorem {which_theorem} needs a time-independent forcing")

    params = u0.params
    rate = params.nu * params.kappa0 ** 2
    beta = smoothing_gap(sigma, q)
    numbers = compute_data_numbers(u0, forcing, float(sigma), float(q), Tf)

    absolute = 4 * constants.nonlinear_prefactor * constants.linear_y_prefactor
    c_y = linear_constant_y(q_prime, beta)
    c_star = 1 / (3 * absolute * nonlinear_lemma_constant(float(beta)) * c_y)
    force_exponent = force_radius_exponent(beta, q_prime)
    c_lower_star = c_star ** float(2 / q_prime * force_exponent)

    if which_theorem == THEOREM_SMALL_DATA:
        exponent = small_data_radius_exponent(beta)
        global_existence = numbers.M <= c_star
        if global_existence or numbers.M == 0:
            t_star = Tf
        else:
            t_star = c_star ** float(2 * exponent) / rate * numbers.M ** -float(2 * exponent)
        size = numbers.M
        hypothesis = True
        e_radius = constants.linear_y_prefactor * c_y * numbers.M
    else:
        if numbers.Mf == 0:
            raise ArgumentError(f"theorem {which_theorem} needs a nonzero forcing")
        exponent = force_exponent
        t_star = c_lower_star ** float(q_prime) / rate * numbers.Mf ** -float(2 * exponent)
        global_existence = False
        size = numbers.Mf
        threshold = c_lower_star * numbers.Mf ** float((1 - beta) * force_exponent)
        hypothesis = numbers.M0 <= threshold
        e_radius = constants.linear_y_prefactor * c_y * numbers.M
    t_star = min(t_star, Tf)
    radius_bound = math.sqrt(params.nu * t_star)
    prefactor = radius_bound * params.kappa0 * size ** float(exponent) if size > 0 else math.inf
    corollary = numbers.M0 <= constants.corollary_prefactor * (t_star * rate) ** float(1 / q_prime) * numbers.Mf

    grashof_bound = None
    if which_theorem in _GRASHOF_SETTINGS:
        tau = 1 / rate
        kappa_bar_ratio = support_radius(forcing.at(0.0))
        lower, _ = mf_grashof_constants(params.n, kappa_bar_ratio, 1 / params.kappa0, float(sigma), params.kappa0)
        grashof_mf = (rate * tau) ** float(1 / q) * numbers.G / lower
        grashof_t_star = min(Tf, c_lower_star ** float(q_prime) / rate * grashof_mf ** -float(2 * exponent))
        grashof_bound = math.sqrt(params.nu * grashof_t_star)

    energy_radius = energy_method_radius(u0) if forcing is None else None
    quantities = TheoremQuantities(
        theorem_id=which_theorem, sigma=sigma, q=q, q_prime=q_prime, beta=beta,
        M0=numbers.M0, Mf=numbers.Mf, M=numbers.M, G=numbers.G,
        C_star=c_star, C_lower_star=c_lower_star, T_star=t_star,
        radius_bound=radius_bound, radius_prefactor=prefactor, radius_exponent=exponent,
        hypothesis=bool(hypothesis), global_existence=bool(global_existence), corollary=bool(corollary),
        e_radius=e_radius, constants_version=constants.version,
        grashof_radius_bound=grashof_bound, energy_radius=energy_radius)
    _LOGGER.info("Theorem %s : beta=%s, T*=%.4e, radius bound=%.4e, hypothesis=%s",
                 which_theorem, beta, t_star, radius_bound, hypothesis)
    return quantities
