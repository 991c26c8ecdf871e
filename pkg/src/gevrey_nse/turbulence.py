"""
Long run diagnostics : dissipation rates and scales, dyadic band spectra, power law fits,
finite horizon time averages and Chebyshev set membership fractions
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
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate

from gevrey_nse.code_utilities import log
from gevrey_nse.errors import ArgumentError, DomainError, EstimationError
from gevrey_nse.norms import (energy, enstrophy, gevrey, grad_l2_norm, l2_norm, laplacian_l2_norm,
                              wiener_norm)
from gevrey_nse.radius import estimate_radius_fit

_LOGGER = logging.getLogger(__name__)

REGIME_2D = "2D"
REGIME_3D = "3D"

MIN_ENSEMBLE_SIZE = 10


def _physical_inner(u, v):
    params = u.params
    return (2 * math.pi / params.kappa0) ** params.n * u.inner(v)


def _check_horizon(trajectory, horizon):
    if horizon < 0:
        raise ArgumentError(f"averaging horizon {horizon} must be >= 0")
    if horizon > trajectory.times[-1] * (1 + 1e-12):
        raise ArgumentError(f"averaging horizon {horizon} exceeds trajectory end {trajectory.times[-1]}")
    if trajectory.times[0] > 0:
        raise ArgumentError("trajectories to average start at t=0")


def average_values(times, values, horizon):
    """
    Trapezoidal mean of sampled values over [0, horizon], linearly interpolated at the
    horizon. A zero horizon returns the first value.

    :rtype: float
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if horizon == 0:
        return float(values[0])
    inside = times < horizon
    grid = np.concatenate([times[inside], [horizon]])
    sampled = np.concatenate([values[inside], [np.interp(horizon, times, values)]])
    return float(integrate.trapezoid(sampled, grid) / horizon)


@log
def time_average(trajectory, functional, horizon):
    """
    Finite horizon mean (1/T) int_0^T functional(u(t)) dt with the trapezoidal rule.

    :type trajectory: gevrey_nse.mild.TrajectorySample
    :param functional: callable mapping a SpectralField to a float
    :param horizon: averaging horizon T

    :rtype: float

    :raises ArgumentError: the horizon exceeds the trajectory
    """
    _check_horizon(trajectory, horizon)
    covered = np.flatnonzero(trajectory.times <= horizon)
    last = min(int(covered[-1]) + 1, len(trajectory) - 1)
    values = [functional(trajectory.field(index)) for index in range(last + 1)]
    return average_values(trajectory.times[:last + 1], values, horizon)


@dataclass(frozen=True)
class DissipationReport:
    """
    Mean dissipation rates and the derived length scales and wavenumbers
    """
    eps: float
    eps_sup: float
    eta: float
    lambda_eps: float
    lambda_eta: float
    kappa_eta: float
    kappa_sigma: float
    mean_l2_squared: float
    mean_grad_squared: float
    mean_laplacian_squared: float
    horizon: float
    n: int
    nu: float
    kappa0: float

    def as_dict(self):
        """:rtype: dict"""
        return asdict(self)


def _scale(numerator, denominator, exponent):
    if denominator == 0:
        return math.inf
    return (numerator / denominator) ** exponent


@log
def dissipation_report(trajectory, horizon):
    """
    eps = nu kappa0^n <|grad u|^2>, eta = nu kappa0^n <|A u|^2>, eps_sup the largest sampled
    instantaneous rate, lambda_eps = (nu^3/eps)^(1/4), lambda_eta = (nu^3/eta)^(1/6),
    kappa_eta = (eta/nu^2)^(1/6) and kappa_sigma^2 = <|A u|^2> / <|A^1/2 u|^2>.

    :type trajectory: gevrey_nse.mild.TrajectorySample
    :param horizon: averaging horizon

    :rtype: DissipationReport
    """
    params = trajectory.params
    rate = params.nu * params.kappa0 ** params.n
    mean_l2 = time_average(trajectory, lambda u: l2_norm(u) ** 2, horizon)
    mean_grad = time_average(trajectory, lambda u: grad_l2_norm(u) ** 2, horizon)
    mean_laplacian = time_average(trajectory, lambda u: laplacian_l2_norm(u) ** 2, horizon)
    covered = trajectory.times <= horizon
    eps_sup = rate * max(grad_l2_norm(trajectory.field(index)) ** 2 for index in np.flatnonzero(covered))
    eps = rate * mean_grad
    eta = rate * mean_laplacian
    return DissipationReport(
        eps=eps, eps_sup=max(eps_sup, eps), eta=eta,
        lambda_eps=_scale(params.nu ** 3, eps, 0.25),
        lambda_eta=_scale(params.nu ** 3, eta, 1 / 6),
        kappa_eta=(eta / params.nu ** 2) ** (1 / 6),
        kappa_sigma=_scale(mean_laplacian, mean_grad, 0.5),
        mean_l2_squared=mean_l2, mean_grad_squared=mean_grad, mean_laplacian_squared=mean_laplacian,
        horizon=horizon, n=params.n, nu=params.nu, kappa0=params.kappa0)


@dataclass(frozen=True)
class DoeringTitiBound:
    """
    Radius scale built on the largest instantaneous dissipation rate
    """
    radius: float
    lambda_eps_sup: float


def doering_titi_radius(report):
    """
    (nu kappa0)^3 / eps_sup, equal to kappa0^-1 (kappa0 lambda)^4 with lambda = (nu^3 / eps_sup)^(1/4).

    :type report: DissipationReport

    :rtype: DoeringTitiBound
    """
    lambda_sup = _scale(report.nu ** 3, report.eps_sup, 0.25)
    if math.isinf(lambda_sup):
        return DoeringTitiBound(math.inf, math.inf)
    return DoeringTitiBound(radius=(report.kappa0 * lambda_sup) ** 4 / report.kappa0, lambda_eps_sup=lambda_sup)


@log
def energy_balance_dissipation(trajectory, forcing, horizon):
    """
    Energy dissipation rate from the energy balance, kappa0^n (<(f, u)> - (E(T) - E(0)) / T).

    :type forcing: gevrey_nse.forcing.ForcingSchedule

    :rtype: float

    :raises ArgumentError: zero horizon
    """
    if not horizon > 0:
        raise ArgumentError(f"averaging horizon {horizon} must be > 0")
    _check_horizon(trajectory, horizon)
    params = trajectory.params
    times = trajectory.times
    if forcing is None:
        power = 0.0
    else:
        covered = np.flatnonzero(times <= horizon)
        last = min(int(covered[-1]) + 1, len(trajectory) - 1)
        values = [_physical_inner(forcing.at(times[index]), trajectory.field(index)) for index in range(last + 1)]
        power = average_values(times[:last + 1], values, horizon)
    energies = [energy(trajectory.field(index)) for index in range(len(trajectory))]
    final_energy = float(np.interp(horizon, times, energies))
    return params.kappa0 ** params.n * (power - (final_energy - energies[0]) / horizon)


def _band_mask(field_, kappa1, kappa2):
    physical = field_.params.kappa0 * field_.lattice.norms
    return (physical >= kappa1) & (physical < kappa2)


def instantaneous_band_energy(field_, kappa1, kappa2):
    """
    kappa0^n |(P_kappa2 - P_kappa1) u|^2_L2 over kappa1 <= kappa0 |k| < kappa2.

    :rtype: float
    """
    params = field_.params
    mask = _band_mask(field_, kappa1, kappa2)
    total = 2.0 * float(np.sum(field_.moduli()[mask] ** 2))
    return params.kappa0 ** params.n * (2 * math.pi / params.kappa0) ** params.n * total


@log
def band_energy(trajectory, kappa1, kappa2, horizon):
    """
    Time averaged band energy e_{kappa1, kappa2} = kappa0^n <|(P_kappa2 - P_kappa1) u|^2>.

    :param kappa1: lower wavenumber, included, >= kappa0
    :param kappa2: upper wavenumber, excluded

    :rtype: float

    :raises ArgumentError: band outside [kappa0, truncation] or without lattice points
    """
    first = trajectory.field(0)
    kappa0 = first.params.kappa0
    if not kappa0 * (1 - 1e-12) <= kappa1 < kappa2:
        raise ArgumentError(f"band [{kappa1}, {kappa2}) must satisfy kappa0 <= kappa1 < kappa2")
    if not np.any(_band_mask(first, kappa1, kappa2)):
        raise ArgumentError(f"band [{kappa1}, {kappa2}) holds no wave vector of the truncation")
    return time_average(trajectory, lambda u: instantaneous_band_energy(u, kappa1, kappa2), horizon)


def dyadic_bands(field_):
    """
    Dyadic bands [kappa0 2^j, kappa0 2^(j+1)) covering every stored wave vector.

    :rtype: list
    """
    kappa0 = field_.params.kappa0
    top = float(np.max(field_.lattice.norms))
    bands = []
    low = 1.0
    while low <= top:
        bands.append((kappa0 * low, 2 * kappa0 * low))
        low *= 2
    return bands


@log
def dyadic_spectrum(trajectory, horizon):
    """
    Time averaged energy of every dyadic band.

    :return: rows (kappa, e_{kappa, 2 kappa})
    :rtype: list
    """
    return [(low, band_energy(trajectory, low, high, horizon)) for low, high in dyadic_bands(trajectory.field(0))]


@dataclass
class SpectrumReport:
    """
    Band spectrum with its fitted power law e ~ kappa^exponent
    """
    bands: list
    fitted_exponent: float
    prefactor: float
    fit_range: tuple
    fit_residual: float

    def as_dict(self):
        """:rtype: dict"""
        return {
            "bands": [[float(kappa), float(value)] for kappa, value in self.bands],
            "fitted_exponent": self.fitted_exponent,
            "prefactor": self.prefactor,
            "fit_range": [float(bound) for bound in self.fit_range],
            "fit_residual": self.fit_residual,
        }


@log
def fit_power_law(bands, fit_range=None):
    """
    Log-log least squares fit of band energies against band wavenumbers.

    :param bands: rows (kappa, e_{kappa, 2 kappa})
    :param fit_range: optional (low, high) wavenumber range, inclusive

    :rtype: SpectrumReport

    :raises EstimationError: fewer than 2 bands with positive energy in range
    """
    rows = np.array(bands, dtype=np.float64).reshape(-1, 2)
    usable = rows[:, 1] > 0
    if fit_range is not None:
        usable &= (rows[:, 0] >= fit_range[0]) & (rows[:, 0] <= fit_range[1])
    if np.count_nonzero(usable) < 2:
        raise EstimationError("a power law fit needs at least 2 populated bands")
    abscissa = np.log(rows[usable, 0])
    ordinate = np.log(rows[usable, 1])
    exponent, intercept = np.polyfit(abscissa, ordinate, 1)
    residual = float(np.sqrt(np.mean((ordinate - (exponent * abscissa + intercept)) ** 2)))
    used = rows[usable, 0]
    return SpectrumReport(bands=[tuple(row) for row in rows], fitted_exponent=float(exponent),
                          prefactor=float(math.exp(intercept)), fit_range=(float(used[0]), float(used[-1])),
                          fit_residual=residual)


def log_factor(G, kappa_bar_ratio):
    """
    (kbar/k0) (ln G)^(3/2) [1 + ln((kbar/k0)^(5/2) G^(1/2) (ln G)^(3/4))]

    :raises DomainError: G <= 1
    """
    if not G > 1:
        raise DomainError(f"G={G} must be > 1 for the logarithmic factor")
    log_g = math.log(G)
    inner = kappa_bar_ratio ** 2.5 * math.sqrt(G) * log_g ** 0.75
    return kappa_bar_ratio * log_g ** 1.5 * (1 + math.log(inner))


@dataclass(frozen=True)
class ChebyshevSet:
    """
    Empirical membership of one Chebyshev set
    """
    name: str
    threshold: float
    fraction: float
    markov_bound: float
    predicted: float

    @property
    def consistent(self):
        """The observed fraction stays under the predicted one"""
        return self.fraction <= self.predicted

    def as_dict(self):
        """:rtype: dict"""
        return {**asdict(self), "consistent": self.consistent}


@dataclass
class ChebyshevReport:
    """
    Membership fractions of an ensemble in the Chebyshev sets of a regime
    """
    regime: str
    p: float
    size: int
    sets: list
    log_factor: float = None

    @property
    def consistent(self):
        """:rtype: bool"""
        return all(item.consistent for item in self.sets)

    def as_dict(self):
        """:rtype: dict"""
        return {
            "regime": self.regime,
            "p": self.p,
            "size": self.size,
            "log_factor": self.log_factor,
            "consistent": self.consistent,
            "sets": [item.as_dict() for item in self.sets],
        }


def _chebyshev_set(name, values, threshold, predicted):
    values = np.asarray(values, dtype=np.float64)
    fraction = float(np.mean(values >= threshold))
    markov = float(np.mean(values ** 2) / threshold ** 2)
    return ChebyshevSet(name=name, threshold=threshold, fraction=fraction, markov_bound=markov, predicted=predicted)


@log
def chebyshev_fractions(snapshots, p, regime, G, kappa_bar_ratio, constants):
    """
    Fractions of snapshots falling in the Chebyshev sets.

    3D : |u|_L2 >= c_A sqrt(2/p) nu kappa0^-1/2 (k0/kbar)^1/2 G^1/2 and
    |A^1/2 u|_L2 >= c_B sqrt(2/p) nu kappa0^1/2 (k0/kbar)^1/4 G^3/4, each predicted at most p/2.
    2D : dimensionless |u|_W >= c_W sqrt(log_factor / p) G^1/2, predicted at most p.

    :param snapshots: ensemble of fields
    :param p: probability level in (0, 1]
    :param regime: REGIME_2D or REGIME_3D
    :param G: Grashof number
    :param kappa_bar_ratio: forcing support kbar / kappa0
    :type constants: gevrey_nse.calibration.CalibrationConstants

    :rtype: ChebyshevReport

    :raises ArgumentError: p outside (0, 1], unknown regime or small ensemble
    :raises DomainError: G <= 1 in the 2D regime
    """
    if not 0 < p <= 1:
        raise ArgumentError(f"p={p} must lie in (0, 1]")
    if len(snapshots) < MIN_ENSEMBLE_SIZE:
        raise ArgumentError(f"ensemble of {len(snapshots)} snapshots, {MIN_ENSEMBLE_SIZE} needed")
    params = snapshots[0].params
    nu, kappa0 = params.nu, params.kappa0
    if regime == REGIME_3D:
        threshold_a = (constants.chebyshev_a * math.sqrt(2 / p) * nu * kappa0 ** -0.5
                       * kappa_bar_ratio ** -0.5 * G ** 0.5)
        threshold_b = (constants.chebyshev_b * math.sqrt(2 / p) * nu * kappa0 ** 0.5
                       * kappa_bar_ratio ** -0.25 * G ** 0.75)
        sets = [_chebyshev_set("A_p", [l2_norm(u) for u in snapshots], threshold_a, p / 2),
                _chebyshev_set("B_p", [grad_l2_norm(u) for u in snapshots], threshold_b, p / 2)]
        report = ChebyshevReport(regime=regime, p=p, size=len(snapshots), sets=sets)
    elif regime == REGIME_2D:
        factor = log_factor(G, kappa_bar_ratio)
        threshold = constants.chebyshev_w * math.sqrt(factor / p) * math.sqrt(G)
        sets = [_chebyshev_set("W_p", [wiener_norm(u, dimensionless=True) for u in snapshots], threshold, p)]
        report = ChebyshevReport(regime=regime, p=p, size=len(snapshots), sets=sets, log_factor=factor)
    else:
        raise ArgumentError(f"unknown regime {regime!r}, expected {REGIME_2D} or {REGIME_3D}")
    _LOGGER.info("Chebyshev fractions (%s, p=%g) : %s", regime, p,
                 ", ".join(f"{item.name}={item.fraction:.3f}" for item in report.sets))
    return report


@dataclass
class TurbulenceBounds:
    """
    Measured ensemble averages against the turbulent flow bounds
    """
    n: int
    turbulent: bool
    averages: dict
    lower_bounds: dict
    upper_bounds: dict
    dissipation_scale_bound: float

    def as_dict(self):
        """:rtype: dict"""
        return asdict(self)


@log
def turbulence_bounds(report, G, kappa_bar_ratio):
    """
    Evaluates the ensemble bounds of turbulent flows and the predicted radius lower bound
    in terms of the dissipation scales.

    3D : nu^2/k0 r^-5/2 G <= <|u|^2> <= nu^2/k0 r^-1 G and
    nu^2 k0 r^-11/4 G^3/2 <= <|A^1/2 u|^2> <= nu^2 k0 r^-1/2 G^3/2, radius k0^-1 (k0 lambda_eps)^(59/24).
    2D : nu^2 k0^2 r^-1 G <= <|A^1/2 u|^2> <= nu^2 k0^2 r G (ln G)^3/2 and
    nu^2 k0^4 r^-3/2 G^3/2 (ln G)^-3/2 <= <|A u|^2> <= nu^2 k0^4 r^3/2 G^3/2 (ln G)^3/4,
    radius k0^-1 (k0 lambda_eta)^2, with r = kbar / k0.

    :type report: DissipationReport

    :rtype: TurbulenceBounds
    """
    nu, kappa0, ratio = report.nu, report.kappa0, kappa_bar_ratio
    if report.n == 3:
        turbulent = G >= ratio ** 1.5
        averages = {"l2_squared": report.mean_l2_squared, "grad_squared": report.mean_grad_squared}
        lower = {"l2_squared": nu ** 2 / kappa0 * ratio ** -2.5 * G,
                 "grad_squared": nu ** 2 * kappa0 * ratio ** -2.75 * G ** 1.5}
        upper = {"l2_squared": nu ** 2 / kappa0 * ratio ** -1 * G,
                 "grad_squared": nu ** 2 * kappa0 * ratio ** -0.5 * G ** 1.5}
        scale = (kappa0 * report.lambda_eps) ** (59 / 24) / kappa0
    else:
        if not G > 1:
            raise DomainError(f"G={G} must be > 1 for the 2D bounds")
        log_g = math.log(G)
        turbulent = G >= ratio ** 2
        averages = {"grad_squared": report.mean_grad_squared, "laplacian_squared": report.mean_laplacian_squared}
        lower = {"grad_squared": nu ** 2 * kappa0 ** 2 * G / ratio,
                 "laplacian_squared": nu ** 2 * kappa0 ** 4 * ratio ** -1.5 * G ** 1.5 / log_g ** 1.5}
        upper = {"grad_squared": nu ** 2 * kappa0 ** 2 * ratio * G * log_g ** 1.5,
                 "laplacian_squared": nu ** 2 * kappa0 ** 4 * ratio ** 1.5 * G ** 1.5 * log_g ** 0.75}
        scale = (kappa0 * report.lambda_eta) ** 2 / kappa0
    return TurbulenceBounds(n=report.n, turbulent=bool(turbulent), averages=averages, lower_bounds=lower,
                            upper_bounds=upper, dissipation_scale_bound=scale)


class RunningAverage:
    """
    Trapezoidal running mean of a sampled scalar from t=0
    """

    def __init__(self):
        self._time = None
        self._value = None
        self._integral = 0.0

    def update(self, t, value):
        """
        Adds a sample, times must increase.
        """
        if self._time is not None:
            if t <= self._time:
                raise ArgumentError(f"t={t} does not follow {self._time}")
            self._integral += 0.5 * (value + self._value) * (t - self._time)
        self._time = t
        self._value = value

    @property
    def mean(self):
        """Mean to date, the first sample when no time has elapsed"""
        if self._time is None:
            return math.nan
        if self._time == 0:
            return self._value
        return self._integral / self._time


@dataclass(frozen=True)
class DiagnosticsRecord:
    """
    Scalars recorded along a run for one state
    """
    t: float
    energy: float
    enstrophy: float
    gevrey_norm: float
    lambda_hat: float
    eps_to_date: float
    G: float
    M0: float
    Mf: float

    def as_dict(self):
        """:rtype: dict"""
        return asdict(self)


def diagnostics_record(t, state, sigma, eps_to_date, numbers, fit_band=None):
    """
    Builds the record of a state, the radius coming from the modal decay fit and left
    to NaN when too few shells are populated.

    :type state: gevrey_nse.spectral.SpectralField
    :type numbers: gevrey_nse.norms.DataNumbers

    :rtype: DiagnosticsRecord
    """
    try:
        lambda_hat = estimate_radius_fit(state, fit_band, sigma).lambda_hat
    except EstimationError:
        lambda_hat = math.nan
    return DiagnosticsRecord(t=float(t), energy=energy(state), enstrophy=enstrophy(state),
                             gevrey_norm=gevrey(state, math.sqrt(state.params.nu * t), sigma),
                             lambda_hat=lambda_hat, eps_to_date=float(eps_to_date), G=numbers.G,
                             M0=numbers.M0, Mf=numbers.Mf)
