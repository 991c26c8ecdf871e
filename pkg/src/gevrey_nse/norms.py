"""
Scalar functionals on spectral fields : l1 Sobolev and Gevrey norms, Wiener norm,
L2 norms and the dimensionless data numbers of a run
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
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from gevrey_nse.code_utilities import log
from gevrey_nse.errors import ArgumentError, SaturationError

_LOGGER = logging.getLogger(__name__)

_LOG_FLOAT_MAX = math.log(np.finfo(np.float64).max)


@dataclass(frozen=True)
class GevreyWeight:
    """
    Gevrey weight exp(lam kappa0 |k|) |k|^sigma.

    :param lam: radius parameter, a length
    :param sigma: Sobolev exponent
    """
    lam: float
    sigma: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise ArgumentError(f"lambda={self.lam} must be >= 0")


class SqrtSchedule:
    """
    Sublinear radius schedule lam(t) = min(alpha sqrt(nu t), cap)
    """

    def __init__(self, nu, alpha=1.0, cap=math.inf):
        self.nu = nu
        self.alpha = alpha
        self.cap = cap

    def __call__(self, t):
        return np.minimum(self.alpha * np.sqrt(self.nu * np.asarray(t, dtype=np.float64)), self.cap)

    def __repr__(self):
        return f"SqrtSchedule(nu={self.nu}, alpha={self.alpha}, cap={self.cap})"


class ConstantSchedule:
    """
    Constant radius schedule
    """

    def __init__(self, value=0.0):
        if value < 0:
            raise ArgumentError(f"lambda={value} must be >= 0")
        self.value = value

    def __call__(self, t):
        return np.full_like(np.asarray(t, dtype=np.float64), self.value)[()]

    def __repr__(self):
        return f"ConstantSchedule({self.value})"


def conjugate_exponent(q):
    """
    Hoelder conjugate q' of q, exact for fractions.

    :param q: integrability exponent, > 1, math.inf allowed
    :type q: int, float or fractions.Fraction

    :return: q / (q - 1), 1 for q = inf
    """
    if q == math.inf:
        return 1
    if not q > 1:
        raise ArgumentError(f"q={q} must be > 1")
    return q / (q - 1)


def _weighted_sum(field_, lam, sigma):
    """
    Sum of exp(lam kappa0 |k|) |k|^sigma |u(k)| over the full lattice, accumulated in
    descending shell order.
    """
    lattice = field_.lattice
    order = lattice.descending
    moduli = field_.moduli()[order]
    norms = lattice.norms[order]
    populated = moduli > 0
    if not np.any(populated):
        return 0.0
    norms = norms[populated]
    logs = lam * field_.params.kappa0 * norms + sigma * np.log(norms) + np.log(moduli[populated])
    saturated = np.flatnonzero(logs > _LOG_FLOAT_MAX - 1)
    if saturated.size:
        shell = float(norms[saturated[0]])
        raise SaturationError(f"Gevrey weight overflows at shell |k|={shell:.6g} for lambda={lam}", shell)
    total = 2.0 * float(np.sum(np.exp(logs)))
    if not math.isfinite(total):
        shell = float(norms[np.argmax(logs)])
        raise SaturationError(f"Gevrey sum overflows, dominated by shell |k|={shell:.6g}", shell)
    return total


def _scaled(field_, sigma, total):
    value = field_.params.kappa0 ** sigma * total
    if not math.isfinite(value):
        raise SaturationError(f"Gevrey norm overflows for sigma={sigma}", float(np.max(field_.lattice.norms)))
    return value


@log
def sobolev_l1_norm(field_, sigma):
    """
    l1 Sobolev norm kappa0^sigma sum |k|^sigma |u(k)|.

    :type field_: gevrey_nse.spectral.SpectralField
    :param sigma: Sobolev exponent
    :type sigma: float

    :rtype: float
    """
    return gevrey_norm(field_, GevreyWeight(0.0, sigma))


def gevrey_norm(field_, weight):
    """
    Gevrey norm kappa0^sigma sum exp(lam kappa0 |k|) |k|^sigma |u(k)|.

    :type field_: gevrey_nse.spectral.SpectralField
    :type weight: GevreyWeight

    :rtype: float

    :raises SaturationError: the weighted sum leaves the float range
    """
    return _scaled(field_, weight.sigma, _weighted_sum(field_, weight.lam, weight.sigma))


def gevrey(field_, lam, sigma):
    """
    Shorthand for :func:`gevrey_norm` with weight (lam, sigma).

    :rtype: float
    """
    return gevrey_norm(field_, GevreyWeight(lam, sigma))


def wiener_norm(field_, dimensionless=False):
    """
    Wiener algebra norm sum |u(k)|.

    :param dimensionless: divide by nu kappa0, which makes the sigma=0 Sobolev norm and
                          the Wiener norm coincide
    :type dimensionless: bool

    :rtype: float
    """
    total = 2.0 * float(np.sum(field_.moduli()))
    if dimensionless:
        return total / (field_.params.nu * field_.params.kappa0)
    return total


def _parseval(field_, power):
    params = field_.params
    weights = (params.kappa0 * field_.lattice.norms) ** (2 * power)
    total = 2.0 * float(np.sum(weights * field_.moduli() ** 2))
    return math.sqrt((2 * math.pi) ** params.n * params.kappa0 ** -params.n * total)


def l2_norm(field_):
    """
    Physical space L2 norm, through Parseval.

    :rtype: float
    """
    return _parseval(field_, 0)


def grad_l2_norm(field_):
    """
    L2 norm of the gradient, equal to the L2 norm of A^1/2 u.

    :rtype: float
    """
    return _parseval(field_, 1)


def laplacian_l2_norm(field_):
    """
    L2 norm of A u.

    :rtype: float
    """
    return _parseval(field_, 2)


def energy(field_):
    """
    Kinetic energy 1/2 |u|^2 integrated over the box.

    :rtype: float
    """
    return 0.5 * l2_norm(field_) ** 2


def enstrophy(field_):
    """
    1/2 |grad u|^2 integrated over the box.

    :rtype: float
    """
    return 0.5 * grad_l2_norm(field_) ** 2


@dataclass(frozen=True)
class DataNumbers:
    """
    Dimensionless sizes of initial data and forcing.
    """
    M0: float
    Mf: float
    M: float
    G: float
    q: float
    q_prime: float
    Tf: float

    def as_dict(self):
        """:rtype: dict"""
        return {
            "M0": self.M0,
            "Mf": self.Mf,
            "M": self.M,
            "G": self.G,
            "q": _json_number(self.q),
            "q_prime": float(self.q_prime),
            "Tf": self.Tf,
        }


def _json_number(value):
    return "inf" if value == math.inf else float(value)


def initial_data_number(u0, sigma):
    """
    M0 = kappa0^-sigma / (nu kappa0) |u0|_sigma

    :rtype: float
    """
    params = u0.params
    return params.kappa0 ** -sigma / (params.nu * params.kappa0) * sobolev_l1_norm(u0, sigma)


def grashof_number(forcing):
    """
    G = kappa0^(n/2) / (nu^2 kappa0^3) sup_t |f(t)|_L2

    :type forcing: gevrey_nse.forcing.ForcingSchedule or None

    :rtype: float
    """
    if forcing is None:
        return 0.0
    params = forcing.params
    sup_norm = max(l2_norm(sample) for sample in forcing.fields)
    return params.kappa0 ** (params.n / 2) / (params.nu ** 2 * params.kappa0 ** 3) * sup_norm


def _forcing_integral(forcing, sigma, q, Tf, schedule):
    """
    (nu kappa0^2 int_0^Tf |f(s)|^q_{lam(s),sigma} ds)^(1/q), or the sup for q = inf

    :raises SaturationError: the weighted forcing norm or its q-th power overflows
    """
    try:
        value = _forcing_time_norm(forcing, sigma, q, Tf, schedule)
    except (OverflowError, FloatingPointError) as error:
        shell = getattr(error, "shell", float(np.max(forcing.at(0.0).lattice.norms)))
        raise SaturationError(f"forcing norm overflows over [0, Tf={Tf}] for sigma={sigma}, q={q} : {error}",
                              shell) from error
    if not math.isfinite(value):
        shell = float(np.max(forcing.at(0.0).lattice.norms))
        raise SaturationError(f"forcing norm overflows over [0, Tf={Tf}] for sigma={sigma}, q={q}", shell)
    return value


def _forcing_time_norm(forcing, sigma, q, Tf, schedule):
    params = forcing.params
    rate = params.nu * params.kappa0 ** 2

    if forcing.is_time_independent:
        field_ = forcing.at(0.0)
        if isinstance(schedule, ConstantSchedule) or q == math.inf:
            # increasing schedules reach their sup at Tf
            value = gevrey(field_, float(schedule(Tf)), sigma)
            if q == math.inf:
                return value
            return (rate * Tf) ** (1 / q) * value
        integral, _ = integrate.quad(lambda s: gevrey(field_, float(schedule(s)), sigma) ** q,
                                     0.0, Tf, epsabs=0.0, epsrel=1e-12, limit=200)
        return (rate * integral) ** (1 / q)

    times = forcing.times
    if Tf > times[-1]:
        raise ArgumentError(f"Tf={Tf} exceeds the forcing samples horizon {times[-1]}")
    grid = np.unique(np.concatenate([times[times < Tf], [Tf]]))
    values = np.array([gevrey(forcing.at(t), float(schedule(t)), sigma) for t in grid])
    if q == math.inf:
        return float(np.max(values))
    with np.errstate(over="raise"):
        return (rate * integrate.trapezoid(values ** q, grid)) ** (1 / q)


@log
def compute_data_numbers(u0, forcing, sigma, q, Tf, schedule=None):
    """
    Computes M0, Mf, M = M0 + Mf and the Grashof number G.

    Mf = kappa0^-sigma / (nu^2 kappa0^3) (nu kappa0^2 int_0^Tf |f(s)|^q_{lam(s),sigma} ds)^(1/q),
    the time integral being exact for time-independent forcing and trapezoidal on the
    forcing samples otherwise.

    :param u0: initial data
    :type u0: gevrey_nse.spectral.SpectralField
    :param forcing: body force, None for an unforced flow
    :type forcing: gevrey_nse.forcing.ForcingSchedule
    :param sigma: Sobolev exponent
    :param q: time integrability exponent, > 1, math.inf allowed
    :param Tf: forcing horizon
    :param schedule: radius schedule lam(t), defaults to sqrt(nu t)

    :rtype: DataNumbers

    :raises ArgumentError: q <= 1 or Tf <= 0
    """
    q_prime = conjugate_exponent(q)
    if not Tf > 0:
        raise ArgumentError(f"Tf={Tf} must be > 0")
    params = u0.params
    schedule = SqrtSchedule(params.nu) if schedule is None else schedule

    m_zero = initial_data_number(u0, sigma)
    if forcing is None:
        m_force = 0.0
    else:
        forcing.check_compatible(u0)
        m_force = (params.kappa0 ** -sigma / (params.nu ** 2 * params.kappa0 ** 3)
                   * _forcing_integral(forcing, sigma, q, Tf, schedule))
    return DataNumbers(M0=m_zero, Mf=m_force, M=m_zero + m_force, G=grashof_number(forcing),
                       q=q, q_prime=q_prime, Tf=Tf)


def lattice_point_count(n, radius):
    """
    Number of integer vectors k in Z^n with |k| <= radius, k = 0 included.

    :rtype: int
    """
    side = int(math.floor(radius))
    axes = [np.arange(-side, side + 1)] * n
    grids = np.meshgrid(*axes, indexing="ij")
    squares = sum(grid.astype(np.int64) ** 2 for grid in grids)
    return int(np.count_nonzero(squares <= radius ** 2 + 1e-12))


def mf_grashof_constants(n, kappa_bar_ratio, lambda_f, sigma, kappa0):
    """
    Constants (C_low, C_n) of the bracket C_low Mf <= (nu kappa0^2 tau)^(1/q) G <= C_n Mf
    for time-independent forcing supported in |k| <= kappa_bar / kappa0 :

    C_low = (2 pi)^-n N^-1/2 exp(-2 lambda_f kappa_bar) (kappa0 / kappa_bar)^sigma, C_n = (2 pi)^n

    where N counts the lattice points in the support ball.

    :param n: dimension
    :param kappa_bar_ratio: forcing support radius kappa_bar / kappa0
    :param lambda_f: radius reached by the schedule at tau
    :param sigma: Sobolev exponent
    :param kappa0: base wavenumber

    :rtype: tuple

    :raises ArgumentError: kappa_bar_ratio < 1
    """
    if not kappa_bar_ratio >= 1:
        raise ArgumentError(f"kappa_bar / kappa0 = {kappa_bar_ratio} must be >= 1")
    count = lattice_point_count(n, kappa_bar_ratio)
    kappa_bar = kappa_bar_ratio * kappa0
    lower = ((2 * math.pi) ** -n * count ** -0.5 * math.exp(-2 * lambda_f * kappa_bar)
             * kappa_bar_ratio ** -sigma)
    return lower, (2 * math.pi) ** n
