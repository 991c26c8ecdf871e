"""
Radius of spatial analyticity estimators : log-linear modal decay fit, Gevrey growth budget
bisection and comparison against theorem lower bounds
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

from gevrey_nse.code_utilities import log
from gevrey_nse.errors import ArgumentError, EstimationError, SaturationError
from gevrey_nse.norms import gevrey, sobolev_l1_norm

_LOGGER = logging.getLogger(__name__)

METHOD_FIT = "loglinear_fit"
METHOD_BISECT = "gevrey_bisect"

# shells below this fraction of the largest coefficient are ignored by the fit
NOISE_FLOOR = 1e-14

MIN_FIT_SHELLS = 4

# bisection cap and tolerance, in units of 1 / kappa0
RADIUS_CAP = 20.0
BISECTION_TOLERANCE = 1e-3

VERDICT_PASS = "PASS"
VERDICT_FAIL = "FAIL"
VERDICT_INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class RadiusEstimate:
    """
    Estimated radius lambda_hat with the data it was obtained from.

    shell_maxima rows are (shell index m, |k| of the shell maximum, weighted maximum).
    """
    lambda_hat: float
    method: str
    fit_band: tuple
    residual: float = 0.0
    intercept: float = 0.0
    shell_maxima: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    capped: bool = False
    budget: float = None

    def fitted(self, kappa0):
        """
        Fitted log decay line evaluated at every shell maximum.

        :rtype: numpy.ndarray
        """
        return np.exp(self.intercept - self.lambda_hat * kappa0 * self.shell_maxima[:, 1])

    def as_dict(self):
        """:rtype: dict"""
        return {
            "lambda_hat": self.lambda_hat,
            "method": self.method,
            "fit_band": [float(bound) for bound in self.fit_band],
            "residual": self.residual,
            "capped": self.capped,
            "budget": self.budget,
            "shells": int(len(self.shell_maxima)),
        }


def default_fit_band(K):
    """
    [K/4, 3K/4] in lattice units.

    :rtype: tuple
    """
    return K / 4, 3 * K / 4


def shell_maxima(field_, sigma=0.0, band=None):
    """
    Largest |u(k)| |k|^sigma over each unit shell m <= |k| < m + 1.

    :param band: optional (low, high) bounds on |k|, both inclusive

    :return: rows (m, |k| at the maximum, maximum) for populated shells
    :rtype: numpy.ndarray
    """
    lattice = field_.lattice
    norms = lattice.norms
    values = field_.moduli() * norms ** sigma
    selected = values > 0
    if band is not None:
        selected &= (norms >= band[0]) & (norms <= band[1])
    shells = np.floor(norms + 1e-12).astype(np.int64)
    rows = []
    for shell in np.unique(shells[selected]):
        members = np.flatnonzero(selected & (shells == shell))
        best = members[np.argmax(values[members])]
        rows.append((float(shell), float(norms[best]), float(values[best])))
    return np.array(rows, dtype=np.float64).reshape(-1, 3)


@log
def estimate_radius_fit(field_, fit_band=None, sigma=0.0):
    """
    Least squares fit of log(sup_shell |u(k)| |k|^sigma) against -kappa0 |k|, the slope
    being the radius estimate.

    :type field_: gevrey_nse.spectral.SpectralField
    :param fit_band: (low, high) bounds on |k| in lattice units, defaults to [K/4, 3K/4]
    :param sigma: compensating Sobolev exponent

    :rtype: RadiusEstimate

    :raises ArgumentError: the band lies outside the truncation
    :raises EstimationError: fewer than 4 populated shells above the noise floor
    """
    band = default_fit_band(field_.K) if fit_band is None else tuple(fit_band)
    low, high = band
    if not 0 < low < high or high > field_.K * math.sqrt(field_.n):
        raise ArgumentError(f"fit band {band} must satisfy 0 < low < high within the truncation")
    floor = NOISE_FLOOR * field_.max_abs()
    rows = shell_maxima(field_, sigma, band)
    if len(rows):
        rows = rows[rows[:, 2] / np.maximum(rows[:, 1] ** sigma, 1e-300) > floor]
    if len(rows) < MIN_FIT_SHELLS:
        raise EstimationError(f"only {len(rows)} populated shells in fit band {band}, {MIN_FIT_SHELLS} needed")

    kappa0 = field_.params.kappa0
    abscissa = -kappa0 * rows[:, 1]
    ordinate = np.log(rows[:, 2])
    slope, intercept = np.polyfit(abscissa, ordinate, 1)
    residual = float(np.sqrt(np.mean((ordinate - (slope * abscissa + intercept)) ** 2)))
    lambda_hat = max(float(slope), 0.0)
    _LOGGER.debug("Radius fit over %d shells : lambda=%.6g, rms=%.3e", len(rows), lambda_hat, residual)
    return RadiusEstimate(lambda_hat=lambda_hat, method=METHOD_FIT, fit_band=band, residual=residual,
                          intercept=float(intercept), shell_maxima=rows)


def _growth_ratio(field_, lam, sigma, reference):
    try:
        return gevrey(field_, lam, sigma) / reference
    except SaturationError:
        return math.inf


@log
def estimate_radius_bisect(field_, sigma=0.0, budget=2.0):
    """
    Bisects for the largest lam with |u|_{lam, sigma} <= budget |u|_sigma.

    Searches [0, 20 / kappa0] down to 1e-3 / kappa0. Fields staying under budget at the
    cap are returned at the cap with the capped flag set.

    :param budget: allowed Gevrey growth, > 1

    :rtype: RadiusEstimate

    :raises ArgumentError: budget <= 1
    :raises EstimationError: the zero field
    """
    if not budget > 1:
        raise ArgumentError(f"budget={budget} must be > 1")
    reference = sobolev_l1_norm(field_, sigma)
    if reference == 0:
        raise EstimationError("the zero field has no radius estimate")
    kappa0 = field_.params.kappa0
    low, high = 0.0, RADIUS_CAP / kappa0
    band = (0.0, float(np.max(field_.lattice.norms)))
    if _growth_ratio(field_, high, sigma, reference) <= budget:
        _LOGGER.debug("Gevrey growth stays under budget %.3g up to the cap", budget)
        return RadiusEstimate(lambda_hat=high, method=METHOD_BISECT, fit_band=band, capped=True, budget=budget)
    while high - low > BISECTION_TOLERANCE / kappa0:
        middle = 0.5 * (low + high)
        if _growth_ratio(field_, middle, sigma, reference) <= budget:
            low = middle
        else:
            high = middle
    return RadiusEstimate(lambda_hat=low, method=METHOD_BISECT, fit_band=band, residual=high - low, budget=budget)


@log
def fit_radius_growth(times, radii):
    """
    Fits lambda(t) = c t^p on a log-log scale.

    :return: (p, c)
    :rtype: tuple

    :raises EstimationError: fewer than 2 positive samples
    """
    times = np.asarray(times, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    usable = (times > 0) & (radii > 0)
    if np.count_nonzero(usable) < 2:
        raise EstimationError("radius growth needs at least 2 positive samples")
    exponent, log_prefactor = np.polyfit(np.log(times[usable]), np.log(radii[usable]), 1)
    return float(exponent), float(math.exp(log_prefactor))


@dataclass(frozen=True)
class RadiusComparison:
    """
    Measured radius against a theorem lower bound
    """
    lambda_hat: float
    radius_bound: float
    ratio: float
    hypothesis: bool
    verdict: str
    method: str
    theorem_id: str

    def as_dict(self):
        """:rtype: dict"""
        return {
            "lambda_hat": self.lambda_hat,
            "radius_bound": self.radius_bound,
            "ratio": self.ratio,
            "hypothesis": self.hypothesis,
            "verdict": self.verdict,
            "method": self.method,
            "theorem": self.theorem_id,
        }


def compare_to_bound(estimate, theorem):
    """
    Compares an estimate with the radius lower bound of a theorem.

    PASS when lambda_hat >= radius_bound, FAIL otherwise, INCONCLUSIVE whenever the
    smallness hypothesis of the theorem does not hold.

    :type estimate: RadiusEstimate
    :type theorem: gevrey_nse.mild.TheoremQuantities

    :rtype: RadiusComparison
    """
    bound = theorem.radius_bound
    ratio = estimate.lambda_hat / bound if bound > 0 else math.inf
    if not theorem.hypothesis:
        verdict = VERDICT_INCONCLUSIVE
    elif ratio >= 1:
        verdict = VERDICT_PASS
    else:
        verdict = VERDICT_FAIL
    _LOGGER.info("Radius %.4e vs bound %.4e (ratio %.3g) : %s", estimate.lambda_hat, bound, ratio, verdict)
    return RadiusComparison(lambda_hat=estimate.lambda_hat, radius_bound=bound, ratio=ratio,
                            hypothesis=theorem.hypothesis, verdict=verdict, method=estimate.method,
                            theorem_id=theorem.theorem_id)
