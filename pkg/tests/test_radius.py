import dataclasses
import math

import numpy as np
from pytest import approx, raises

from gevrey_nse.calibration import load_constants
from gevrey_nse.errors import ArgumentError, EstimationError
from gevrey_nse.mild import theorem_quantities
from gevrey_nse.radius import (METHOD_BISECT, METHOD_FIT, RADIUS_CAP, VERDICT_FAIL, VERDICT_INCONCLUSIVE,
                               VERDICT_PASS, RadiusEstimate, compare_to_bound, default_fit_band,
                               estimate_radius_bisect, estimate_radius_fit, fit_radius_growth, shell_maxima)
from gevrey_nse.spectral import PROFILE_GAUSSIAN_DECAY, SpectralField, heat_propagate, random_field


def _decaying(params, K, radius):
    return random_field(params, K, (1.0, K), 5, amplitude_profile=PROFILE_GAUSSIAN_DECAY, decay=radius)


def test_default_fit_band():
    assert default_fit_band(32) == (8.0, 24.0)


def test_shell_maxima_single_pair(shear_pair):
    rows = shell_maxima(shear_pair)
    assert rows.shape == (1, 3)
    assert list(rows[0]) == approx([1.0, 1.0, 1.0])
    assert shell_maxima(shear_pair, band=(2.0, 3.0)).shape == (0, 3)


def test_fit_recovers_exponential_decay(unit_params):
    estimate = estimate_radius_fit(_decaying(unit_params, 32, 0.7))
    assert estimate.method == METHOD_FIT
    assert estimate.lambda_hat == approx(0.7, abs=1e-8)
    assert estimate.residual < 1e-8
    assert estimate.fit_band == (8.0, 24.0)
    assert np.allclose(estimate.fitted(unit_params.kappa0), estimate.shell_maxima[:, 2], rtol=1e-7)


def test_fit_sobolev_compensation(unit_params):
    base = _decaying(unit_params, 32, 0.7)
    field_ = base.with_coeffs(base.coeffs * base.lattice.norms[:, None] ** -2.0)
    assert estimate_radius_fit(field_, sigma=2.0).lambda_hat == approx(0.7, abs=1e-8)
    # the algebraic factor reads as extra decay when left uncompensated
    assert estimate_radius_fit(field_).lambda_hat > 0.75


def test_fit_rejects_bad_input(unit_params, shear_pair):
    with raises(EstimationError):
        estimate_radius_fit(shear_pair)
    with raises(ArgumentError):
        estimate_radius_fit(_decaying(unit_params, 16, 0.5), fit_band=(6.0, 2.0))
    with raises(ArgumentError):
        estimate_radius_fit(_decaying(unit_params, 16, 0.5), fit_band=(2.0, 100.0))


def test_bisect_single_pair_is_capped(shear_pair):
    estimate = estimate_radius_bisect(shear_pair, budget=1e10)
    assert estimate.capped
    assert estimate.method == METHOD_BISECT
    assert estimate.lambda_hat == RADIUS_CAP


def test_bisect_single_pair_exact(shear_pair):
    # exp(lam) <= 2 for a single |k| = 1 pair
    estimate = estimate_radius_bisect(shear_pair, budget=2.0)
    assert not estimate.capped
    assert estimate.lambda_hat == approx(math.log(2.0), abs=2e-3)
    assert estimate.lambda_hat <= math.log(2.0)


def test_bisect_errors(unit_params, shear_pair):
    with raises(ArgumentError):
        estimate_radius_bisect(shear_pair, budget=1.0)
    with raises(EstimationError):
        estimate_radius_bisect(SpectralField.zeros(unit_params, 4))


def test_heat_flow_radius_grows_like_sqrt_t(unit_params):
    flat = random_field(unit_params, 48, (1.0, 48.0), 2)
    times = np.geomspace(0.004, 0.04, 6)
    radii = [estimate_radius_bisect(heat_propagate(flat, t)).lambda_hat for t in times]
    assert np.all(np.diff(radii) > 0)
    exponent, prefactor = fit_radius_growth(times, radii)
    assert exponent == approx(0.5, abs=0.1)
    assert 0.5 <= prefactor <= 2.0


def test_fit_radius_growth_exact():
    times = np.array([0.0, 1.0, 4.0, 9.0])
    exponent, prefactor = fit_radius_growth(times, 2.0 * np.sqrt(times))
    assert exponent == approx(0.5)
    assert prefactor == approx(2.0)
    with raises(EstimationError):
        fit_radius_growth([0.0, 1.0], [0.0, 1.0])


def test_compare_to_bound(unit_params):
    u0 = random_field(unit_params, 6, (1.0, 6.0), 0, amplitude=1e-6)
    theorem = theorem_quantities(u0, None, 0, 2, "3.1", 1.0, load_constants())
    assert theorem.radius_bound == approx(1.0)

    wide = RadiusEstimate(lambda_hat=1.5, method=METHOD_FIT, fit_band=(1.0, 4.0))
    narrow = RadiusEstimate(lambda_hat=0.5, method=METHOD_FIT, fit_band=(1.0, 4.0))
    assert compare_to_bound(wide, theorem).verdict == VERDICT_PASS
    comparison = compare_to_bound(narrow, theorem)
    assert comparison.verdict == VERDICT_FAIL
    assert comparison.ratio == approx(0.5)
    assert comparison.as_dict()["theorem"] == "3.1"

    unchecked = dataclasses.replace(theorem, hypothesis=False)
    assert compare_to_bound(wide, unchecked).verdict == VERDICT_INCONCLUSIVE
