import math
from fractions import Fraction

import numpy as np
from pytest import approx, raises

from gevrey_nse.errors import ArgumentError, SaturationError
from gevrey_nse.forcing import ForcingSchedule
from gevrey_nse.norms import (ConstantSchedule, GevreyWeight, SqrtSchedule, compute_data_numbers,
                              conjugate_exponent, energy, enstrophy, gevrey, gevrey_norm, grad_l2_norm,
                              laplacian_l2_norm, l2_norm, lattice_point_count, mf_grashof_constants,
                              sobolev_l1_norm, wiener_norm)
from gevrey_nse.spectral import PhysicalParams, SpectralField, random_field


def _pair(params, k, modulus, K=4):
    return SpectralField.from_modes(params, K, {k: (0.0, modulus) if k[1] == 0 else (modulus, 0.0)})


def test_sobolev_unit_pair(unit_params):
    assert sobolev_l1_norm(_pair(unit_params, (1, 0), 0.5), 0) == approx(1.0, rel=1e-15)


def test_sobolev_weighted_pair(unit_params):
    assert sobolev_l1_norm(_pair(unit_params, (2, 0), 1.0), 2) == approx(8.0, rel=1e-15)


def test_sobolev_matches_wiener():
    params = PhysicalParams(2, 2 * math.pi, 0.5)
    field_ = random_field(params, 5, (1.0, 5.0), 4)
    assert sobolev_l1_norm(field_, 0) == approx(wiener_norm(field_), rel=1e-14)
    nu_kappa0 = params.nu * params.kappa0
    assert nu_kappa0 * wiener_norm(field_, dimensionless=True) == approx(sobolev_l1_norm(field_, 0), rel=1e-14)


def test_gevrey_unit_pair(unit_params):
    assert gevrey(_pair(unit_params, (1, 0), 0.5), 1.0, 0) == approx(math.e, rel=1e-15)


def test_gevrey_reduces_to_sobolev(random_2d):
    assert gevrey_norm(random_2d, GevreyWeight(0.0, 0.5)) == approx(sobolev_l1_norm(random_2d, 0.5), rel=1e-15)


def test_gevrey_monotone(random_2d):
    values = [gevrey(random_2d, lam, 0.0) for lam in (0.0, 0.1, 0.5, 1.0)]
    assert values == sorted(values)
    by_sigma = [gevrey(random_2d, 0.2, sigma) for sigma in (-0.5, 0.0, 1.0, 2.0)]
    assert by_sigma == sorted(by_sigma)


def test_gevrey_homogeneous(random_2d):
    assert gevrey(3.0 * random_2d, 0.3, 1.0) == approx(3.0 * gevrey(random_2d, 0.3, 1.0), rel=1e-15)


def test_gevrey_negative_lambda():
    with raises(ArgumentError):
        GevreyWeight(-0.1, 0.0)


def test_gevrey_saturation(random_2d):
    with raises(SaturationError) as error:
        gevrey(random_2d, 1000.0, 0.0)
    assert error.value.shell > 0


def test_gevrey_finite_below_decay_radius(unit_params):
    field_ = random_field(unit_params, 12, (1.0, 12.0), 1, amplitude_profile="gaussian-decay", decay=1.0)
    values = [gevrey(field_, lam, 0.0) for lam in (0.0, 0.5, 0.9)]
    assert all(math.isfinite(value) for value in values)
    assert values[2] > values[1] > values[0]


def test_wiener_and_l2_pair(unit_params):
    field_ = _pair(unit_params, (1, 0), 1.0)
    assert wiener_norm(field_) == approx(2.0, rel=1e-15)
    assert l2_norm(field_) == approx(2 * math.pi * math.sqrt(2), rel=1e-15)


def test_gradient_of_single_shell(unit_params):
    field_ = _pair(unit_params, (2, 0), 1.0)
    assert grad_l2_norm(field_) == approx(2 * l2_norm(field_), rel=1e-15)
    assert laplacian_l2_norm(field_) == approx(4 * l2_norm(field_), rel=1e-15)


def test_poincare_and_embedding(random_2d):
    params = random_2d.params
    assert laplacian_l2_norm(random_2d) >= params.kappa0 * grad_l2_norm(random_2d)
    scaled_l2 = (2 * math.pi) ** (-params.n / 2) * params.kappa0 ** (params.n / 2) * l2_norm(random_2d)
    assert sobolev_l1_norm(random_2d, 1.0) >= wiener_norm(random_2d) >= scaled_l2


def test_energy_and_enstrophy(shear_pair):
    assert energy(shear_pair) == approx(0.5 * l2_norm(shear_pair) ** 2)
    assert enstrophy(shear_pair) == approx(0.5 * grad_l2_norm(shear_pair) ** 2)


def test_conjugate_exponent():
    assert conjugate_exponent(2) == 2
    assert conjugate_exponent(Fraction(59, 49)) == Fraction(59, 10)
    assert conjugate_exponent(math.inf) == 1
    with raises(ArgumentError):
        conjugate_exponent(1)


def test_schedules():
    assert SqrtSchedule(4.0)(1.0) == approx(2.0)
    assert SqrtSchedule(4.0, cap=1.5)(1.0) == approx(1.5)
    assert ConstantSchedule(0.3)(10.0) == approx(0.3)
    with raises(ArgumentError):
        ConstantSchedule(-1.0)


def test_data_numbers_unforced(random_2d):
    numbers = compute_data_numbers(random_2d, None, 0.0, 2, 1.0)
    assert numbers.Mf == 0.0
    assert numbers.G == 0.0
    assert numbers.M == numbers.M0
    assert numbers.M0 == approx(sobolev_l1_norm(random_2d, 0.0))
    assert numbers.q_prime == 2


def test_grashof_single_pair(unit_params, shear_pair):
    g = 0.25
    forcing = ForcingSchedule.constant(g * shear_pair)
    numbers = compute_data_numbers(shear_pair, forcing, 0.0, 2, 1.0)
    assert numbers.G == approx(2 * math.pi * math.sqrt(2) * g, rel=1e-14)
    assert numbers.M == numbers.M0 + numbers.Mf


def test_mf_closed_forms(unit_params, shear_pair):
    forcing = ForcingSchedule.constant(shear_pair)
    sup_form = compute_data_numbers(shear_pair, forcing, 0.0, math.inf, 2.0, schedule=ConstantSchedule(0.0))
    assert sup_form.Mf == approx(sobolev_l1_norm(shear_pair, 0.0), rel=1e-14)
    finite = compute_data_numbers(shear_pair, forcing, 0.0, 2, 4.0, schedule=ConstantSchedule(0.0))
    assert finite.Mf == approx(2.0 * sobolev_l1_norm(shear_pair, 0.0), rel=1e-14)


def test_mf_sqrt_schedule_quadrature(shear_pair):
    forcing = ForcingSchedule.constant(shear_pair)
    numbers = compute_data_numbers(shear_pair, forcing, 0.0, 2, 1.0)
    # int_0^1 (2 e^sqrt(s))^2 ds = 4 int_0^1 e^(2 sqrt(s)) ds = 4 (e^2 + 1) / 2
    assert numbers.Mf == approx(math.sqrt(2 * (math.e ** 2 + 1)), rel=1e-10)


def test_mf_sampled_forcing(shear_pair):
    forcing = ForcingSchedule.sampled([0.0, 1.0], [shear_pair, shear_pair])
    numbers = compute_data_numbers(shear_pair, forcing, 0.0, math.inf, 1.0, schedule=ConstantSchedule(0.0))
    assert numbers.Mf == approx(2.0, rel=1e-14)
    with raises(ArgumentError):
        compute_data_numbers(shear_pair, forcing, 0.0, 2, 2.0)



def test_mf_squared_norm_overflow(shear_pair):
    # the norm e^500 is finite, its square is not
    constant = ForcingSchedule.constant(shear_pair)
    with raises(SaturationError) as error:
        compute_data_numbers(shear_pair, constant, 0.0, 2, 250000.0)
    assert "Tf=250000.0" in str(error.value)
    assert error.value.shell == approx(float(np.max(shear_pair.lattice.norms)))
    sampled = ForcingSchedule.sampled([0.0, 250000.0], [shear_pair, shear_pair])
    with raises(SaturationError):
        compute_data_numbers(shear_pair, sampled, 0.0, 2, 250000.0)
    assert compute_data_numbers(shear_pair, constant, 0.0, math.inf, 250000.0).Mf > 1e200


def test_data_numbers_invalid(random_2d):
    with raises(ArgumentError):
        compute_data_numbers(random_2d, None, 0.0, 1, 1.0)
    with raises(ArgumentError):
        compute_data_numbers(random_2d, None, 0.0, 2, 0.0)


def test_lattice_point_count():
    assert lattice_point_count(2, 1) == 5
    assert lattice_point_count(2, math.sqrt(2)) == 9
    assert lattice_point_count(3, 1) == 7


def test_mf_grashof_constants():
    lower, upper = mf_grashof_constants(2, 1.0, 0.0, 0.0, 1.0)
    assert lower == approx((2 * math.pi) ** -2 / math.sqrt(5))
    assert upper == approx((2 * math.pi) ** 2)
    with raises(ArgumentError):
        mf_grashof_constants(2, 0.5, 0.0, 0.0, 1.0)


def test_relabeling_invariance(unit_params):
    stored = SpectralField.from_modes(unit_params, 3, {(1, 2): (2.0, -1.0)})
    implicit = SpectralField.from_modes(unit_params, 3, {(-1, -2): (2.0, -1.0)})
    first = compute_data_numbers(stored, None, 0.5, 2, 1.0)
    second = compute_data_numbers(implicit, None, 0.5, 2, 1.0)
    assert first == second
    assert np.allclose(stored.moduli(), implicit.moduli())
