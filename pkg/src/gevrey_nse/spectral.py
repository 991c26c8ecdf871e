"""
Truncated Fourier representation of periodic, mean-zero, divergence-free vector fields
and the core spectral operators : Leray projection, bilinear term, heat propagator
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
from functools import lru_cache

import numpy as np
from numba import njit
from scipy import fft

from gevrey_nse.code_utilities import log, get_thread_count
from gevrey_nse.errors import ArgumentError, ConfigurationError, DomainError

_LOGGER = logging.getLogger(__name__)

# names of supported amplitude profiles for random fields
PROFILE_FLAT = "flat"
PROFILE_GAUSSIAN_DECAY = "gaussian-decay"
PROFILE_POWER_LAW = "power-law"
AMPLITUDE_PROFILES = (PROFILE_FLAT, PROFILE_GAUSSIAN_DECAY, PROFILE_POWER_LAW)

DIVERGENCE_TOLERANCE = 1e-13


@dataclass(frozen=True)
class PhysicalParams:
    """
    Physical parameters of a run.

    :param n: spatial dimension, 2 or 3
    :param L: side length of the periodic box
    :param nu: kinematic viscosity
    """
    n: int
    L: float
    nu: float
    kappa0: float = field(init=False)

    def __post_init__(self):
        if self.n not in (2, 3):
            raise ConfigurationError(f"dimension={self.n} must be 2 or 3")
        if not (math.isfinite(self.L) and self.L > 0):
            raise ConfigurationError(f"box_length={self.L} must be a positive number")
        if not (math.isfinite(self.nu) and self.nu > 0):
            raise ConfigurationError(f"viscosity={self.nu} must be a positive number")
        object.__setattr__(self, "kappa0", 2 * math.pi / self.L)


@dataclass(frozen=True)
class WaveVector:
    """Integer wave vector k with its cached norms"""
    components: tuple
    norm_squared: int = field(init=False)
    max_norm: int = field(init=False)

    def __post_init__(self):
        components = tuple(int(component) for component in self.components)
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "norm_squared", sum(component * component for component in components))
        object.__setattr__(self, "max_norm", max(abs(component) for component in components))

    @property
    def euclidean_norm(self):
        """
        Euclidean norm |k|.

        :rtype: float
        """
        return math.sqrt(self.norm_squared)


class Lattice:
    """
    Wave vectors of the max-norm box |k|_inf <= K.

    Only vectors whose first nonzero component is positive are stored, their Hermitian
    partners being implicit. Stored vectors come in lexicographic box order.
    """

    def __init__(self, n, K):
        self.n = n
        self.K = K
        self.side = 2 * K + 1
        axes = [np.arange(-K, K + 1)] * n
        grids = np.meshgrid(*axes, indexing="ij")
        self.box_vectors = np.stack([grid.ravel() for grid in grids], axis=1).astype(np.int64)

        nonzero = self.box_vectors != 0
        first_nonzero = np.argmax(nonzero, axis=1)
        leading = self.box_vectors[np.arange(len(self.box_vectors)), first_nonzero]
        self.vectors = self.box_vectors[leading > 0]
        self.vectors.setflags(write=False)

        self.norms_squared = np.sum(self.vectors * self.vectors, axis=1)
        self.norms = np.sqrt(self.norms_squared.astype(np.float64))
        shape = (self.side,) * n
        self.plus_index = np.ravel_multi_index(tuple((self.vectors + K).T), shape)
        self.minus_index = np.ravel_multi_index(tuple((K - self.vectors).T), shape)
        self.descending = np.argsort(-self.norms, kind="stable")

        self._lookup = np.full(len(self.box_vectors), -1, dtype=np.int64)
        self._lookup[self.plus_index] = np.arange(len(self.vectors))

    @property
    def count(self):
        """
        Number of stored wave vectors.

        :rtype: int
        """
        return len(self.vectors)

    def locate(self, k):
        """
        Finds the storage slot of a wave vector.

        :param k: integer wave vector
        :type k: tuple

        :return: (slot, conjugate) where conjugate tells that k is the implicit partner of
                 the stored vector at slot
        :rtype: tuple

        :raises ArgumentError: k is zero, has the wrong dimension or lies outside the box
        """
        vector = np.asarray(k, dtype=np.int64)
        if vector.shape != (self.n,):
            raise ArgumentError(f"wave vector {tuple(k)} is not {self.n}-dimensional")
        if not vector.any():
            raise ArgumentError("the zero mode is not stored: fields are mean-zero")
        if np.max(np.abs(vector)) > self.K:
            raise ArgumentError(f"wave vector {tuple(k)} lies outside |k|_inf <= {self.K}")
        shape = (self.side,) * self.n
        slot = self._lookup[np.ravel_multi_index(tuple(vector + self.K), shape)]
        if slot >= 0:
            return int(slot), False
        return int(self._lookup[np.ravel_multi_index(tuple(self.K - vector), shape)]), True


@lru_cache(maxsize=None)
def get_lattice(n, K):
    """
    Retrieves the shared lattice for a dimension and a truncation radius.

    :param n: dimension
    :type n: int
    :param K: truncation radius
    :type K: int

    :rtype: Lattice
    """
    return Lattice(n, K)


def _check_truncation(K):
    if isinstance(K, bool) or not isinstance(K, (int, np.integer)) or K < 1:
        raise ConfigurationError(f"truncation={K!r} must be an integer >= 1")
    return int(K)


class SpectralField:
    """
    Immutable truncated Fourier coefficient array of a real, mean-zero vector field.

    Coefficients are stored for the half lattice only, shaped (count, n).
    """

    def __init__(self, params, K, coeffs):
        self._params = params
        self._K = _check_truncation(K)
        self._lattice = get_lattice(params.n, self._K)
        coeffs = np.array(coeffs, dtype=np.complex128)
        if coeffs.shape != (self._lattice.count, params.n):
            raise ConfigurationError(
                f"coefficient array shape {coeffs.shape} does not match {(self._lattice.count, params.n)}")
        coeffs.setflags(write=False)
        self._coeffs = coeffs

    @classmethod
    def zeros(cls, params, K):
        """
        Builds the zero field.

        :rtype: SpectralField
        """
        lattice = get_lattice(params.n, _check_truncation(K))
        return cls(params, K, np.zeros((lattice.count, params.n), dtype=np.complex128))

    @classmethod
    def from_modes(cls, params, K, modes):
        """
        Builds a field from explicit modes.

        A mode given on the implicit half of the lattice is stored as the conjugate
        of its partner.

        :param modes: map from integer wave vector tuples to complex n-vectors
        :type modes: dict

        :rtype: SpectralField
        """
        lattice = get_lattice(params.n, _check_truncation(K))
        coeffs = np.zeros((lattice.count, params.n), dtype=np.complex128)
        for k, value in modes.items():
            slot, conjugate = lattice.locate(k)
            value = np.asarray(value, dtype=np.complex128)
            coeffs[slot] = np.conj(value) if conjugate else value
        return cls(params, K, coeffs)

    @classmethod
    def from_dense(cls, params, K, dense):
        """
        Builds a field from a centered dense array shaped (2K+1,)*n + (n,).

        Entries of the implicit half and of the zero mode are ignored.

        :rtype: SpectralField
        """
        lattice = get_lattice(params.n, _check_truncation(K))
        flat = np.asarray(dense, dtype=np.complex128).reshape(-1, params.n)
        return cls(params, K, flat[lattice.plus_index])

    @property
    def params(self):
        """:rtype: PhysicalParams"""
        return self._params

    @property
    def K(self):  # pylint: disable=invalid-name
        """:rtype: int"""
        return self._K

    @property
    def n(self):  # pylint: disable=invalid-name
        """:rtype: int"""
        return self._params.n

    @property
    def coeffs(self):
        """Read-only (count, n) complex array of stored coefficients"""
        return self._coeffs

    @property
    def lattice(self):
        """:rtype: Lattice"""
        return self._lattice

    def with_coeffs(self, coeffs):
        """
        Builds a field sharing params and truncation with this one.

        :rtype: SpectralField
        """
        return SpectralField(self._params, self._K, coeffs)

    def box_coefficients(self):
        """
        Coefficients over the full box, Hermitian partners included, shaped (M, n) in
        lexicographic box order.
        """
        box = np.zeros((len(self._lattice.box_vectors), self.n), dtype=np.complex128)
        box[self._lattice.plus_index] = self._coeffs
        box[self._lattice.minus_index] = np.conj(self._coeffs)
        return box

    def to_dense(self):
        """
        Centered dense coefficient array shaped (2K+1,)*n + (n,)
        """
        return self.box_coefficients().reshape((self._lattice.side,) * self.n + (self.n,))

    def coefficient(self, k):
        """
        Coefficient at any nonzero wave vector of the box.

        :param k: wave vector
        :type k: tuple

        :rtype: numpy.ndarray
        """
        slot, conjugate = self._lattice.locate(k)
        value = self._coeffs[slot]
        return np.conj(value) if conjugate else value.copy()

    def moduli(self):
        """Euclidean norms |u(k)| of stored coefficients"""
        return np.sqrt(np.sum(np.abs(self._coeffs) ** 2, axis=1))

    def max_abs(self):
        """:rtype: float"""
        return float(np.max(self.moduli(), initial=0.0))

    def divergence(self):
        """k . u(k) for every stored k, without conjugation"""
        return np.sum(self._coeffs * self._lattice.vectors, axis=1)

    def is_divergence_free(self, tolerance=DIVERGENCE_TOLERANCE):
        """
        Checks k . u(k) = 0 within tolerance * max |u|.

        :rtype: bool
        """
        return bool(np.all(np.abs(self.divergence()) <= tolerance * self.max_abs()))

    def is_finite(self):
        """:rtype: bool"""
        return bool(np.all(np.isfinite(self._coeffs)))

    def check_compatible(self, other):
        """
        :raises ConfigurationError: other does not share params and truncation
        """
        if not isinstance(other, SpectralField):
            raise ConfigurationError(f"expected a SpectralField, got {type(other).__name__}")
        if other.params != self._params or other.K != self._K:
            raise ConfigurationError(
                f"field mismatch : ({self._params}, K={self._K}) vs ({other.params}, K={other.K})")

    def inner(self, other):
        """
        Real coefficient inner product summed over the full lattice.

        :rtype: float
        """
        self.check_compatible(other)
        return 2.0 * float(np.real(np.sum(self._coeffs * np.conj(other.coeffs))))

    def summary(self):
        """Short description used in logs"""
        return f"SpectralField(n={self.n}, K={self._K}, max|u|={self.max_abs():.3e})"

    def __add__(self, other):
        self.check_compatible(other)
        return self.with_coeffs(self._coeffs + other.coeffs)

    def __sub__(self, other):
        self.check_compatible(other)
        return self.with_coeffs(self._coeffs - other.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, SpectralField):
            return NotImplemented
        return self.with_coeffs(self._coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_coeffs(-self._coeffs)

    def __repr__(self):
        return self.summary()


@log
def leray_project(field_):
    """
    Projects every mode onto the plane orthogonal to its wave vector.

    :param field_: field to project
    :type field_: SpectralField

    :return: the divergence-free part of field_
    :rtype: SpectralField
    """
    vectors = field_.lattice.vectors
    dots = np.sum(field_.coeffs * vectors, axis=1) / field_.lattice.norms_squared
    return field_.with_coeffs(field_.coeffs - dots[:, None] * vectors)


@njit(cache=True)
def _direct_convolution(targets, box_vectors, box_u, box_v, K, side):  # pragma: no cover
    count = targets.shape[0]
    n = box_vectors.shape[1]
    size = box_vectors.shape[0]
    out = np.zeros((count, n), dtype=np.complex128)
    for slot in range(count):
        k = box_vectors[targets[slot]]
        for source in range(size):
            ell = box_vectors[source]
            index = 0
            inside = True
            for axis in range(n):
                component = k[axis] - ell[axis]
                if component < -K or component > K:
                    inside = False
                    break
                index = index * side + component + K
            if not inside:
                continue
            weight = 0j
            for axis in range(n):
                weight += k[axis] * box_u[source, axis]
            if weight == 0:
                continue
            for axis in range(n):
                out[slot, axis] += weight * box_v[index, axis]
    return out


def _finish_bilinear(u, raw):
    # derivative factor then projection
    return leray_project(u.with_coeffs(1j * u.params.kappa0 * raw))


@log
def bilinear_direct(u, v):
    """
    Evaluates B[u, v] by exact double loop convolution over the truncated lattice.

    B[u, v](k) = i kappa0 P( sum_l (k . u(l)) v(k - l) ), the output being truncated to
    the box of u and v.

    :type u: SpectralField
    :type v: SpectralField

    :rtype: SpectralField

    :raises ConfigurationError: u and v do not share params and truncation
    """
    u.check_compatible(v)
    lattice = u.lattice
    raw = _direct_convolution(lattice.plus_index, lattice.box_vectors,
                              u.box_coefficients(), v.box_coefficients(),
                              u.K, lattice.side)
    return _finish_bilinear(u, raw)


def padded_grid_size(K):
    """
    Smallest FFT friendly grid size removing aliasing of quadratic products.

    :rtype: int
    """
    return fft.next_fast_len(3 * K + 1)


def _to_physical(field_, size, workers):
    n = field_.n
    grid = np.zeros((size,) * n + (n,), dtype=np.complex128)
    positions = tuple((field_.lattice.box_vectors % size).T)
    grid[positions] = field_.box_coefficients()
    return fft.ifftn(grid, axes=tuple(range(n)), norm="forward", workers=workers).real


@log
def bilinear_fft(u, v):
    """
    Evaluates B[u, v] through zero padded transforms.

    The padded grid holds at least 3K+1 points per dimension so the truncated quadratic
    product is exact and matches :func:`bilinear_direct` to rounding.

    :type u: SpectralField
    :type v: SpectralField

    :rtype: SpectralField

    :raises ConfigurationError: u and v do not share params and truncation
    """
    u.check_compatible(v)
    n = u.n
    size = padded_grid_size(u.K)
    workers = get_thread_count()
    u_physical = _to_physical(u, size, workers)
    v_physical = _to_physical(v, size, workers)
    products = u_physical[..., :, None] * v_physical[..., None, :]
    spectrum = fft.fftn(products, axes=tuple(range(n)), norm="forward", workers=workers)
    vectors = u.lattice.vectors
    convolutions = spectrum[tuple((vectors % size).T)]
    raw = np.einsum("cj,cji->ci", vectors, convolutions)
    return _finish_bilinear(u, raw)


@log
def heat_propagate(field_, t, nu_scale=1.0):
    """
    Applies the heat semigroup exp(-nu_scale nu t A).

    :param field_: field to propagate
    :type field_: SpectralField
    :param t: elapsed time
    :type t: float
    :param nu_scale: viscosity multiplier
    :type nu_scale: float

    :rtype: SpectralField

    :raises ArgumentError: t < 0 or nu_scale <= 0
    """
    if t < 0:
        raise ArgumentError(f"t={t} must be >= 0")
    if nu_scale <= 0:
        raise ArgumentError(f"nu_scale={nu_scale} must be > 0")
    params = field_.params
    rates = nu_scale * params.nu * params.kappa0 ** 2 * field_.lattice.norms_squared
    return field_.with_coeffs(field_.coeffs * np.exp(-rates * t)[:, None])


def band_mask(field_, low, high, include_high=True):
    """
    Boolean mask of stored modes with low <= |k| <= high (or < high).
    """
    norms = field_.lattice.norms
    upper = norms <= high if include_high else norms < high
    return (norms >= low) & upper


def restrict_band(field_, low, high, include_high=True):
    """
    Keeps the modes with low <= |k| <= high (or < high), in lattice units.

    :rtype: SpectralField
    """
    mask = band_mask(field_, low, high, include_high)
    return field_.with_coeffs(field_.coeffs * mask[:, None])


def support_radius(field_):
    """
    Largest |k| carrying a nonzero coefficient, 0 for the zero field.

    :rtype: float
    """
    populated = field_.moduli() > 0
    return float(np.max(field_.lattice.norms[populated], initial=0.0))


@log
def random_field(params, K, band, seed, amplitude_profile=PROFILE_FLAT, decay=0.0, amplitude=1.0):
    """
    Draws a deterministic, divergence-free, band-limited random field.

    Mode directions are projected complex normal draws, normalized to unit modulus then
    scaled by the amplitude profile :

    - flat : constant modulus
    - gaussian-decay : modulus exp(-decay kappa0 |k|)
    - power-law : modulus |k|^-decay

    :param band: (low, high) bounds of |k| in lattice units, high <= K
    :type band: tuple
    :param seed: random generator seed
    :type seed: int

    :rtype: SpectralField

    :raises ArgumentError: invalid band or profile, or no lattice point in band
    """
    lattice = get_lattice(params.n, _check_truncation(K))
    low, high = float(band[0]), float(band[1])
    if low > high or high > K or high <= 0:
        raise ArgumentError(f"band [{low}, {high}] must satisfy low <= high <= K={K}")
    if amplitude_profile not in AMPLITUDE_PROFILES:
        raise ArgumentError(f"unknown amplitude profile {amplitude_profile!r}, expected one of {AMPLITUDE_PROFILES}")

    in_band = (lattice.norms >= low) & (lattice.norms <= high)
    if not np.any(in_band):
        raise ArgumentError(f"band [{low}, {high}] contains no lattice point")

    rng = np.random.default_rng(seed)
    draws = rng.standard_normal((lattice.count, params.n)) + 1j * rng.standard_normal((lattice.count, params.n))
    draws *= in_band[:, None]
    projected = leray_project(SpectralField(params, K, draws))

    moduli = projected.moduli()
    directions = np.divide(projected.coeffs, moduli[:, None],
                           out=np.zeros_like(projected.coeffs), where=moduli[:, None] > 0)
    if amplitude_profile == PROFILE_GAUSSIAN_DECAY:
        envelope = np.exp(-decay * params.kappa0 * lattice.norms)
    elif amplitude_profile == PROFILE_POWER_LAW:
        envelope = lattice.norms ** -decay
    else:
        envelope = np.ones(lattice.count)
    return SpectralField(params, K, amplitude * envelope[:, None] * directions)


@log
def taylor_green(params, K, amplitude=1.0):
    """
    Builds the 2D Taylor-Green vortex (sin(k0 x) cos(k0 y), -cos(k0 x) sin(k0 y)).

    Its nonlinear term is a pure gradient so it decays as exp(-2 nu kappa0^2 t).

    :rtype: SpectralField

    :raises DomainError: the dimension is not 2
    """
    if params.n != 2:
        raise DomainError(f"Taylor-Green vortex is two dimensional, got n={params.n}")
    quarter = amplitude / 4
    return SpectralField.from_modes(params, K, {
        (1, 1): (-1j * quarter, 1j * quarter),
        (1, -1): (-1j * quarter, -1j * quarter),
    })
