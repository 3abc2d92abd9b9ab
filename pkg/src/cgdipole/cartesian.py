"""Closed-form cartesian-path transition elements for CGTF bound states.

The product theorem merges each complex continuum Gaussian with the real
bound Gaussian into one Gaussian on a complex center; a contour-shift
argument removes the imaginary part of that center from the axis
integrals, leaving classical Gaussian moments.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import ComplexGaussianBasis
from .errors import ConfigurationError, DomainError
from .special import spherical_harmonic_unit
from .states import (
    CartesianGaussianState,
    ContinuumSpec,
    TransitionResult,
    config_digest,
)

_UNIT_PHASE = (1.0 + 0.0j, 1j, -1.0 + 0.0j, -1j)


@dataclass(frozen=True)
class GaussianProduct:
    """Merged Gaussian exp(-gamma (r - C)^2) with its scalar prefactor."""

    gamma: complex
    center: tuple[complex, complex, complex]
    prefactor: complex


def gaussian_product(alpha: complex, beta: float, R) -> GaussianProduct:
    """Product theorem for exp(-alpha r^2) exp(-beta (r-R)^2).

    The merged center beta R / (alpha + beta) is complex whenever alpha
    is; it is a mathematical artifact, not a physical position.
    """
    alpha = complex(alpha)
    if alpha.real <= 0.0:
        raise DomainError("gaussian_product needs Re(alpha) > 0")
    if beta <= 0.0:
        raise DomainError("gaussian_product needs beta > 0")
    R = np.asarray(R, dtype=float)
    gamma = alpha + beta
    center = beta / gamma * R
    R2 = float(R @ R)
    prefactor = cmath.exp(-beta * alpha / gamma * R2)
    return GaussianProduct(
        gamma=gamma,
        center=(complex(center[0]), complex(center[1]), complex(center[2])),
        prefactor=prefactor,
    )


def _c2_conj(m: int, p: int) -> complex:
    """Conjugated azimuthal weight of the cartesian-harmonic identity."""
    if m >= 0:
        sign = -1.0 if m % 2 else 1.0
        return sign * _UNIT_PHASE[(-(m - p)) % 4]
    return _UNIT_PHASE[(abs(m) - p) % 4]


def _c1(l: int, ma: int, k: int) -> float:
    value = (
        math.comb(l, k)
        * math.comb(2 * l - 2 * k, l)
        * math.perm(l - 2 * k, ma)
        / 2.0**l
    )
    return -value if k % 2 else value


@lru_cache(maxsize=None)
def cartesian_harmonic_coeffs(l: int, m: int):
    """Monomial expansion of r^l conj(Y_l^m) as ((px, py, pz), weight) pairs."""
    if l < 0 or abs(m) > l:
        raise DomainError(f"invalid angular index (l={l}, m={m})")
    ma = abs(m)
    pref = math.sqrt(
        (2 * l + 1)
        / (4.0 * math.pi)
        * math.factorial(l - ma)
        / math.factorial(l + ma)
    )
    weights: dict[tuple[int, int, int], complex] = {}
    for k in range((l - ma) // 2 + 1):
        c1 = _c1(l, ma, k)
        for h in range(k + 1):
            for j in range(k - h + 1):
                binom_hj = math.comb(k, h) * math.comb(k - h, j)
                for p in range(ma + 1):
                    w = (
                        pref
                        * c1
                        * binom_hj
                        * math.comb(ma, p)
                        * _c2_conj(m, p)
                    )
                    powers = (2 * (k - h - j) + p, 2 * j + ma - p,
                              2 * h + l - 2 * k - ma)
                    weights[powers] = weights.get(powers, 0.0 + 0.0j) + w
    return tuple(
        (px, py, pz, w) for (px, py, pz), w in sorted(weights.items())
        if w != 0.0
    )


def gaussian_moment(n: int, gamma: complex) -> complex:
    """Integral of x^n exp(-gamma x^2) over the real line, principal branch."""
    if n < 0:
        raise DomainError("moment order must be >= 0")
    gamma = complex(gamma)
    if gamma.real <= 0.0:
        raise DomainError("gaussian_moment needs Re(gamma) > 0")
    if n % 2:
        return 0.0 + 0.0j
    half = n // 2
    log_coeff = (
        0.5 * math.log(math.pi)
        + math.lgamma(n + 1)
        - n * math.log(2.0)
        - math.lgamma(half + 1)
    )
    return math.exp(log_coeff) * cmath.exp(-0.5 * (n + 1) * cmath.log(gamma))


def axis_integral(
    power_a: int,
    power_b: int,
    shift_X: float,
    center_c: complex,
    gamma: complex,
) -> complex:
    """One cartesian axis factor: integral of
    exp(-gamma (x - c)^2) x^power_a (x - X)^power_b dx.

    The binomial expansion about the complex center feeds only even-order
    moments; the imaginary part of c never enters the moments themselves
    (contour-shift lemma), only the polynomial factors.
    """
    if power_a < 0 or power_b < 0:
        raise DomainError("axis powers must be >= 0")
    c = complex(center_c)
    cx = c - shift_X
    total = 0.0 + 0.0j
    for i1 in range(power_a + 1):
        w1 = math.comb(power_a, i1) * c ** (power_a - i1)
        for i2 in range(power_b + 1):
            if (i1 + i2) % 2:
                continue
            total += (
                w1
                * math.comb(power_b, i2)
                * cx ** (power_b - i2)
                * gaussian_moment(i1 + i2, gamma)
            )
    return total


def i_lm(
    l: int,
    m: int,
    state: CartesianGaussianState,
    basis: ComplexGaussianBasis,
    k_index: int,
) -> complex:
    """Transition integral I_lm for a CGTF bound state.

    Nested finite sums over the cartesian-harmonic expansion and the basis
    Gaussians; the three bracketed axis factors are independent.
    """
    ma = abs(m)
    if ma > l:
        raise ConfigurationError(f"invalid angular index (l={l}, m={m})")
    beta = state.beta
    R = state.center_array
    X, Y, Z = float(R[0]), float(R[1]), float(R[2])

    pref = math.sqrt(
        (2 * l + 1)
        / (4.0 * math.pi)
        * math.factorial(l - ma)
        / math.factorial(l + ma)
    )
    products = [
        gaussian_product(alpha, beta, R) for alpha in basis.exponents[l]
    ]
    coeffs = basis.coefficients[l, k_index]

    terms: list[complex] = []
    for k in range((l - ma) // 2 + 1):
        c1 = _c1(l, ma, k)
        for h in range(k + 1):
            for j in range(k - h + 1):
                binom_hj = math.comb(k, h) * math.comb(k - h, j)
                for p in range(ma + 1):
                    w = c1 * binom_hj * math.comb(ma, p) * _c2_conj(m, p)
                    ax = 2 * (k - h - j) + p
                    ay = 2 * j + ma - p
                    az = 2 * h + l - 2 * k - ma + 1
                    for c_s, prod in zip(coeffs, products):
                        cx, cy, cz = prod.center
                        ix = axis_integral(ax, state.nx, X, cx, prod.gamma)
                        if ix == 0.0:
                            continue
                        iy = axis_integral(ay, state.ny, Y, cy, prod.gamma)
                        if iy == 0.0:
                            continue
                        iz = axis_integral(az, state.nz, Z, cz, prod.gamma)
                        terms.append(
                            w * c_s * prod.prefactor * ix * iy * iz
                        )
    total = complex(
        math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms)
    )
    return pref * total


def amplitude_cartesian(
    state: CartesianGaussianState,
    continuum: ContinuumSpec,
    basis: ComplexGaussianBasis,
    k_index: int,
) -> TransitionResult:
    """Length-gauge transition amplitude, cartesian closed form.

    T = (1/k_e) sqrt(2/pi) sum_{l<=l_max, m} (-i)^l e^{i sigma_l}
        Y_l^m(khat) I_lm.
    """
    from .spherical import _check_energy

    _check_energy(basis, continuum, k_index)
    pref = math.sqrt(2.0 / math.pi) / continuum.k_e
    khat = continuum.direction_array
    partials: dict[tuple[int, int], complex] = {}
    for l in range(continuum.l_max + 1):
        phase = (-1j) ** l * cmath.exp(1j * continuum.sigmas[l])
        for m in range(-l, l + 1):
            y_k = spherical_harmonic_unit(l, m, khat)
            if y_k == 0.0:
                partials[(l, m)] = 0.0 + 0.0j
                continue
            partials[(l, m)] = pref * phase * y_k * i_lm(l, m, state, basis, k_index)
    amplitude = complex(
        math.fsum(v.real for v in partials.values()),
        math.fsum(v.imag for v in partials.values()),
    )
    return TransitionResult(
        amplitude=amplitude,
        partial_terms=partials,
        config_digest=config_digest(state, continuum, basis),
    )
