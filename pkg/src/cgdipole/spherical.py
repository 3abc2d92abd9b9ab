"""Closed-form spherical-path transition elements for SGTF bound states.

The bound state is translated with the solid-harmonic addition theorem (or
its generalization for nonzero radial power index), the plane-wave-type
expansion resums into a confluent hypergeometric function, and the angular
integrals collapse into Gaunt chains.  Everything here is a finite sum.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .basis import ComplexGaussianBasis
from .errors import ConfigurationError
from .special import (
    gaunt,
    harmonic_polynomial,
    kummer_1f1,
    log_double_factorial,
    solid_harmonic,
    spherical_harmonic_unit,
)
from .states import (
    ContinuumSpec,
    SphericalGaussianState,
    TransitionResult,
    config_digest,
)

_PI = math.pi


def g_element(
    l: int,
    lp: int,
    lam: int,
    basis: ComplexGaussianBasis,
    k_index: int,
    beta: float,
    R2: float,
) -> complex:
    """Radial element: sum over basis Gaussians of the resummed integral.

    Returns sum_s c_s (alpha_s + beta)^(-p) 1F1(p, lam + 3/2;
    beta^2 R2 / (alpha_s + beta)) with p = (l + lp + lam + 4) / 2.
    Principal-branch complex powers are safe since Re(alpha_s + beta) > 0.
    """
    p = 0.5 * (l + lp + lam + 4)
    b = lam + 1.5
    coeffs = basis.coefficients[l, k_index]
    alphas = basis.exponents[l]
    terms = []
    for c_s, a_s in zip(coeffs, alphas):
        gamma = a_s + beta
        value = c_s * cmath.exp(-p * cmath.log(gamma))
        if R2 != 0.0:
            value *= kummer_1f1(p, b, beta * beta * R2 / gamma)
        terms.append(value)
    return complex(
        math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms)
    )


def _lam_range(l: int, d: int):
    start = abs(l - d)
    if (l + start + d) % 2:
        start += 1
    return range(start, l + d + 1, 2)


def j_lm_n0(
    l: int,
    m: int,
    state: SphericalGaussianState,
    basis: ComplexGaussianBasis,
    k_index: int,
) -> complex:
    """Transition integral J_lm for a zero radial-power SGTF."""
    if state.n != 0:
        raise ConfigurationError("j_lm_n0 requires a state with n = 0")
    li, mi, beta = state.l, state.m, state.beta
    R = state.center_array
    R2 = float(R @ R)

    sign_m = -1.0 if m % 2 else 1.0
    pref = 4.0 * _PI**2 * math.sqrt(_PI) * sign_m * math.exp(-beta * R2)
    log_dfac_li = log_double_factorial(2 * li + 1)
    g_cache: dict[tuple[int, int], complex] = {}
    terms: list[complex] = []

    for lp in range(li + 1):
        log_w = log_dfac_li - log_double_factorial(2 * lp + 1) \
            - log_double_factorial(2 * (li - lp) + 1)
        w_lp = math.exp(log_w)
        for mp in range(max(-lp, mi - li + lp), min(lp, mi + li - lp) + 1):
            g1 = gaunt(li, mi, lp, mp, li - lp, mi - mp)
            if g1 == 0.0:
                continue
            y_shift = solid_harmonic(li - lp, mi - mp, -R)
            if y_shift == 0.0:
                continue
            sign_mp = -1.0 if mp % 2 else 1.0
            outer = w_lp * sign_mp * g1 * y_shift
            for d in range(abs(lp - 1), lp + 2):
                if (lp + 1 + d) % 2:
                    continue
                g2 = gaunt(lp, mp, 1, 0, d, mp)
                if g2 == 0.0:
                    continue
                for lam in _lam_range(l, d):
                    if abs(m - mp) > lam:
                        continue
                    g3 = gaunt(l, m, lam, m - mp, d, mp)
                    if g3 == 0.0:
                        continue
                    y_lam = solid_harmonic(lam, mp - m, beta * R)
                    if y_lam == 0.0:
                        continue
                    ratio = math.exp(
                        math.lgamma(0.5 * (l + lp + lam + 4))
                        - math.lgamma(lam + 1.5)
                    )
                    key = (lp, lam)
                    g_rad = g_cache.get(key)
                    if g_rad is None:
                        g_rad = g_element(l, lp, lam, basis, k_index, beta, R2)
                        g_cache[key] = g_rad
                    terms.append(outer * g2 * g3 * ratio * g_rad * y_lam)

    total = complex(
        math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms)
    )
    return pref * total


def j_lm_general(
    l: int,
    m: int,
    state: SphericalGaussianState,
    basis: ComplexGaussianBasis,
    k_index: int,
) -> complex:
    """Transition integral J_lm for a general SGTF (radial power n >= 0).

    Uses the addition theorem of the general harmonic polynomial; the
    channel of the radial element is shifted to l1 + 2 n1.
    """
    ni, li, mi, beta = state.n, state.l, state.m, state.beta
    R = state.center_array
    R2 = float(R @ R)

    sign_m = -1.0 if m % 2 else 1.0
    pref = 4.0 * _PI**2 * math.sqrt(_PI) * sign_m * math.exp(-beta * R2)
    log_top = log_double_factorial(2 * ni) + log_double_factorial(
        2 * (ni + li) + 1
    )
    g_cache: dict[tuple[int, int], complex] = {}
    terms: list[complex] = []

    for l1 in range(li + 2 * ni + 1):
        for l2 in range(abs(li - l1), min(l1 + li, li + 2 * ni - l1) + 1):
            if (l1 + l2 + li) % 2:
                continue
            delta = (l1 + l2 - li) // 2
            for n1 in range(ni - delta + 1):
                n2 = ni - n1 - delta
                if n2 < 0:
                    continue
                log_w = log_top - (
                    log_double_factorial(2 * n1)
                    + log_double_factorial(2 * n2)
                    + log_double_factorial(2 * (n1 + l1) + 1)
                    + log_double_factorial(2 * (n2 + l2) + 1)
                )
                w = math.exp(log_w)
                lp_eff = l1 + 2 * n1
                for m1 in range(max(-l1, mi - l2), min(l1, mi + l2) + 1):
                    m2 = mi - m1
                    g1 = gaunt(li, mi, l1, m1, l2, m2)
                    if g1 == 0.0:
                        continue
                    y_shift = harmonic_polynomial(n2, l2, m2, -R)
                    if y_shift == 0.0:
                        continue
                    sign_m1 = -1.0 if m1 % 2 else 1.0
                    outer = w * sign_m1 * g1 * y_shift
                    for d in range(abs(l1 - 1), l1 + 2):
                        if (l1 + 1 + d) % 2:
                            continue
                        g2 = gaunt(l1, m1, 1, 0, d, m1)
                        if g2 == 0.0:
                            continue
                        for lam in _lam_range(l, d):
                            if abs(m - m1) > lam:
                                continue
                            g3 = gaunt(l, m, lam, m - m1, d, m1)
                            if g3 == 0.0:
                                continue
                            y_lam = solid_harmonic(lam, m1 - m, beta * R)
                            if y_lam == 0.0:
                                continue
                            ratio = math.exp(
                                math.lgamma(0.5 * (l + lp_eff + lam + 4))
                                - math.lgamma(lam + 1.5)
                            )
                            key = (lp_eff, lam)
                            g_rad = g_cache.get(key)
                            if g_rad is None:
                                g_rad = g_element(
                                    l, lp_eff, lam, basis, k_index, beta, R2
                                )
                                g_cache[key] = g_rad
                            terms.append(outer * g2 * g3 * ratio * g_rad * y_lam)

    total = complex(
        math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms)
    )
    return pref * total


def _check_energy(basis: ComplexGaussianBasis, continuum: ContinuumSpec,
                  k_index: int) -> None:
    if not 0 <= k_index < len(basis.energies):
        raise ConfigurationError(f"k_index={k_index} outside the basis grid")
    if abs(basis.energies[k_index] - continuum.k_e) > 1e-9:
        raise ConfigurationError(
            f"continuum k_e={continuum.k_e} does not match basis energy "
            f"{basis.energies[k_index]} at index {k_index}"
        )
    if continuum.l_max > basis.l_max:
        raise ConfigurationError(
            f"continuum l_max={continuum.l_max} exceeds basis l_max={basis.l_max}"
        )


def amplitude_spherical(
    state: SphericalGaussianState,
    continuum: ContinuumSpec,
    basis: ComplexGaussianBasis,
    k_index: int,
) -> TransitionResult:
    """Length-gauge transition amplitude, spherical closed form.

    T = (2 sqrt(2))/(k_e sqrt(3)) sum_{l<=l_max, m} (-i)^l e^{i sigma_l}
        Y_l^m(khat) J_lm.
    """
    _check_energy(basis, continuum, k_index)
    pref = 2.0 * math.sqrt(2.0) / (continuum.k_e * math.sqrt(3.0))
    khat = continuum.direction_array
    partials: dict[tuple[int, int], complex] = {}
    for l in range(continuum.l_max + 1):
        phase = (-1j) ** l * cmath.exp(1j * continuum.sigmas[l])
        for m in range(-l, l + 1):
            y_k = spherical_harmonic_unit(l, m, khat)
            if y_k == 0.0:
                partials[(l, m)] = 0.0 + 0.0j
                continue
            j_val = j_lm_general(l, m, state, basis, k_index)
            partials[(l, m)] = pref * phase * y_k * j_val
    amplitude = complex(
        math.fsum(v.real for v in partials.values()),
        math.fsum(v.imag for v in partials.values()),
    )
    return TransitionResult(
        amplitude=amplitude,
        partial_terms=partials,
        config_digest=config_digest(state, continuum, basis),
    )
