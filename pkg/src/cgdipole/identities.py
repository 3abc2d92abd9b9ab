"""Executable invariant suites for every module.

Each check returns its measured residual next to the threshold it must
stay under, so reports carry magnitudes rather than bare booleans.  The
synthetic complex-Gaussian basis used by the engine checks is fixed and
tiny; these are formula properties, independent of fit quality.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import spherical_jn

from . import basis as basis_mod
from .basis import ComplexGaussianBasis, RadialGrid, fit_basis
from .cartesian import (
    amplitude_cartesian,
    axis_integral,
    cartesian_harmonic_coeffs,
    gaussian_moment,
    gaussian_product,
    i_lm,
)
from .coulomb import coulomb_wave_values
from .errors import ConfigurationError
from .oracle import amplitude_monocentric, amplitude_numeric, QuadratureSettings
from .special import (
    double_factorial,
    gaunt,
    harmonic_polynomial,
    kummer_1f1,
    solid_harmonic,
    solid_harmonic_series,
    spherical_harmonic,
)
from .spherical import amplitude_spherical, j_lm_general, j_lm_n0
from .states import CartesianGaussianState, ContinuumSpec, SphericalGaussianState

SQRT4PI = math.sqrt(4.0 * math.pi)


@dataclass
class IdentityResult:
    name: str
    residual: float
    threshold: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.residual <= self.threshold


def _demo_basis(l_max: int = 5) -> ComplexGaussianBasis:
    """Small fixed basis exercising complex exponents on every channel."""
    rng = np.random.default_rng(20240917)
    n = 4
    exps = (
        rng.uniform(0.2, 2.5, size=(l_max + 1, n))
        + 1j * rng.uniform(-1.5, 1.5, size=(l_max + 1, n))
    )
    coefs = rng.normal(0, 1, size=(l_max + 1, 1, n)) + 1j * rng.normal(
        0, 1, size=(l_max + 1, 1, n)
    )
    return ComplexGaussianBasis(
        r_max=25.0,
        energies=np.array([1.0]),
        exponents=exps,
        coefficients=coefs,
        residuals=np.zeros((l_max + 1, 1)),
        seed=0,
    )


def _random_unit(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


# ----------------------------------------------------------------------
# special_fns
# ----------------------------------------------------------------------

def check_gaunt_selection_rules(rng) -> IdentityResult:
    """Exhaustive scan l <= 6: violated selection rules give exactly 0."""
    worst = 0.0
    lmax = 6
    for l1 in range(lmax + 1):
        for l2 in range(lmax + 1):
            for L in range(lmax + 1):
                for m1 in range(-l1, l1 + 1):
                    for M in range(-L, L + 1):
                        m2 = M + m1
                        if abs(m2) <= l2:
                            if (
                                (l1 + L + l2) % 2 == 0
                                and abs(l1 - L) <= l2 <= l1 + L
                            ):
                                continue
                            worst = max(worst, abs(gaunt(l2, m2, L, M, l1, m1)))
                        if abs(m2 + 1) <= l2:
                            worst = max(
                                worst, abs(gaunt(l2, m2 + 1, L, M, l1, m1))
                            )
    return IdentityResult("gaunt_selection_rules", worst, 0.0)


def check_gaunt_symmetry(rng) -> IdentityResult:
    """swap (l1 m1) <-> (l2 m2) combined with M -> -M and its sign."""
    worst = 0.0
    for l1 in range(5):
        for l2 in range(5):
            for L in range(5):
                for m1 in range(-l1, l1 + 1):
                    for M in range(-L, L + 1):
                        m2 = M + m1
                        if abs(m2) > l2:
                            continue
                        a = gaunt(l2, m2, L, M, l1, m1)
                        sign = -1.0 if M % 2 else 1.0
                        b = sign * gaunt(l1, m1, L, -M, l2, m2)
                        worst = max(worst, abs(a - b))
    return IdentityResult("gaunt_symmetry", worst, 1e-13)


def check_gaunt_vs_quadrature(rng) -> IdentityResult:
    """Gaunt against brute-force 2D angular quadrature of the triple
    product (Gauss-Legendre in cos theta, trapezoid in phi)."""
    nodes, weights = np.polynomial.legendre.leggauss(48)
    theta = np.arccos(nodes)
    n_phi = 64
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    dphi = 2.0 * math.pi / n_phi
    worst = 0.0
    for _ in range(40):
        l1, l2, L = rng.integers(0, 6, size=3)
        m1 = int(rng.integers(-l1, l1 + 1))
        M = int(rng.integers(-L, L + 1))
        m2 = M + m1
        if abs(m2) > l2:
            continue
        grid = np.zeros((len(theta), n_phi), dtype=complex)
        for i, t in enumerate(theta):
            for j, p in enumerate(phi):
                grid[i, j] = (
                    spherical_harmonic(int(l2), m2, t, p).conjugate()
                    * spherical_harmonic(int(L), M, t, p)
                    * spherical_harmonic(int(l1), m1, t, p)
                )
        approx = dphi * float(np.real(weights @ grid.sum(axis=1)))
        worst = max(worst, abs(approx - gaunt(int(l2), m2, int(L), M, int(l1), m1)))
    return IdentityResult("gaunt_vs_angular_quadrature", worst, 1e-10)


def check_solid_harmonic_homogeneity(rng) -> IdentityResult:
    worst = 0.0
    for _ in range(200):
        l = int(rng.integers(0, 7))
        m = int(rng.integers(-l, l + 1))
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        g = complex(rng.normal(), rng.normal())
        lhs = solid_harmonic_series(l, m, g * v)
        rhs = g**l * solid_harmonic_series(l, m, v)
        scale = abs(g) ** l * max(1.0, abs(solid_harmonic_series(l, m, v)))
        worst = max(worst, abs(lhs - rhs) / scale)
    return IdentityResult("solid_harmonic_homogeneity", worst, 1e-12)


def check_solid_harmonic_real_restriction(rng) -> IdentityResult:
    worst = 0.0
    for _ in range(200):
        l = int(rng.integers(0, 7))
        m = int(rng.integers(-l, l + 1))
        v = rng.normal(size=3) * rng.uniform(0.1, 3.0)
        r = float(np.linalg.norm(v))
        theta = math.atan2(math.hypot(v[0], v[1]), v[2])
        phi = math.atan2(v[1], v[0])
        ref = r**l * spherical_harmonic(l, m, theta, phi)
        val = solid_harmonic_series(l, m, v.astype(complex))
        worst = max(worst, abs(val - ref) / max(1.0, abs(ref)))
    return IdentityResult("solid_harmonic_real_restriction", worst, 1e-13)


def check_1f1_series(rng) -> IdentityResult:
    """1F1 against the pre-resummation k-sum with Gamma-ratio coefficients."""
    worst = 0.0
    for _ in range(100):
        a = 0.5 * int(rng.integers(1, 20))
        b = 0.5 * int(rng.integers(1, 12))
        if float(b).is_integer() and b <= 0:
            continue
        z = complex(rng.uniform(-8, 8), rng.uniform(-8, 8))
        direct = 0.0 + 0.0j
        log_ga = math.lgamma(a)
        log_gb = math.lgamma(b)
        for k in range(400):
            log_c = (
                math.lgamma(a + k) - log_ga
                + log_gb - math.lgamma(b + k)
                - math.lgamma(k + 1)
            )
            term = cmath.exp(log_c) * z**k
            direct += term
            if k > 3 and abs(term) < 1e-18 * abs(direct):
                break
        val = kummer_1f1(a, b, z)
        worst = max(worst, abs(val - direct) / max(1.0, abs(direct)))
    return IdentityResult("kummer_1f1_vs_k_series", worst, 1e-12)


def check_coulomb_bessel_reduction(rng) -> IdentityResult:
    """F_l(0, rho) = rho j_l(rho)."""
    rho = np.linspace(0.1, 50.0, 400)
    worst = 0.0
    for l in range(9):
        ref = rho * spherical_jn(l, rho)
        val = coulomb_wave_values(l, 0.0, rho)
        worst = max(worst, float(np.max(np.abs(val - ref))))
    return IdentityResult("coulomb_eta0_reduction", worst, 1e-10)


# ----------------------------------------------------------------------
# basis_fit
# ----------------------------------------------------------------------

def _synthetic_grid(l: int, alphas, coeffs, r_max=8.0, n=500) -> RadialGrid:
    r = (np.arange(n) + 1.0) * (r_max / n)
    vals = np.zeros((l + 1, 1, n), dtype=complex)
    model = sum(
        c * np.exp(-a * r * r) for c, a in zip(coeffs, alphas)
    )
    vals[l, 0] = r ** (l + 1) * model
    for ll in range(l):
        vals[ll, 0] = r ** (ll + 1) * np.exp(-r * r)
    return RadialGrid(r_max=r_max, points=r, values=vals,
                      energies=np.array([1.0]))


def check_fit_model_class_exactness(rng) -> IdentityResult:
    grid = _synthetic_grid(1, [1.0, 2.0 + 5.0j], [1.0, 1.0])
    fitted = fit_basis(grid, 2, seed=11)
    return IdentityResult(
        "fit_model_class_exactness", float(fitted.residuals.max()), 1e-10
    )


def check_fit_constraint_and_determinism(rng) -> IdentityResult:
    grid = _synthetic_grid(0, [0.7 + 1.1j], [1.0 - 0.5j])
    a = fit_basis(grid, 3, seed=5)
    b = fit_basis(grid, 3, seed=5)
    if np.any(a.exponents.real <= 0.0):
        return IdentityResult("fit_determinism_and_constraint", 1.0, 0.0,
                              detail="Re(alpha) <= 0 in output")
    identical = (
        np.array_equal(a.exponents, b.exponents)
        and np.array_equal(a.coefficients, b.coefficients)
        and np.array_equal(a.residuals, b.residuals)
    )
    return IdentityResult(
        "fit_determinism_and_constraint", 0.0 if identical else 1.0, 0.0
    )


def check_fit_monotonicity(rng) -> IdentityResult:
    """Best residual with N+5 Gaussians is no worse than with N."""
    r = (np.arange(500) + 1.0) * (12.0 / 500)
    vals = np.zeros((1, 1, 500), dtype=complex)
    vals[0, 0] = np.sin(1.3 * r) * np.exp(-0.01 * r * r)
    grid = RadialGrid(r_max=12.0, points=r, values=vals,
                      energies=np.array([1.3]))
    res10 = fit_basis(grid, 10, seed=3).residuals.max()
    res15 = fit_basis(grid, 15, seed=3).residuals.max()
    return IdentityResult(
        "fit_residual_monotonicity",
        float(res15 - res10),
        1e-12,
        detail=f"res(10)={res10:.3e} res(15)={res15:.3e}",
    )


# ----------------------------------------------------------------------
# sgtf_engine
# ----------------------------------------------------------------------

def check_addition_theorem(rng) -> IdentityResult:
    """Solid-harmonic translation: direct value vs the double sum."""
    worst = 0.0
    for _ in range(100):
        li = int(rng.integers(0, 5))
        mi = int(rng.integers(-li, li + 1))
        r = rng.normal(size=3) * rng.uniform(0.3, 2.0)
        R = rng.normal(size=3) * rng.uniform(0.3, 2.0)
        lhs = solid_harmonic(li, mi, r - R)
        rhs = 0.0 + 0.0j
        for lp in range(li + 1):
            for mp in range(max(-lp, mi - li + lp), min(lp, mi + li - lp) + 1):
                g = (
                    double_factorial(2 * li + 1)
                    / (double_factorial(2 * lp + 1)
                       * double_factorial(2 * (li - lp) + 1))
                    * gaunt(li, mi, lp, mp, li - lp, mi - mp)
                )
                rhs += (
                    4.0 * math.pi * g
                    * solid_harmonic(lp, mp, r)
                    * solid_harmonic(li - lp, mi - mp, -R)
                )
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return IdentityResult("solid_harmonic_addition_theorem", worst, 1e-11)


def check_general_addition_theorem(rng) -> IdentityResult:
    """Harmonic-polynomial translation for radial powers up to 2."""
    worst = 0.0
    for _ in range(100):
        ni = int(rng.integers(0, 3))
        li = int(rng.integers(0, 4))
        mi = int(rng.integers(-li, li + 1))
        r = rng.normal(size=3) * rng.uniform(0.3, 1.5)
        R = rng.normal(size=3) * rng.uniform(0.3, 1.5)
        lhs = harmonic_polynomial(ni, li, mi, r - R)
        rhs = 0.0 + 0.0j
        for l1 in range(li + 2 * ni + 1):
            for l2 in range(abs(li - l1), min(l1 + li, li + 2 * ni - l1) + 1):
                if (l1 + l2 + li) % 2:
                    continue
                delta = (l1 + l2 - li) // 2
                for n1 in range(ni - delta + 1):
                    n2 = ni - n1 - delta
                    if n2 < 0:
                        continue
                    w = (
                        double_factorial(2 * ni)
                        * double_factorial(2 * (ni + li) + 1)
                        / (
                            double_factorial(2 * n1)
                            * double_factorial(2 * n2)
                            * double_factorial(2 * (n1 + l1) + 1)
                            * double_factorial(2 * (n2 + l2) + 1)
                        )
                    )
                    for m1 in range(max(-l1, mi - l2), min(l1, mi + l2) + 1):
                        m2 = mi - m1
                        g = gaunt(li, mi, l1, m1, l2, m2)
                        if g == 0.0:
                            continue
                        rhs += (
                            4.0 * math.pi * w * g
                            * harmonic_polynomial(n1, l1, m1, r)
                            * harmonic_polynomial(n2, l2, m2, -R)
                        )
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return IdentityResult("general_addition_theorem", worst, 1e-11)


def check_expansion_formula(rng) -> IdentityResult:
    """Plane-wave-type expansion of exp(2 beta r.R), lambda/k <= 30."""
    worst = 0.0
    for _ in range(60):
        beta = rng.uniform(0.05, 1.0)
        r_vec = _random_unit(rng) * rng.uniform(0.2, 2.0)
        R_vec = _random_unit(rng) * rng.uniform(0.2, 2.0)
        if beta * np.linalg.norm(r_vec) * np.linalg.norm(R_vec) > 5.0:
            continue
        lhs = math.exp(2.0 * beta * float(r_vec @ R_vec))
        r2 = float(r_vec @ r_vec)
        s2 = float(4.0 * beta * beta * (R_vec @ R_vec))
        rhs = 0.0
        for lam in range(31):
            angular = 0.0
            for mu in range(-lam, lam + 1):
                sign = -1.0 if mu % 2 else 1.0
                angular += sign * (
                    solid_harmonic(lam, mu, r_vec)
                    * solid_harmonic(lam, -mu, 2.0 * beta * R_vec)
                ).real
            k_sum = 0.0
            term = 1.0
            for k in range(31):
                if k > 0:
                    term *= (r2 * s2) / (
                        (2.0 * k) * (2.0 * k + 2.0 * lam + 1.0)
                    )
                k_sum += term
            rhs += 4.0 * math.pi * angular * k_sum
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return IdentityResult("plane_wave_type_expansion", worst, 1e-10)


def check_monocentric_reduction(rng) -> IdentityResult:
    basis = _demo_basis()
    cont = ContinuumSpec.coulomb(1.0, 1.0, 4)
    worst = 0.0
    for state in [
        SphericalGaussianState(0, 0, 0, 0.6, (0.0, 0.0, 0.0)),
        SphericalGaussianState(1, 1, 0, 0.4, (0.0, 0.0, 0.0)),
        SphericalGaussianState(0, 2, 1, 0.8, (0.0, 0.0, 0.0)),
    ]:
        full = amplitude_spherical(state, cont, basis, 0).amplitude
        mono = amplitude_monocentric(state, cont, basis, 0).amplitude
        worst = max(worst, abs(full - mono) / max(abs(mono), 1e-300))
    for state in [
        CartesianGaussianState(0, 0, 0, 0.6, (0.0, 0.0, 0.0)),
        CartesianGaussianState(1, 0, 1, 0.5, (0.0, 0.0, 0.0)),
    ]:
        full = amplitude_cartesian(state, cont, basis, 0).amplitude
        mono = amplitude_monocentric(state, cont, basis, 0).amplitude
        worst = max(worst, abs(full - mono) / max(abs(mono), 1e-300))
    return IdentityResult("monocentric_reduction", worst, 1e-12)


def check_origin_continuity(rng) -> IdentityResult:
    basis = _demo_basis()
    cont = ContinuumSpec.coulomb(1.0, 1.0, 4)
    eps = 1e-8
    worst = 0.0
    for make in (
        lambda c: SphericalGaussianState(0, 0, 0, 0.6, c),
        lambda c: CartesianGaussianState(0, 0, 1, 0.5, c),
    ):
        amp = (amplitude_spherical if isinstance(make((0.0, 0.0, 0.0)),
                                                 SphericalGaussianState)
               else amplitude_cartesian)
        at0 = amp(make((0.0, 0.0, 0.0)), cont, basis, 0).amplitude
        near = amp(make((eps, -eps, eps)), cont, basis, 0).amplitude
        worst = max(worst, abs(at0 - near) / max(abs(at0), 1e-300))
    return IdentityResult("amplitude_origin_continuity", worst, 1e-6)


def check_partial_term_consistency(rng) -> IdentityResult:
    basis = _demo_basis()
    cont = ContinuumSpec.coulomb(1.0, 1.0, 5, direction=(0.6, 0.0, 0.8))
    state = SphericalGaussianState(1, 1, -1, 0.5, (0.4, -0.3, 0.9))
    result = amplitude_spherical(state, cont, basis, 0)
    diff = abs(result.amplitude - result.partial_sum())
    return IdentityResult(
        "partial_term_consistency",
        diff / max(abs(result.amplitude), 1e-300),
        1e-14,
    )


def check_pruning_equivalence(rng) -> IdentityResult:
    """J_lm unchanged when selection-rule pruning is replaced by brute sums."""
    basis = _demo_basis()
    worst = 0.0
    for _ in range(12):
        li = int(rng.integers(0, 3))
        mi = int(rng.integers(-li, li + 1))
        l = int(rng.integers(0, 4))
        m = int(rng.integers(-l, l + 1))
        state = SphericalGaussianState(
            0, li, mi, rng.uniform(0.2, 1.0),
            tuple(rng.normal(size=3) * 0.7),
        )
        pruned = j_lm_n0(l, m, state, basis, 0)
        brute = _j_lm_brute(l, m, state, basis, 0)
        worst = max(worst, abs(pruned - brute) / max(1e-300, abs(brute), 1e-10))
    return IdentityResult("gaunt_pruning_equivalence", worst, 1e-12)


def _j_lm_brute(l, m, state, basis, k_index):
    """j_lm_n0 with all selection-rule pruning removed (Gaunt zeros do
    the filtering), extended sum ranges included."""
    from .spherical import g_element

    li, mi, beta = state.l, state.m, state.beta
    R = state.center_array
    R2 = float(R @ R)
    sign_m = -1.0 if m % 2 else 1.0
    pref = (4.0 * math.pi**2 * math.sqrt(math.pi) * sign_m
            * double_factorial(2 * li + 1) * math.exp(-beta * R2))
    total = 0.0 + 0.0j
    for lp in range(li + 1):
        w = 1.0 / (double_factorial(2 * lp + 1)
                   * double_factorial(2 * (li - lp) + 1))
        for mp in range(-lp, lp + 1):
            g1 = gaunt(li, mi, lp, mp, li - lp, mi - mp)
            if g1 == 0.0:
                continue
            y_shift = solid_harmonic(li - lp, mi - mp, -R)
            sign_mp = -1.0 if mp % 2 else 1.0
            for d in range(abs(lp - 1), lp + 2):
                g2 = gaunt(lp, mp, 1, 0, d, mp)
                for lam in range(0, l + d + 3):
                    if abs(m - mp) > lam:
                        continue
                    g3 = gaunt(l, m, lam, m - mp, d, mp)
                    if g1 == 0.0 or g2 == 0.0 or g3 == 0.0:
                        continue
                    ratio = math.exp(
                        math.lgamma(0.5 * (l + lp + lam + 4))
                        - math.lgamma(lam + 1.5)
                    )
                    total += (
                        w * sign_mp * g1 * y_shift * g2 * g3 * ratio
                        * g_element(l, lp, lam, basis, k_index, beta, R2)
                        * solid_harmonic(lam, mp - m, beta * R)
                    )
    return pref * total


# ----------------------------------------------------------------------
# cgtf_engine
# ----------------------------------------------------------------------

def check_product_theorem(rng) -> IdentityResult:
    worst = 0.0
    for _ in range(40):
        alpha = complex(rng.uniform(0.05, 3.0), rng.uniform(-3.0, 3.0))
        beta = rng.uniform(0.05, 2.0)
        R = rng.normal(size=3)
        prod = gaussian_product(alpha, beta, R)
        for _ in range(100):
            r = rng.normal(size=3) * 2.0
            lhs = cmath.exp(-alpha * float(r @ r)) * math.exp(
                -beta * float((r - R) @ (r - R))
            )
            dr = r - np.array(prod.center)
            rhs = prod.prefactor * cmath.exp(-prod.gamma * complex(dr @ dr))
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1.0))
    return IdentityResult("gaussian_product_theorem", worst, 1e-13)


def check_cartesian_harmonic_expansion(rng) -> IdentityResult:
    worst = 0.0
    for _ in range(100):
        l = int(rng.integers(0, 7))
        m = int(rng.integers(-l, l + 1))
        v = rng.normal(size=3) * rng.uniform(0.2, 2.0)
        ref = solid_harmonic(l, m, v).conjugate()
        val = sum(
            w * v[0] ** px * v[1] ** py * v[2] ** pz
            for px, py, pz, w in cartesian_harmonic_coeffs(l, m)
        )
        worst = max(worst, abs(val - ref) / max(1.0, abs(ref)))
    return IdentityResult("cartesian_harmonic_expansion", worst, 1e-12)


def check_contour_shift(rng) -> IdentityResult:
    """Imaginary center shift drops out of the Gaussian axis integrals."""
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(0, 9))
        gamma = complex(rng.uniform(0.1, 5.0), rng.uniform(-5.0, 5.0))
        b = rng.uniform(-3.0, 3.0)

        def integrand_re(x):
            return (cmath.exp(-gamma * (x - 1j * b) ** 2)
                    * (x - 1j * b) ** n).real

        def integrand_im(x):
            return (cmath.exp(-gamma * (x - 1j * b) ** 2)
                    * (x - 1j * b) ** n).imag

        lim = 40.0
        re, _ = quad(integrand_re, -lim, lim, limit=300)
        im, _ = quad(integrand_im, -lim, lim, limit=300)
        direct = complex(re, im)
        moment = gaussian_moment(n, gamma)
        worst = max(worst, abs(direct - moment) / max(1.0, abs(moment)))
    return IdentityResult("contour_shift_lemma", worst, 1e-8)


def check_cross_formulation(rng) -> IdentityResult:
    """SGTF and CGTF closed forms agree per (l, m) partial term.

    Threshold reflects the double-precision interference floor of the
    coefficient sums (see ledger); with the tame demo basis the two paths
    agree far below it.
    """
    basis = _demo_basis()
    cont = ContinuumSpec.coulomb(1.0, 1.0, 5)
    norm_1s = 1.0 / (2.0 * math.sqrt(math.pi))
    norm_pz = math.sqrt(3.0 / (4.0 * math.pi))
    worst = 0.0
    for beta in (0.05, 0.5, 1.0):
        pairs = [
            (SphericalGaussianState(0, 0, 0, beta, (0.0, 0.0, 1.0)),
             CartesianGaussianState(0, 0, 0, beta, (0.0, 0.0, 1.0)), norm_1s),
            (SphericalGaussianState(0, 1, 0, beta, (0.0, 0.0, 1.0)),
             CartesianGaussianState(0, 0, 1, beta, (0.0, 0.0, 1.0)), norm_pz),
        ]
        for sph, cart, factor in pairs:
            ts = amplitude_spherical(sph, cont, basis, 0).partial_terms
            tc = amplitude_cartesian(cart, cont, basis, 0).partial_terms
            scale = max(abs(v) for v in ts.values())
            for key, v in ts.items():
                w = tc[key] * factor
                worst = max(worst, abs(v - w) / max(abs(v), scale * 1e-4))
    return IdentityResult("cross_formulation_equivalence", worst, 1e-10)


def check_bracket_independence(rng) -> IdentityResult:
    """Permuting the axis-bracket product order only reassociates floats."""
    worst = 0.0
    for _ in range(60):
        gamma = complex(rng.uniform(0.2, 3.0), rng.uniform(-2.0, 2.0))
        c = complex(rng.normal(), rng.normal())
        ix = axis_integral(2, 1, 0.7, c, gamma)
        iy = axis_integral(1, 2, -0.4, c * 1j, gamma)
        iz = axis_integral(3, 0, 0.2, c.conjugate(), gamma)
        a = (ix * iy) * iz
        b = ix * (iy * iz)
        cth = (iz * ix) * iy
        ref = max(abs(a), 1e-300)
        worst = max(worst, abs(a - b) / ref, abs(a - cth) / ref)
    return IdentityResult("axis_bracket_independence", worst, 1e-15)


# ----------------------------------------------------------------------
# oracle
# ----------------------------------------------------------------------

def check_oracle_tolerance_halving(rng) -> IdentityResult:
    state = SphericalGaussianState(0, 0, 0, 0.5, (0.0, 0.0, 1.0))
    cont = ContinuumSpec.coulomb(1.0, 1.0, 3)
    loose = amplitude_numeric(
        state, cont, QuadratureSettings(abs_tol=1e-8, rel_tol=1e-7),
        l_max_sum=6,
    )
    tight = amplitude_numeric(
        state, cont, QuadratureSettings(abs_tol=5e-9, rel_tol=3.5e-8),
        l_max_sum=6,
    )
    shift = abs(loose.value - tight.value)
    return IdentityResult(
        "oracle_tolerance_halving",
        shift,
        max(loose.error, 1e-12),
        detail=f"loose err {loose.error:.2e}",
    )


def check_oracle_axial_vs_general(rng) -> IdentityResult:
    """2D-reduced and full-3D quadrature paths agree on symmetric setups."""
    from .oracle import _PartialIntegrator, _coulomb_radial_fn

    cont = ContinuumSpec.coulomb(1.0, 1.0, 3)
    state = SphericalGaussianState(0, 1, 0, 0.5, (0.0, 0.0, 1.0))
    settings = QuadratureSettings(theta_order=48, phi_order=48)
    fn = _coulomb_radial_fn(cont, settings.r_cut, over_r=False)
    fn.prime(2)
    integ = _PartialIntegrator(state, settings, cont.k_e, fn, 1.4)
    axial, err_a = integ._partial_axial(2)
    general, err_g = integ._partial_general(2, 0)
    return IdentityResult(
        "oracle_axial_vs_general",
        abs(axial - general),
        max(err_a + err_g, 1e-10),
    )


ALL_CHECKS = [
    check_gaunt_selection_rules,
    check_gaunt_symmetry,
    check_gaunt_vs_quadrature,
    check_solid_harmonic_homogeneity,
    check_solid_harmonic_real_restriction,
    check_1f1_series,
    check_coulomb_bessel_reduction,
    check_fit_model_class_exactness,
    check_fit_constraint_and_determinism,
    check_fit_monotonicity,
    check_addition_theorem,
    check_general_addition_theorem,
    check_expansion_formula,
    check_monocentric_reduction,
    check_origin_continuity,
    check_partial_term_consistency,
    check_pruning_equivalence,
    check_product_theorem,
    check_cartesian_harmonic_expansion,
    check_contour_shift,
    check_cross_formulation,
    check_bracket_independence,
    check_oracle_tolerance_halving,
    check_oracle_axial_vs_general,
]


def run_identities(seed: int = 1234, only: str | None = None):
    """Run the invariant suites; ``only`` filters check names by substring."""
    results = []
    for fn in ALL_CHECKS:
        name = fn.__name__.removeprefix("check_")
        if only and only not in name:
            continue
        rng = np.random.default_rng(seed)
        results.append(fn(rng))
    if not results:
        raise ConfigurationError(f"no identity checks match {only!r}")
    return results
