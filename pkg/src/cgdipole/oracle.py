"""Reference evaluation of the transition integrals by adaptive quadrature.

The amplitude is assembled per partial wave; each (l, m) term is an
adaptive radial integral (Gauss-Kronrod panels, pre-subdivided at the
asymptotic Coulomb oscillation period) of an angular integral done by
Gauss-Legendre in cos(theta) and, when the configuration is not
azimuthally symmetric, a periodic trapezoid rule in phi.  Exact Coulomb
radial functions are used unless a fitted basis is substituted on purpose
for term-level validation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .basis import ComplexGaussianBasis, evaluate_basis
from .cartesian import gaussian_moment
from .coulomb import coulomb_wave_values
from .errors import ConfigurationError
from .special import (
    coulomb_phase,
    gaunt,
    spherical_harmonic,
    spherical_harmonic_unit,
)
from .states import (
    CartesianGaussianState,
    ContinuumSpec,
    SphericalGaussianState,
    TransitionResult,
    config_digest,
)

SGTF_PREFACTOR = 2.0 * math.sqrt(2.0) / math.sqrt(3.0)   # divided by k_e later
CGTF_PREFACTOR = math.sqrt(2.0 / math.pi)


@dataclass
class QuadratureSettings:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 400
    r_cut: float = 60.0
    theta_order: int = 64
    phi_order: int = 64
    l_hard_cap: int = 48

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise ConfigurationError("tolerances must be positive")


@dataclass
class NumericAmplitude:
    """Quadrature amplitude with an a posteriori error estimate."""

    value: complex
    error: float
    l_used: int
    tail_bound: float
    partial_terms: dict[tuple[int, int], complex]
    converged: bool = True
    config_digest: str = ""


def _is_axial(state) -> bool:
    R = state.center_array
    if R[0] != 0.0 or R[1] != 0.0:
        return False
    if isinstance(state, SphericalGaussianState):
        return state.m == 0
    return state.nx == 0 and state.ny == 0


def _legendre_table(l_top: int, c: np.ndarray) -> np.ndarray:
    """P_l(c) for l = 0..l_top on the quadrature nodes."""
    table = np.empty((l_top + 1, len(c)))
    table[0] = 1.0
    if l_top >= 1:
        table[1] = c
    for l in range(2, l_top + 1):
        table[l] = ((2 * l - 1) * c * table[l - 1] - (l - 1) * table[l - 2]) / l
    return table


def _ybar(l: int, leg_row: np.ndarray) -> np.ndarray:
    return math.sqrt((2 * l + 1) / (4.0 * math.pi)) * leg_row


class _BoundFactor:
    """Angular part of the bound state times the shifted Gaussian."""

    def __init__(self, state):
        self.state = state
        self.R = state.center_array
        self.beta = state.beta
        self.R2 = float(self.R @ self.R)

    def axial_values(self, r: float, c: np.ndarray, s: np.ndarray) -> np.ndarray:
        """phi-independent factor on the cos(theta) nodes (R along z)."""
        beta, Rz = self.beta, self.R[2]
        gauss = np.exp(-beta * (r * r + self.R2 - 2.0 * r * Rz * c))
        state = self.state
        if isinstance(state, SphericalGaussianState):
            vz = r * c - Rz
            v2 = r * r + Rz * Rz - 2.0 * r * Rz * c
            poly = _solid_axial(state.l, vz, v2) * v2**state.n
            return gauss * poly
        # CGTF with nx = ny = 0: the dipole z plus (z - Z)^nz
        return gauss * (r * c - Rz) ** state.nz

    def general_values(self, r: float, c: np.ndarray, s: np.ndarray,
                       cphi: np.ndarray, sphi: np.ndarray) -> np.ndarray:
        """factor on the (cos theta, phi) product grid, shape (nc, nphi)."""
        x = r * s[:, None] * cphi[None, :]
        y = r * s[:, None] * sphi[None, :]
        z = np.broadcast_to((r * c)[:, None], x.shape)
        vx = x - self.R[0]
        vy = y - self.R[1]
        vz = z - self.R[2]
        v2 = vx * vx + vy * vy + vz * vz
        gauss = np.exp(-self.beta * v2)
        state = self.state
        if isinstance(state, SphericalGaussianState):
            poly = _solid_cartesian(state.l, state.m, vx, vy, vz) * v2**state.n
            return gauss * poly
        return gauss * vx**state.nx * vy**state.ny * vz**state.nz


def _solid_axial(l: int, vz: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """Solid harmonic with m = 0 as a polynomial in (v_z, v^2)."""
    # |v|^l P_l(vz/|v|) via the homogeneous Legendre recurrence
    p_prev = np.ones_like(vz)
    if l == 0:
        poly = p_prev
    else:
        p_curr = vz.copy()
        for n in range(2, l + 1):
            p_curr, p_prev = (
                ((2 * n - 1) * vz * p_curr - (n - 1) * v2 * p_prev) / n,
                p_curr,
            )
        poly = p_curr
    return math.sqrt((2 * l + 1) / (4.0 * math.pi)) * poly


def _solid_cartesian(l: int, m: int, vx, vy, vz):
    """Solid harmonic on arrays of real cartesian components."""
    from .special import _log_fact

    pref = math.sqrt(
        (2 * l + 1) / (4.0 * math.pi)
        * math.exp(_log_fact(l + m) + _log_fact(l - m))
    )
    xm = -vx - 1j * vy
    xp = vx - 1j * vy
    total = np.zeros(np.broadcast(vx, vy, vz).shape, dtype=complex)
    for k in range(max(0, -m), (l - m) // 2 + 1):
        denom = math.exp(
            (2 * k + m) * math.log(2.0)
            + _log_fact(k + m) + _log_fact(k) + _log_fact(l - m - 2 * k)
        )
        total += xm ** (k + m) * xp**k * vz ** (l - 2 * k - m) / denom
    return pref * total


def _radial_breakpoints(r_hi: float, k_e: float) -> list[float]:
    period = math.pi / k_e
    pts = list(np.arange(period, r_hi, period))
    return pts


def _integrate_radial(f, r_hi, k_e, settings) -> tuple[complex, float]:
    pts = _radial_breakpoints(r_hi, k_e)
    kwargs = dict(
        limit=max(settings.max_subdivisions, 2 * len(pts) + 50),
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        points=pts or None,
    )
    re, re_err = quad(lambda r: f(r).real, 0.0, r_hi, **kwargs)
    im, im_err = quad(lambda r: f(r).imag, 0.0, r_hi, **kwargs)
    return complex(re, im), math.hypot(re_err, im_err)


def _tail_bound(state, radial_bound: float, r_hi: float) -> float:
    """Envelope bound on the neglected radial tail beyond r_hi."""
    beta = state.beta
    R = float(np.linalg.norm(state.center_array))
    if isinstance(state, SphericalGaussianState):
        deg = state.l + 2 * state.n
    else:
        deg = state.nx + state.ny + state.nz
    env = lambda r: (
        radial_bound * r * r * (r + 1.0) * (r + R) ** deg
        * math.exp(-beta * (r - R) ** 2)
    )
    val, _ = quad(env, r_hi, r_hi + 30.0, limit=100)
    return 4.0 * math.pi * val


class _PartialIntegrator:
    """Shared machinery for exact-Coulomb and basis-substituted integrands."""

    def __init__(self, state, settings: QuadratureSettings,
                 k_e: float, radial_fn, radial_bound: float,
                 r_hi: float | None = None):
        self.state = state
        self.settings = settings
        self.k_e = k_e
        self.radial_fn = radial_fn           # radial_fn(l, r) -> u(r) values
        self.bound = _BoundFactor(state)
        self.axial = _is_axial(state)

        beta = state.beta
        R = float(np.linalg.norm(state.center_array))
        reach = R + math.sqrt(51.0 / beta)
        self.r_hi = r_hi if r_hi is not None else min(settings.r_cut, reach)
        self.tail = _tail_bound(state, radial_bound, self.r_hi)

        nodes, weights = np.polynomial.legendre.leggauss(settings.theta_order)
        self.c_nodes = nodes
        self.c_weights = weights
        self.s_nodes = np.sqrt(np.clip(1.0 - nodes * nodes, 0.0, None))
        l_top = max(settings.l_hard_cap, 1) + 1
        self.leg = _legendre_table(l_top, nodes)
        n_phi = settings.phi_order
        self.phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
        self.cphi = np.cos(self.phi)
        self.sphi = np.sin(self.phi)

    def partial(self, l: int, m: int) -> tuple[complex, float]:
        """J_lm (SGTF) or I_lm (CGTF) with the supplied radial function."""
        if self.axial and m != 0:
            return 0.0 + 0.0j, 0.0
        if self.axial:
            return self._partial_axial(l)
        return self._partial_general(l, m)

    def _partial_axial(self, l: int) -> tuple[complex, float]:
        sgtf = isinstance(self.state, SphericalGaussianState)
        ybar_l = _ybar(l, self.leg[l])
        ybar_1 = _ybar(1, self.leg[1])
        w = self.c_weights

        def f(r: float) -> complex:
            values = self.bound.axial_values(r, self.c_nodes, self.s_nodes)
            if sgtf:
                angular = np.sum(w * ybar_l * ybar_1 * values)
            else:
                angular = np.sum(w * ybar_l * (r * self.c_nodes) * values)
            return 2.0 * math.pi * r * r * self.radial_fn(l, r) * angular

        value, err = _integrate_radial(f, self.r_hi, self.k_e, self.settings)
        return value, err + self.tail

    def _partial_general(self, l: int, m: int) -> tuple[complex, float]:
        sgtf = isinstance(self.state, SphericalGaussianState)
        theta = np.arccos(self.c_nodes)
        y_lm_conj = np.array(
            [
                [
                    spherical_harmonic(l, m, t, p).conjugate()
                    for p in self.phi
                ]
                for t in theta
            ]
        )
        ybar_1 = _ybar(1, self.leg[1])
        w = self.c_weights
        dphi = 2.0 * math.pi / len(self.phi)

        def f(r: float) -> complex:
            values = self.bound.general_values(
                r, self.c_nodes, self.s_nodes, self.cphi, self.sphi
            )
            if sgtf:
                grid = y_lm_conj * ybar_1[:, None] * values
            else:
                grid = y_lm_conj * (r * self.c_nodes)[:, None] * values
            angular = dphi * np.sum(w @ grid)
            return r * r * self.radial_fn(l, r) * angular

        value, err = _integrate_radial(f, self.r_hi, self.k_e, self.settings)
        return value, err + self.tail


def _coulomb_radial_fn(continuum: ContinuumSpec, r_hi: float, over_r: bool):
    eta = continuum.eta
    k_e = continuum.k_e

    if over_r:
        def fn(l: int, r: float) -> float:
            if r <= 0.0:
                return 0.0
            return float(coulomb_wave_values(l, eta, np.array([k_e * r]))[0]) / r
    else:
        def fn(l: int, r: float) -> float:
            if r <= 0.0:
                return 0.0
            return float(coulomb_wave_values(l, eta, np.array([k_e * r]))[0])

    # prime the per-(l, eta) solver cache so quad callbacks stay cheap
    def prime(l: int):
        coulomb_wave_values(l, eta, np.array([k_e * r_hi]))

    fn.prime = prime
    return fn


def partial_integral_numeric(
    l: int,
    m: int,
    state,
    basis: ComplexGaussianBasis,
    k_index: int,
    settings: QuadratureSettings | None = None,
) -> tuple[complex, float]:
    """Quadrature of the same integrand the closed forms resolve, with the
    fitted radial representation substituted for the continuum."""
    settings = settings or QuadratureSettings()
    if l > basis.l_max:
        raise ConfigurationError(f"l={l} beyond basis l_max={basis.l_max}")
    k_e = float(basis.energies[k_index])

    def radial_fn(ll: int, r: float) -> complex:
        u = evaluate_basis(basis, ll, k_index, r)
        if isinstance(state, CartesianGaussianState):
            return u / r
        return u

    # fitted representation decays only like exp(-Re(alpha)_min r^2)
    tail_r = np.linspace(1.0, settings.r_cut, 200)
    radial_bound = float(
        np.max(np.abs(evaluate_basis(basis, l, k_index, tail_r)))
    )
    integ = _PartialIntegrator(state, settings, k_e, radial_fn, radial_bound)
    return integ.partial(l, m)


def amplitude_numeric(
    state,
    continuum: ContinuumSpec,
    settings: QuadratureSettings | None = None,
    l_max_sum: int | None = None,
) -> NumericAmplitude:
    """Reference amplitude with exact Coulomb radial functions.

    The partial-wave sum continues past the requested continuum cutoff
    until two consecutive waves contribute below tolerance (unless
    ``l_max_sum`` pins it), so the result approximates the full integral.
    """
    settings = settings or QuadratureSettings()
    sgtf = isinstance(state, SphericalGaussianState)
    pref = (SGTF_PREFACTOR if sgtf else CGTF_PREFACTOR) / continuum.k_e
    khat = continuum.direction_array
    eta = continuum.eta

    radial_fn = _coulomb_radial_fn(continuum, settings.r_cut, over_r=not sgtf)
    integ = _PartialIntegrator(state, settings, continuum.k_e, radial_fn, 1.4)

    partials: dict[tuple[int, int], complex] = {}
    total = 0.0 + 0.0j
    err_total = 0.0
    small_blocks = 0
    l_cap = l_max_sum if l_max_sum is not None else settings.l_hard_cap
    l_used = 0
    converged = l_max_sum is not None
    for l in range(l_cap + 1):
        radial_fn.prime(l)
        sigma = coulomb_phase(l, eta)
        phase = (-1j) ** l * cmath.exp(1j * sigma)
        block = 0.0 + 0.0j
        for m in range(-l, l + 1):
            y_k = spherical_harmonic_unit(l, m, khat)
            if y_k == 0.0:
                partials[(l, m)] = 0.0 + 0.0j
                continue
            value, err = integ.partial(l, m)
            term = pref * phase * y_k * value
            partials[(l, m)] = term
            block += term
            err_total += abs(pref * y_k) * err
        total += block
        l_used = l
        if l_max_sum is None:
            scale = max(abs(total), settings.abs_tol)
            if abs(block) <= 0.5 * max(settings.abs_tol,
                                       settings.rel_tol * scale):
                small_blocks += 1
                if small_blocks >= 2 and l >= continuum.l_max:
                    converged = True
                    break
            else:
                small_blocks = 0

    budget = max(settings.abs_tol * 4.0 * (l_used + 1),
                 settings.rel_tol * abs(total) * 10.0)
    return NumericAmplitude(
        value=total,
        error=err_total,
        l_used=l_used,
        tail_bound=integ.tail,
        partial_terms=partials,
        converged=converged and err_total <= budget,
        config_digest=config_digest(state, continuum),
    )


def amplitude_monocentric(
    state,
    continuum: ContinuumSpec,
    basis: ComplexGaussianBasis,
    k_index: int,
) -> TransitionResult:
    """Analytic amplitude for a bound state centered on the origin.

    Independent of the multicenter machinery: one Gamma-function radial
    integral per partial wave times a single angular factor.
    """
    R = state.center_array
    if float(R @ R) != 0.0:
        raise ConfigurationError("monocentric formula requires R = 0")
    sgtf = isinstance(state, SphericalGaussianState)
    k_e = continuum.k_e
    beta = state.beta
    partials: dict[tuple[int, int], complex] = {}

    if sgtf:
        pref = SGTF_PREFACTOR / k_e
        power = state.l + 2 * state.n
    else:
        pref = CGTF_PREFACTOR / k_e
        power = state.nx + state.ny + state.nz
        angular = _cgtf_angular_table(state, continuum.l_max)

    khat = continuum.direction_array
    for l in range(continuum.l_max + 1):
        p = 0.5 * (l + power + 4)
        radial_terms = [
            c_s * cmath.exp(-p * cmath.log(a_s + beta))
            for c_s, a_s in zip(basis.coefficients[l, k_index],
                                basis.exponents[l])
        ]
        radial = 0.5 * math.gamma(p) * complex(
            math.fsum(t.real for t in radial_terms),
            math.fsum(t.imag for t in radial_terms),
        )
        phase = (-1j) ** l * cmath.exp(1j * continuum.sigmas[l])
        for m in range(-l, l + 1):
            y_k = spherical_harmonic_unit(l, m, khat)
            if y_k == 0.0:
                partials[(l, m)] = 0.0 + 0.0j
                continue
            if sgtf:
                ang = gaunt(l, m, 1, 0, state.l, state.m)
            else:
                ang = angular[(l, m)]
            partials[(l, m)] = pref * phase * y_k * ang * radial
    amplitude = complex(
        math.fsum(v.real for v in partials.values()),
        math.fsum(v.imag for v in partials.values()),
    )
    return TransitionResult(
        amplitude=amplitude,
        partial_terms=partials,
        config_digest=config_digest(state, continuum, basis),
    )


def _cgtf_angular_table(state: CartesianGaussianState, l_max: int):
    """Angular integrals of conj(Y_l^m) cos(theta) times the monomial
    direction factors, by product quadrature."""
    n_c, n_phi = 80, 96
    nodes, weights = np.polynomial.legendre.leggauss(n_c)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    s = np.sqrt(np.clip(1.0 - nodes * nodes, 0.0, None))
    xhat = s[:, None] * np.cos(phi)[None, :]
    yhat = s[:, None] * np.sin(phi)[None, :]
    zhat = np.broadcast_to(nodes[:, None], xhat.shape)
    mono = xhat**state.nx * yhat**state.ny * zhat ** (state.nz + 1)
    theta = np.arccos(nodes)
    table = {}
    dphi = 2.0 * math.pi / n_phi
    for l in range(l_max + 1):
        for m in range(-l, l + 1):
            y_conj = np.array(
                [[spherical_harmonic(l, m, t, p).conjugate() for p in phi]
                 for t in theta]
            )
            table[(l, m)] = dphi * np.sum(weights @ (y_conj * mono))
    return table
