"""Regular Coulomb function F_l(eta, rho) by outward ODE integration.

The radial equation u'' = [l(l+1)/rho^2 + 2 eta/rho - 1] u is integrated
from a power-series start near the origin with a high-order explicit
scheme, and the overall scale is fixed by matching against the asymptotic
form sin(rho - eta ln 2 rho - l pi/2 + sigma_l) with its slowly varying
amplitude corrections.  One integration per (l, eta) is cached and reused
for every subsequent point evaluation.
"""

from __future__ import annotations

import math

from scipy.integrate import solve_ivp

import numpy as np

from .errors import DomainError
from .special import coulomb_phase

_L_MAX = 25
_ETA_MAX = 16.0
_RHO_MAX = 4000.0

_SOLVER_CACHE: dict[tuple[int, float, float], "_RegularCoulomb"] = {}


def _series_coefficients(l: int, eta: float, n_terms: int = 200) -> np.ndarray:
    """Taylor coefficients A_n of the regular solution rho^(l+1) sum A_n rho^n."""
    coeffs = np.zeros(n_terms)
    coeffs[0] = 1.0
    if n_terms > 1:
        coeffs[1] = eta / (l + 1)
    for n in range(2, n_terms):
        coeffs[n] = (2.0 * eta * coeffs[n - 1] - coeffs[n - 2]) / (n * (n + 2 * l + 1))
    return coeffs


def _series_eval(l: int, coeffs: np.ndarray, rho: np.ndarray):
    """Evaluate the series and its derivative at the given radii."""
    rho = np.asarray(rho, dtype=float)
    u = np.zeros_like(rho)
    du = np.zeros_like(rho)
    powers = rho ** (l + 1)
    dpowers = rho**l
    term = np.ones_like(rho)
    for n, a_n in enumerate(coeffs):
        if n > 0:
            term = term * rho
        u += a_n * powers * term
        du += a_n * (l + 1 + n) * dpowers * term
    return u, du


def _asymptotic_fg(l: int, eta: float, rho: float) -> tuple[float, float, bool]:
    """Slowly varying amplitudes (f, g) of the asymptotic expansion.

    F ~ g cos(theta) + f sin(theta).  The series is asymptotic; summation
    stops at the smallest term and the third return flags whether that
    term was below 1e-13.
    """
    f_k, g_k = 1.0, 0.0
    f_total, g_total = f_k, g_k
    prev_size = abs(f_k) + abs(g_k)
    ok = False
    for k in range(0, 60):
        a_k = (2 * k + 1) * eta / ((2 * k + 2) * rho)
        b_k = (eta * eta + l * (l + 1) - k * (k + 1)) / ((2 * k + 2) * rho)
        f_k, g_k = a_k * f_k - b_k * g_k, a_k * g_k + b_k * f_k
        size = abs(f_k) + abs(g_k)
        if size < 1e-13:
            f_total += f_k
            g_total += g_k
            ok = True
            break
        if size > prev_size and k > 2:
            break
        f_total += f_k
        g_total += g_k
        prev_size = size
    return f_total, g_total, ok


class _RegularCoulomb:
    """Cached outward integration of one (l, eta) channel."""

    def __init__(self, l: int, eta: float, rho_need: float):
        self.l = l
        self.eta = eta
        self.sigma = coulomb_phase(l, eta)

        self.rho0 = 0.3
        self.coeffs = _series_coefficients(l, eta)

        # Match point: far enough out that the asymptotic series bottoms
        # below 1e-13 for this (l, eta).
        rho_turn = eta + math.sqrt(eta * eta + l * (l + 1))
        rho_match = max(45.0, 12.0 * abs(eta), 2.0 * rho_turn)
        rho_end = max(rho_need + 2.0, rho_match + 10.0)

        u0, du0 = _series_eval(l, self.coeffs, np.array([self.rho0]))
        y0 = np.array([u0[0], du0[0]])

        def rhs(rho, y):
            w = l * (l + 1) / (rho * rho) + 2.0 * eta / rho - 1.0
            return [y[1], w * y[0]]

        # Leg 1 crosses the centrifugal/Coulomb barrier where u grows
        # monotonically; pure relative control is safe there.
        rho_a = max(self.rho0 * 1.5, 1.1 * rho_turn)
        rho_a = min(rho_a, rho_end - 1.0)
        self.scale1 = 1.0
        if rho_a > self.rho0 * 1.2:
            sol1 = solve_ivp(
                rhs,
                (self.rho0, rho_a),
                y0,
                method="DOP853",
                rtol=1e-12,
                atol=1e-280,
                dense_output=True,
            )
            if not sol1.success:
                raise RuntimeError(f"Coulomb integration failed (l={l}, eta={eta})")
            self.sol1 = sol1
            y_mid = sol1.y[:, -1].copy()
            self.scale1 = float(np.hypot(y_mid[0], y_mid[1]))
            y_mid /= self.scale1
            start2 = rho_a
        else:
            self.sol1 = None
            y_mid = y0
            start2 = self.rho0

        sol2 = solve_ivp(
            rhs,
            (start2, rho_end),
            y_mid,
            method="DOP853",
            rtol=1e-12,
            atol=1e-15,
            dense_output=True,
        )
        if not sol2.success:
            raise RuntimeError(f"Coulomb integration failed (l={l}, eta={eta})")
        self.sol2 = sol2
        self.rho_end = rho_end
        self.split = start2

        self.lam = self._match_amplitude(rho_match, rho_end)

    def _match_amplitude(self, rho_match: float, rho_end: float) -> float:
        samples = np.linspace(max(rho_match, self.split + 1.0), rho_end - 0.5, 11)
        num = 0.0
        den = 0.0
        worst = 0.0
        for rho in samples:
            f_amp, g_amp, ok = _asymptotic_fg(self.l, self.eta, rho)
            if not ok:
                continue
            theta = (
                rho
                - self.eta * math.log(2.0 * rho)
                - self.l * math.pi / 2.0
                + self.sigma
            )
            f_as = g_amp * math.cos(theta) + f_amp * math.sin(theta)
            u = float(self.sol2.sol(rho)[0])
            num += u * f_as
            den += f_as * f_as
        if den == 0.0:
            raise RuntimeError(
                f"no usable asymptotic match points (l={self.l}, eta={self.eta})"
            )
        lam = num / den
        for rho in samples:
            f_amp, g_amp, ok = _asymptotic_fg(self.l, self.eta, rho)
            if not ok:
                continue
            theta = (
                rho
                - self.eta * math.log(2.0 * rho)
                - self.l * math.pi / 2.0
                + self.sigma
            )
            f_as = g_amp * math.cos(theta) + f_amp * math.sin(theta)
            u = float(self.sol2.sol(rho)[0])
            worst = max(worst, abs(u - lam * f_as))
        self.match_residual = worst / abs(lam)
        return lam

    def evaluate(self, rho) -> np.ndarray:
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        out = np.empty_like(rho)

        small = rho < self.rho0
        if np.any(small):
            u, _ = _series_eval(self.l, self.coeffs, rho[small])
            out[small] = u / (self.scale1 * self.lam)

        mid = (~small) & (rho < self.split)
        if np.any(mid):
            if self.sol1 is None:
                u, _ = _series_eval(self.l, self.coeffs, rho[mid])
                out[mid] = u / (self.scale1 * self.lam)
            else:
                out[mid] = self.sol1.sol(rho[mid])[0] / (self.scale1 * self.lam)

        outer = ~small & ~mid
        if np.any(outer):
            out[outer] = self.sol2.sol(rho[outer])[0] / self.lam
        return out


def _get_solver(l: int, eta: float, rho_need: float) -> _RegularCoulomb:
    # Bucket the required range so repeated calls share one integration.
    bucket = 64.0
    while bucket < rho_need:
        bucket *= 2.0
    key = (l, float(eta), bucket)
    solver = _SOLVER_CACHE.get(key)
    if solver is None:
        solver = _RegularCoulomb(l, eta, bucket)
        _SOLVER_CACHE[key] = solver
    return solver


def _validate(l: int, eta: float, rho_max: float) -> None:
    if l < 0 or l > _L_MAX:
        raise DomainError(f"coulomb_wave validated for 0 <= l <= {_L_MAX}, got {l}")
    if abs(eta) > _ETA_MAX:
        raise DomainError(f"coulomb_wave validated for |eta| <= {_ETA_MAX}, got {eta}")
    if not rho_max > 0.0:
        raise DomainError("coulomb_wave needs rho > 0")
    if rho_max > _RHO_MAX:
        raise DomainError(f"coulomb_wave validated for rho <= {_RHO_MAX}")


def coulomb_wave(l: int, eta: float, rho: float) -> float:
    """Regular Coulomb function F_l(eta, rho), unit asymptotic amplitude."""
    _validate(l, eta, float(rho))
    solver = _get_solver(l, float(eta), float(rho))
    return float(solver.evaluate(rho)[0])


def coulomb_wave_values(l: int, eta: float, rho) -> np.ndarray:
    """Vectorised F_l(eta, rho) over an array of radii."""
    rho = np.asarray(rho, dtype=float)
    if rho.size == 0:
        return np.zeros_like(rho)
    _validate(l, eta, float(np.max(rho)))
    if np.any(rho <= 0.0):
        raise DomainError("coulomb_wave needs rho > 0")
    solver = _get_solver(l, float(eta), float(np.max(rho)))
    return solver.evaluate(rho)
