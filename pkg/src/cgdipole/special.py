"""Angular and radial special functions with fixed conventions.

Conventions used throughout the package:

* spherical harmonics carry the Condon-Shortley phase,
* the Gaunt coefficient is ``<l2 m2 | L M | l1 m1> = Int dOmega
  conj(Y_l2^m2) Y_L^M Y_l1^m1``,
* solid harmonics are the homogeneous polynomials that restrict to
  ``r^l Y_l^m(rhat)`` on real vectors and extend to C^3 through a finite
  polynomial sum.

All functions are pure; the Wigner/Gaunt tables are memoised on first use.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import loggamma, sph_harm_y

from .errors import DomainError, NumericalError

SQRT4PI = math.sqrt(4.0 * math.pi)


def double_factorial(n: int) -> float:
    """n!! with the empty-product convention (-1)!! = 0!! = 1."""
    if n < -1:
        raise DomainError(f"double factorial needs n >= -1, got {n}")
    result = 1
    k = n
    while k > 1:
        result *= k
        k -= 2
    return float(result)


def log_double_factorial(n: int) -> float:
    """log(n!!), evaluated through log-gamma so large n stays finite."""
    if n < -1:
        raise DomainError(f"double factorial needs n >= -1, got {n}")
    if n <= 1:
        return 0.0
    k = n // 2
    if n % 2 == 0:
        # (2k)!! = 2^k k!
        return k * math.log(2.0) + math.lgamma(k + 1)
    # (2k+1)!! = (2k+1)! / (2^k k!)
    return math.lgamma(n + 1) - k * math.log(2.0) - math.lgamma(k + 1)


def _log_fact(n: int) -> float:
    return math.lgamma(n + 1)


@lru_cache(maxsize=None)
def wigner_3j(j1: int, j2: int, j3: int, m1: int, m2: int, m3: int) -> float:
    """Wigner 3j symbol for integer angular momenta (Racah formula).

    Each term of the alternating sum is assembled in the log domain and
    exponentiated once, which keeps j up to a few tens well conditioned.
    """
    if m1 + m2 + m3 != 0:
        return 0.0
    if j3 < abs(j1 - j2) or j3 > j1 + j2:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0

    log_delta = 0.5 * (
        _log_fact(j1 + j2 - j3)
        + _log_fact(j1 - j2 + j3)
        + _log_fact(-j1 + j2 + j3)
        - _log_fact(j1 + j2 + j3 + 1)
    )
    log_norm = 0.5 * (
        _log_fact(j1 + m1)
        + _log_fact(j1 - m1)
        + _log_fact(j2 + m2)
        + _log_fact(j2 - m2)
        + _log_fact(j3 + m3)
        + _log_fact(j3 - m3)
    )

    t_min = max(0, j2 - j3 - m1, j1 - j3 + m2)
    t_max = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    terms = []
    for t in range(t_min, t_max + 1):
        log_term = (
            _log_fact(t)
            + _log_fact(j3 - j2 + t + m1)
            + _log_fact(j3 - j1 + t - m2)
            + _log_fact(j1 + j2 - j3 - t)
            + _log_fact(j1 - t - m1)
            + _log_fact(j2 - t + m2)
        )
        sign = -1.0 if t % 2 else 1.0
        terms.append(sign * math.exp(log_delta + log_norm - log_term))
    total = math.fsum(terms)
    phase = -1.0 if (j1 - j2 - m3) % 2 else 1.0
    return phase * total


@lru_cache(maxsize=None)
def gaunt(l2: int, m2: int, L: int, M: int, l1: int, m1: int) -> float:
    """Gaunt coefficient <l2 m2 | L M | l1 m1>.

    Returns exactly 0.0 when any selection rule fails: m2 != M + m1,
    triangle violation, or odd l1 + L + l2.
    """
    if m2 != M + m1:
        return 0.0
    if l2 < abs(l1 - L) or l2 > l1 + L:
        return 0.0
    if (l1 + L + l2) % 2:
        return 0.0
    if abs(m1) > l1 or abs(M) > L or abs(m2) > l2:
        return 0.0
    phase = -1.0 if m2 % 2 else 1.0
    norm = math.sqrt((2 * l1 + 1) * (2 * L + 1) * (2 * l2 + 1) / (4.0 * math.pi))
    return (
        phase
        * norm
        * wigner_3j(l2, L, l1, 0, 0, 0)
        * wigner_3j(l2, L, l1, -m2, M, m1)
    )


def spherical_harmonic(l: int, m: int, theta: float, phi: float) -> complex:
    """Y_l^m(theta, phi), Condon-Shortley phase, theta polar in [0, pi]."""
    if l < 0 or abs(m) > l:
        raise DomainError(f"invalid angular index (l={l}, m={m})")
    return complex(sph_harm_y(l, m, theta, phi))


def spherical_harmonic_unit(l: int, m: int, nhat) -> complex:
    """Y_l^m evaluated along a unit direction vector."""
    x, y, z = float(nhat[0]), float(nhat[1]), float(nhat[2])
    theta = math.atan2(math.hypot(x, y), z)
    phi = math.atan2(y, x)
    return spherical_harmonic(l, m, theta, phi)


def solid_harmonic_series(l: int, m: int, v) -> complex:
    """Solid harmonic on C^3 through its finite polynomial sum.

    For real arguments this coincides with r^l Y_l^m(rhat); it is
    homogeneous of degree l for any complex scaling.
    """
    if l < 0 or abs(m) > l:
        raise DomainError(f"invalid angular index (l={l}, m={m})")
    x, y, z = complex(v[0]), complex(v[1]), complex(v[2])
    pref = math.sqrt(
        (2 * l + 1)
        / (4.0 * math.pi)
        * math.exp(_log_fact(l + m) + _log_fact(l - m))
    )
    xm = -x - 1j * y
    xp = x - 1j * y
    total = 0.0 + 0.0j
    for k in range(max(0, -m), (l - m) // 2 + 1):
        denom = math.exp(
            (2 * k + m) * math.log(2.0)
            + _log_fact(k + m)
            + _log_fact(k)
            + _log_fact(l - m - 2 * k)
        )
        total += xm ** (k + m) * xp**k * z ** (l - 2 * k - m) / denom
    return pref * total


def solid_harmonic(l: int, m: int, v) -> complex:
    """Solid harmonic; real vectors go through r^l Y_l^m directly."""
    arr = np.asarray(v)
    if np.iscomplexobj(arr) and np.any(arr.imag != 0.0):
        return solid_harmonic_series(l, m, arr)
    x, y, z = float(arr[0].real), float(arr[1].real), float(arr[2].real)
    r = math.sqrt(x * x + y * y + z * z)
    if r == 0.0:
        return complex(1.0 / SQRT4PI) if l == 0 else 0.0 + 0.0j
    theta = math.atan2(math.hypot(x, y), z)
    phi = math.atan2(y, x)
    return r**l * spherical_harmonic(l, m, theta, phi)


def harmonic_polynomial(n: int, l: int, m: int, v) -> complex:
    """(v.v)^n times the solid harmonic, with the unconjugated dot product."""
    if n < 0:
        raise DomainError(f"harmonic polynomial needs n >= 0, got {n}")
    arr = np.asarray(v)
    dot = complex(arr[0]) ** 2 + complex(arr[1]) ** 2 + complex(arr[2]) ** 2
    return dot**n * solid_harmonic(l, m, arr)


def kummer_1f1(
    a: float,
    b: float,
    z: complex,
    max_terms: int = 10_000,
    z_limit: float = 500.0,
) -> complex:
    """Confluent hypergeometric 1F1(a, b; z) by direct Taylor summation.

    For Re(z) < 0 the Kummer transformation
    1F1(a, b; z) = exp(z) 1F1(b - a, b; -z) is applied first so the
    summed series has a non-negative real argument.
    """
    if b <= 0 and float(b).is_integer():
        raise DomainError(f"1F1 undefined for non-positive integer b={b}")
    z = complex(z)
    if abs(z) > z_limit:
        raise DomainError(f"|z|={abs(z):.3g} exceeds configured limit {z_limit}")
    if z.real < 0.0:
        return np.exp(z) * kummer_1f1(b - a, b, -z, max_terms, z_limit)

    term = 1.0 + 0.0j
    total = term
    small = 0
    for k in range(max_terms):
        term *= (a + k) * z / ((b + k) * (k + 1))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise NumericalError(
        f"1F1({a}, {b}; {z}) did not converge in {max_terms} terms",
        partial=total,
        bound=abs(term),
    )


def coulomb_phase(l: int, eta: float) -> float:
    """Coulomb phase shift sigma_l = arg Gamma(l + 1 + i eta), continuous in eta."""
    if l < 0:
        raise DomainError(f"coulomb_phase needs l >= 0, got {l}")
    return float(loggamma(complex(l + 1, eta)).imag)
