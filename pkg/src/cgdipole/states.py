"""Bound-state descriptions, continuum specification and result container."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError
from .special import coulomb_phase


@dataclass(frozen=True)
class SphericalGaussianState:
    """Bound state (r.r)^n Y_lm-solid-harmonic exp(-beta (r-R)^2).

    ``n`` is a radial power index, not a quantum number; the common s-type
    Gaussian is n = l = m = 0.
    """

    n: int
    l: int
    m: int
    beta: float
    center: tuple[float, float, float]

    def __post_init__(self):
        if self.beta <= 0.0:
            raise DomainError("beta must be positive")
        if self.n < 0 or self.l < 0 or abs(self.m) > self.l:
            raise DomainError(f"invalid state indices n={self.n} l={self.l} m={self.m}")

    @property
    def center_array(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)


@dataclass(frozen=True)
class CartesianGaussianState:
    """Bound state x^nx y^ny z^nz exp(-beta (r-R)^2), unnormalized."""

    nx: int
    ny: int
    nz: int
    beta: float
    center: tuple[float, float, float]

    def __post_init__(self):
        if self.beta <= 0.0:
            raise DomainError("beta must be positive")
        if min(self.nx, self.ny, self.nz) < 0:
            raise DomainError("cartesian powers must be non-negative")

    @property
    def center_array(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)


@dataclass(frozen=True)
class ContinuumSpec:
    """Ejected-electron channel: wavenumber, direction, Coulomb charge,
    partial-wave cutoff and the matching phase shifts."""

    k_e: float
    direction: tuple[float, float, float]
    charge: float
    l_max: int
    sigmas: tuple[float, ...]

    def __post_init__(self):
        if self.k_e <= 0.0:
            raise DomainError("k_e must be positive")
        if self.l_max < 0:
            raise DomainError("l_max must be >= 0")
        norm = math.sqrt(sum(c * c for c in self.direction))
        if abs(norm - 1.0) > 1e-12:
            raise DomainError("direction must be a unit vector")
        if len(self.sigmas) < self.l_max + 1:
            raise ConfigurationError("need a phase shift for every partial wave")

    @property
    def eta(self) -> float:
        return -self.charge / self.k_e

    @property
    def direction_array(self) -> np.ndarray:
        return np.asarray(self.direction, dtype=float)

    @classmethod
    def coulomb(cls, k_e: float, charge: float, l_max: int,
                direction=(0.0, 0.0, 1.0), sigma_l_count: int | None = None):
        """Continuum with Coulomb phase shifts sigma_l = arg Gamma(l+1+i eta)."""
        eta = -charge / k_e
        count = max(l_max + 1, sigma_l_count or 0)
        sigmas = tuple(coulomb_phase(l, eta) for l in range(count))
        direction = tuple(float(c) for c in direction)
        return cls(k_e=k_e, direction=direction, charge=charge,
                   l_max=l_max, sigmas=sigmas)


@dataclass
class TransitionResult:
    """Complex transition amplitude with its per-(l, m) decomposition."""

    amplitude: complex
    partial_terms: dict[tuple[int, int], complex]
    config_digest: str = ""

    def partial_sum(self) -> complex:
        terms = [self.partial_terms[key] for key in sorted(self.partial_terms)]
        re = math.fsum(t.real for t in terms)
        im = math.fsum(t.imag for t in terms)
        return complex(re, im)


def config_digest(state, continuum: ContinuumSpec, basis=None) -> str:
    """Short hash identifying (state, continuum, basis metadata)."""
    payload = {
        "state": _state_payload(state),
        "continuum": {
            "k_e": continuum.k_e,
            "direction": list(continuum.direction),
            "charge": continuum.charge,
            "l_max": continuum.l_max,
        },
    }
    if basis is not None:
        payload["basis"] = {
            "n_gaussians": basis.n_gaussians,
            "l_max": basis.l_max,
            "r_max": basis.r_max,
            "energies": [float(k) for k in basis.energies],
            "seed": basis.seed,
        }
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _state_payload(state) -> dict:
    if isinstance(state, SphericalGaussianState):
        return {"type": "sgtf", "n": state.n, "l": state.l, "m": state.m,
                "beta": state.beta, "center": list(state.center)}
    if isinstance(state, CartesianGaussianState):
        return {"type": "cgtf", "powers": [state.nx, state.ny, state.nz],
                "beta": state.beta, "center": list(state.center)}
    raise ConfigurationError(f"unknown state type {type(state)!r}")
