"""Complex-Gaussian representation of conjugated radial continuum functions.

A channel l is modelled as r^(l+1) sum_s c_s exp(-alpha_s r^2) with complex
alpha_s shared across the energy set and complex c_s per energy.  The
exponents are found by variable projection: for every candidate exponent
set the linear coefficients are solved by truncated-SVD least squares, and
the nonlinear search runs over the exponents alone, grown in stages with
multiple starts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .coulomb import coulomb_wave_values
from .errors import ConfigurationError, DomainError

RE_ALPHA_FLOOR = 1e-4
SVD_RCOND = 1e-12
FMT_VERSION = 1


@dataclass
class RadialGrid:
    """Sampling grid with per-(l, k_e) target values of the conjugated
    radial continuum function."""

    r_max: float
    points: np.ndarray          # (M,) strictly increasing, in (0, r_max]
    values: np.ndarray          # (L+1, K, M) complex
    energies: np.ndarray        # (K,)
    charge: float | None = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        self.energies = np.asarray(self.energies, dtype=float)
        if np.any(np.diff(self.points) <= 0.0):
            raise ConfigurationError("grid points must be strictly increasing")
        if self.points[0] <= 0.0 or self.points[-1] > self.r_max * (1 + 1e-12):
            raise ConfigurationError("grid points must lie in (0, r_max]")
        expected = (self.values.shape[0], len(self.energies), len(self.points))
        if self.values.shape != expected:
            raise ConfigurationError(
                f"values shape {self.values.shape} != {expected}"
            )


@dataclass
class FitOptions:
    """Optimizer knobs; defaults reproduce the validation protocol."""

    n_starts: int = 2           # multi-starts on the first stage
    n_starts_grow: int = 1      # fresh starts per growth stage
    max_nfev_stage: int = 40    # TRF step cap per start, early stages
    max_nfev_final: int = 100   # step cap for the final (full-N) stage
    ftol: float = 1e-13
    xtol: float = 1e-11
    residual_ceiling: float = 1e-2
    im_bound: float = 0.0       # 0 -> derived from the energy grid
    opt_points: int = 1000      # subgrid size for the nonlinear search


@dataclass
class ComplexGaussianBasis:
    """Fitted exponents/coefficients plus fit provenance."""

    r_max: float
    energies: np.ndarray          # (K,)
    exponents: np.ndarray         # (L+1, N) complex, Re > 0
    coefficients: np.ndarray      # (L+1, K, N) complex
    residuals: np.ndarray         # (L+1, K) relative L2 residuals
    seed: int
    charge: float | None = None
    converged: bool = True

    @property
    def l_max(self) -> int:
        return self.exponents.shape[0] - 1

    @property
    def n_gaussians(self) -> int:
        return self.exponents.shape[1]

    def k_index(self, k_e: float, tol: float = 1e-9) -> int:
        match = np.nonzero(np.abs(self.energies - k_e) <= tol)[0]
        if len(match) == 0:
            raise ConfigurationError(
                f"k_e={k_e} not on the basis energy grid {self.energies}"
            )
        return int(match[0])

    def check(self) -> None:
        if np.any(self.exponents.real <= 0.0):
            raise ConfigurationError("basis violates Re(alpha) > 0")


def evaluate_basis(basis: ComplexGaussianBasis, l: int, k_index: int, r):
    """r^(l+1) sum_s c_s exp(-alpha_s r^2) for channel l at one energy."""
    if not 0 <= l <= basis.l_max:
        raise ConfigurationError(f"l={l} outside basis range 0..{basis.l_max}")
    if not 0 <= k_index < len(basis.energies):
        raise ConfigurationError(f"k_index={k_index} outside energy grid")
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    r_arr = np.atleast_1d(r_arr)
    model = _design_matrix(r_arr, l, basis.exponents[l]) @ basis.coefficients[l, k_index]
    return complex(model[0]) if scalar else model


def build_targets(
    charge: float,
    l_max: int,
    energies,
    r_max: float = 25.0,
    n_points: int = 2000,
) -> RadialGrid:
    """Sample the conjugated radial targets on a uniform grid.

    For the pure-Coulomb continuum the target is F_l(eta, k_e r), which is
    real, so conjugation is the identity.
    """
    energies = np.asarray(energies, dtype=float)
    if l_max < 0:
        raise DomainError("l_max must be >= 0")
    if np.any(energies <= 0.0):
        raise DomainError("energies must be positive")
    r = (np.arange(n_points) + 1.0) * (r_max / n_points)
    values = np.empty((l_max + 1, len(energies), n_points), dtype=complex)
    for l in range(l_max + 1):
        for j, k_e in enumerate(energies):
            eta = -charge / k_e
            values[l, j] = coulomb_wave_values(l, eta, k_e * r)
    return RadialGrid(r_max=r_max, points=r, values=values, energies=energies,
                      charge=charge)


# ----------------------------------------------------------------------
# variable projection machinery
# ----------------------------------------------------------------------

def _design_matrix(r: np.ndarray, l: int, alphas: np.ndarray) -> np.ndarray:
    return r[:, None] ** (l + 1) * np.exp(-np.outer(r * r, alphas))


def _tsvd_solve(A: np.ndarray, Y: np.ndarray):
    """Truncated-SVD least squares; also returns the kept left singular
    vectors and the pseudoinverse adjoint, needed for the variable
    projection Jacobian."""
    U, S, Vh = np.linalg.svd(A, full_matrices=False)
    keep = S > SVD_RCOND * S[0]
    U = U[:, keep]
    V = Vh[keep].conj().T
    C = V @ ((U.conj().T @ Y) / S[keep, None])
    pinv_h = U @ (V.conj().T / S[keep, None])     # (A^+)^H, shape (M, N)
    return C, U, pinv_h


def _params_to_alphas(theta: np.ndarray) -> np.ndarray:
    n = len(theta) // 2
    return RE_ALPHA_FLOOR + np.exp(theta[:n]) + 1j * theta[n:]


def _alphas_to_params(alphas: np.ndarray) -> np.ndarray:
    re = np.clip(alphas.real - RE_ALPHA_FLOOR, 1e-18, None)
    return np.concatenate([np.log(re), alphas.imag])


class _VarProObjective:
    """Projected residuals and their Kaufman-approximation Jacobian.

    The linear coefficients are eliminated exactly at every exponent set,
    so the nonlinear search sees only the 2N real exponent parameters.
    """

    def __init__(self, r: np.ndarray, l: int, Y: np.ndarray):
        self.r = r
        self.r2 = r * r
        self.l = l
        self.Y = Y                     # (M, K)
        self.norm = np.linalg.norm(Y)
        self._cache_key = None
        self._cache = None

    def _factor(self, theta: np.ndarray):
        key = theta.tobytes()
        if key != self._cache_key:
            alphas = _params_to_alphas(theta)
            A = _design_matrix(self.r, self.l, alphas)
            C, U, pinv_h = _tsvd_solve(A, self.Y)
            R = A @ C - self.Y
            self._cache_key = key
            self._cache = (alphas, A, C, U, pinv_h, R)
        return self._cache

    def residuals(self, theta: np.ndarray) -> np.ndarray:
        R = self._factor(theta)[-1]
        return np.concatenate([R.real.ravel(), R.imag.ravel()]) / self.norm

    def jacobian(self, theta: np.ndarray) -> np.ndarray:
        """Golub-Pereyra Jacobian of the projected residual.

        With R = -Pperp Y and G_s = dA/dalpha_s (column s scaled by -r^2):
        dR/dtheta_j = Pperp (dA_j) C - (A^+)^H (dA_j)^H R.
        """
        alphas, A, C, U, pinv_h, R = self._factor(theta)
        m, k = self.Y.shape
        n = A.shape[1]
        G = -self.r2[:, None] * A                     # (M, N)
        D = G[:, None, :] * C.T[None, :, :]           # (M, K, N)
        flat = D.reshape(m, k * n)
        flat = flat - U @ (U.conj().T @ flat)
        P1 = flat.reshape(m, k, n)
        W = G.conj().T @ R                            # (N, K) rows g_s^H R
        base2 = np.einsum("ms,sk->mks", pinv_h, W)
        cols = np.empty((m, k, 2 * n), dtype=complex)
        cols[:, :, :n] = (P1 - base2) * np.exp(theta[:n])[None, None, :]
        cols[:, :, n:] = (P1 + base2) * 1j
        cols = cols.reshape(m * k, 2 * n)
        return np.concatenate([cols.real, cols.imag]) / self.norm

    def solve_at(self, theta: np.ndarray):
        alphas, _, C, _, _, R = self._factor(theta)
        col_norms = np.linalg.norm(self.Y, axis=0)
        rel = np.linalg.norm(R, axis=0) / np.where(col_norms > 0, col_norms, 1.0)
        return alphas, C, rel

    def cost(self, theta: np.ndarray) -> float:
        res = self.residuals(theta)
        return float(res @ res)


def _ladder_starts(rng, n: int, n_starts: int, r_max: float, im_bound: float):
    """Even-tempered real ladder with stratified imaginary parts."""
    a_min = 1.0 / (2.0 * r_max * r_max)
    a_max = 50.0
    starts = []
    for s in range(n_starts):
        ratio = (a_max / a_min) ** (1.0 / max(n - 1, 1))
        jitter = rng.uniform(-0.15, 0.15, size=n) if s > 0 else np.zeros(n)
        re = a_min * ratio ** (np.arange(n) + jitter)
        # stratified imaginary parts: alternate signs over |Im| strata
        strata = (np.arange(n) + rng.uniform(0.0, 1.0, size=n)) / n
        signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        im = signs * strata * im_bound
        if s > 0:
            im = rng.permutation(im)
        starts.append(re + 1j * im)
    return starts


def _grow_starts(rng, incumbent: np.ndarray, n_new: int, n_starts: int,
                 r_max: float, im_bound: float):
    """Starts for a growth stage: incumbent exponents plus fresh ones."""
    starts = []
    a_min = 1.0 / (2.0 * r_max * r_max)
    for s in range(n_starts):
        re = np.exp(rng.uniform(np.log(a_min), np.log(50.0), size=n_new))
        im = rng.uniform(-im_bound, im_bound, size=n_new)
        starts.append(np.concatenate([incumbent, re + 1j * im]))
    return starts


def _fit_channel(r, l, Y, n_gaussians, rng, opts: FitOptions, im_bound,
                 warm: np.ndarray | None = None):
    """Staged-growth variable projection for one partial wave.

    The nonlinear search runs on a subgrid dense enough to resolve the
    fastest admissible oscillation; the returned coefficients/residuals
    come from a final linear solve on the full grid.
    """
    stride = max(1, round(len(r) / opts.opt_points))
    obj = _VarProObjective(r[::stride], l, Y[::stride])
    obj_full = _VarProObjective(r, l, Y) if stride > 1 else obj
    im_cap = max(im_bound * 1.4, 2.0 * math.pi)   # TRF box on Im(alpha)

    def local_descent(alpha0: np.ndarray, max_nfev: int):
        theta0 = _alphas_to_params(alpha0)
        n = len(alpha0)
        lb = np.concatenate([np.full(n, -46.0), np.full(n, -im_cap)])
        ub = np.concatenate([np.full(n, 8.0), np.full(n, im_cap)])
        theta0 = np.clip(theta0, lb + 1e-9, ub - 1e-9)
        res = least_squares(
            obj.residuals,
            theta0,
            jac=obj.jacobian,
            method="trf",
            tr_solver="lsmr",
            bounds=(lb, ub),
            ftol=opts.ftol,
            xtol=opts.xtol,
            gtol=1e-14,
            max_nfev=max_nfev,
            x_scale="jac",
        )
        return res.x, float(np.sum(res.fun**2))

    stage_sizes = list(range(5, n_gaussians, 5)) + [n_gaussians]
    if n_gaussians <= 5:
        stage_sizes = [n_gaussians]

    best_theta = None
    incumbent = None
    for stage_idx, size in enumerate(stage_sizes):
        final = stage_idx == len(stage_sizes) - 1
        cap = opts.max_nfev_final if final else opts.max_nfev_stage
        if incumbent is None:
            starts = _ladder_starts(rng, size, opts.n_starts, r[-1], im_bound)
            if warm is not None and len(warm) == size:
                starts.insert(0, warm.copy())
        else:
            n_new = size - len(incumbent)
            starts = _grow_starts(rng, incumbent, n_new, opts.n_starts_grow,
                                  r[-1], im_bound)
            if warm is not None and len(warm) == size:
                starts.append(warm.copy())
        best_theta = None
        best_cost = np.inf
        for alpha0 in starts:
            theta, cost = local_descent(alpha0, cap)
            if cost < best_cost - 1e-16:
                best_cost = cost
                best_theta = theta
        # a grown candidate can only add columns, so the incumbent padded
        # with spare Gaussians is a guaranteed floor; keep it if descent
        # somehow regressed
        if incumbent is not None:
            theta_inc = _alphas_to_params(
                np.concatenate([incumbent,
                                np.full(size - len(incumbent), 1.0 + 0.0j)])
            )
            cost_inc = obj.cost(theta_inc)
            if cost_inc < best_cost:
                best_cost = cost_inc
                best_theta = theta_inc
        incumbent = _params_to_alphas(best_theta)

    return obj_full.solve_at(best_theta)


def fit_basis(
    targets: RadialGrid,
    n_gaussians: int,
    seed: int,
    options: FitOptions | None = None,
) -> ComplexGaussianBasis:
    """Fit every partial wave of the target grid.

    Deterministic for a fixed seed: all random draws come from one
    generator consumed in a fixed order.  On failure to reach the residual
    ceiling the best basis found is still returned, flagged via
    ``converged=False``.
    """
    if n_gaussians < 1:
        raise DomainError("need at least one Gaussian")
    opts = options or FitOptions()
    l_count, n_energy, _ = targets.values.shape
    k_max = float(np.max(targets.energies))
    im_bound = opts.im_bound if opts.im_bound > 0 else k_max * k_max

    rng = np.random.default_rng(seed)
    exponents = np.empty((l_count, n_gaussians), dtype=complex)
    coefficients = np.empty((l_count, n_energy, n_gaussians), dtype=complex)
    residuals = np.empty((l_count, n_energy))

    warm = None
    for l in range(l_count):
        Y = targets.values[l].T.copy()   # grid values are already the conjugated target
        alphas, C, rel = _fit_channel(
            targets.points, l, Y, n_gaussians, rng, opts, im_bound, warm=warm
        )
        exponents[l] = alphas
        coefficients[l] = C.T
        residuals[l] = rel
        warm = alphas

    basis = ComplexGaussianBasis(
        r_max=targets.r_max,
        energies=targets.energies.copy(),
        exponents=exponents,
        coefficients=coefficients,
        residuals=residuals,
        seed=seed,
        charge=targets.charge,
        converged=bool(np.all(residuals <= opts.residual_ceiling)),
    )
    basis.check()
    return basis


# ----------------------------------------------------------------------
# persistence: structured text document with [re, im] complex pairs
# ----------------------------------------------------------------------

def _complex_out(arr: np.ndarray):
    return [[float(v.real), float(v.imag)] for v in arr]


def _complex_in(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=complex)


def basis_to_document(basis: ComplexGaussianBasis) -> str:
    doc = {
        "format_version": FMT_VERSION,
        "n_gaussians": basis.n_gaussians,
        "l_max": basis.l_max,
        "r_max": basis.r_max,
        "seed": basis.seed,
        "charge": basis.charge,
        "converged": basis.converged,
        "energies": [float(k) for k in basis.energies],
        "exponents": [_complex_out(basis.exponents[l])
                      for l in range(basis.l_max + 1)],
        "coefficients": [
            [_complex_out(basis.coefficients[l, k])
             for k in range(len(basis.energies))]
            for l in range(basis.l_max + 1)
        ],
        "residuals": [[float(x) for x in row] for row in basis.residuals],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def document_to_basis(text: str) -> ComplexGaussianBasis:
    doc = json.loads(text)
    if doc.get("format_version") != FMT_VERSION:
        raise ConfigurationError("unsupported basis file version")
    l_count = doc["l_max"] + 1
    basis = ComplexGaussianBasis(
        r_max=float(doc["r_max"]),
        energies=np.array(doc["energies"], dtype=float),
        exponents=np.array([_complex_in(doc["exponents"][l])
                            for l in range(l_count)]),
        coefficients=np.array(
            [[_complex_in(row) for row in doc["coefficients"][l]]
             for l in range(l_count)]
        ),
        residuals=np.array(doc["residuals"], dtype=float),
        seed=int(doc["seed"]),
        charge=doc["charge"],
        converged=bool(doc["converged"]),
    )
    basis.check()
    return basis


def save_basis(basis: ComplexGaussianBasis, path) -> None:
    with open(path, "w") as fh:
        fh.write(basis_to_document(basis))


def load_basis(path) -> ComplexGaussianBasis:
    with open(path) as fh:
        return document_to_basis(fh.read())
