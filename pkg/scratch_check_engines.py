"""Scratch: engines vs direct quadrature on a synthetic 2-Gaussian basis."""
import math
import numpy as np
from scipy.integrate import quad

from cgdipole.basis import ComplexGaussianBasis
from cgdipole.spherical import j_lm_n0, j_lm_general, g_element
from cgdipole.cartesian import i_lm, cartesian_harmonic_coeffs
from cgdipole.states import SphericalGaussianState, CartesianGaussianState
from cgdipole.special import spherical_harmonic, solid_harmonic, harmonic_polynomial

# synthetic basis: l up to 2, one energy, 2 gaussians
alphas = np.array([
    [0.8 + 0.9j, 1.7 - 0.4j],
    [0.5 + 1.2j, 2.0 + 0.3j],
    [0.9 - 0.7j, 1.1 + 0.5j],
])
coefs = np.array([
    [[0.7 - 0.2j, -0.3 + 0.5j]],
    [[1.1 + 0.4j, 0.2 - 0.6j]],
    [[-0.5 + 0.1j, 0.8 + 0.8j]],
])
basis = ComplexGaussianBasis(
    r_max=25.0, energies=np.array([1.0]),
    exponents=alphas, coefficients=coefs,
    residuals=np.zeros((3, 1)), seed=0,
)

def ub(l, r):
    return r ** (l + 1) * (coefs[l, 0, 0] * np.exp(-alphas[l, 0] * r * r)
                           + coefs[l, 0, 1] * np.exp(-alphas[l, 1] * r * r))

GLC, GLW = np.polynomial.legendre.leggauss(80)

def ybar(l, c):
    # Y_l^0 as a function of cos(theta)
    from numpy.polynomial.legendre import Legendre
    leg = Legendre.basis(l)(c)
    return math.sqrt((2 * l + 1) / (4 * math.pi)) * leg

def j_quad(l, state):
    beta, R = state.beta, state.center[2]
    li, ni = state.l, state.n
    def radial(r):
        inner = 0.0
        for c, w in zip(GLC, GLW):
            v = np.array([r * math.sqrt(max(0.0, 1 - c * c)), 0.0, r * c - R])
            sh = harmonic_polynomial(ni, li, 0, v).real
            inner += w * ybar(l, c) * ybar(1, c) * math.exp(-beta * (r * r + R * R - 2 * r * R * c)) * sh
        return inner
    re = quad(lambda r: (ub(l, r) * r * r).real * radial(r), 0, 14, limit=300)[0]
    im = quad(lambda r: (ub(l, r) * r * r).imag * radial(r), 0, 14, limit=300)[0]
    return 2 * math.pi * complex(re, im)

def i_quad(l, state):
    beta, R = state.beta, state.center[2]
    nz = state.nz
    def radial(r):
        inner = 0.0
        for c, w in zip(GLC, GLW):
            inner += w * ybar(l, c) * (r * c) * (r * c - R) ** nz * math.exp(-beta * (r * r + R * R - 2 * r * R * c))
        return inner
    re = quad(lambda r: (ub(l, r) * r).real * radial(r), 0, 14, limit=300)[0]
    im = quad(lambda r: (ub(l, r) * r).imag * radial(r), 0, 14, limit=300)[0]
    return 2 * math.pi * complex(re, im)

print("=== 1s SGTF (n=l=m=0), R=(0,0,1), beta=0.5 ===")
s1 = SphericalGaussianState(0, 0, 0, 0.5, (0.0, 0.0, 1.0))
for l in [0, 1, 2]:
    closed = j_lm_n0(l, 0, s1, basis, 0)
    gen = j_lm_general(l, 0, s1, basis, 0)
    ref = j_quad(l, s1)
    print(f"l={l} closed {closed:.10g}  general {gen:.10g}  quad {ref:.10g}  "
          f"dn0 {abs(closed-ref):.2e} dgen {abs(gen-ref):.2e}")

print("=== CGTF(0,0,0) same beta/R: i_lm vs quad and vs (4pi/sqrt3) j ===")
c1 = CartesianGaussianState(0, 0, 0, 0.5, (0.0, 0.0, 1.0))
for l in [0, 1, 2]:
    closed = i_lm(l, 0, c1, basis, 0)
    ref = i_quad(l, c1)
    jj = j_lm_n0(l, 0, s1, basis, 0)
    print(f"l={l} closed {closed:.10g}  quad {ref:.10g}  diff {abs(closed-ref):.2e}  "
          f"ratio/J {abs(closed / jj) if jj != 0 else float('nan'):.10g} vs {4*math.pi/math.sqrt(3):.10g}")

print("=== p_z SGTF (l_i=1): j vs quad ===")
s2 = SphericalGaussianState(0, 1, 0, 0.4, (0.0, 0.0, 0.8))
for l in [0, 1, 2]:
    closed = j_lm_n0(l, 0, s2, basis, 0)
    ref = j_quad(l, s2)
    print(f"l={l} closed {closed:.10g}  quad {ref:.10g}  diff {abs(closed-ref):.2e}")

print("=== CGTF(0,0,1) vs SGTF(0,1,0): i = (4pi/sqrt3)/sqrt(3/4pi) j? ===")
c2 = CartesianGaussianState(0, 0, 1, 0.4, (0.0, 0.0, 0.8))
for l in [0, 1, 2]:
    closed = i_lm(l, 0, c2, basis, 0)
    ref = i_quad(l, c2)
    print(f"l={l} closed {closed:.10g}  quad {ref:.10g}  diff {abs(closed-ref):.2e}")

print("=== n_i=1 SGTF general: j_lm_general vs quad ===")
s3 = SphericalGaussianState(1, 0, 0, 0.5, (0.0, 0.0, 1.0))
for l in [0, 1, 2]:
    gen = j_lm_general(l, 0, s3, basis, 0)
    ref = j_quad(l, s3)
    print(f"l={l} general {gen:.10g}  quad {ref:.10g}  diff {abs(gen-ref):.2e}")

print("=== monocentric R=0 ===")
s0 = SphericalGaussianState(0, 0, 0, 0.5, (0.0, 0.0, 0.0))
for l in [0, 1, 2]:
    closed = j_lm_n0(l, 0, s0, basis, 0)
    # direct: <l 0|1 0|0 0> * Gamma(p)/2 * sum c (a+b)^-p
    from cgdipole.special import gaunt
    import cmath
    p = 0.5 * (l + 0 + 4)
    rad = sum(coefs[l, 0, s] * cmath.exp(-p * cmath.log(alphas[l, s] + 0.5)) for s in range(2))
    direct = gaunt(l, 0, 1, 0, 0, 0) * math.gamma(p) / 2 * rad
    print(f"l={l} closed {closed:.10g} direct {direct:.10g} diff {abs(closed-direct):.2e}")
