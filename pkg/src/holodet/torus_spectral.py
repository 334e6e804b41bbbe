"""Flat-torus Laplacian: spectrum, heat trace, and zeta-regularized determinant.

The torus with modulus z in H is C/(Z + zZ) with the flat metric inherited
from C (area y = Im z).  Its Laplace spectrum is the dual-lattice family

    lambda_{m,n} = 4 pi^2 (m^2 + (n - m x)^2 / y^2),   (m, n) in Z^2,

with the zero mode at (0,0).  Re(z) is reduced mod 1 before enumeration;
this leaves the lattice Z + zZ (hence the spectrum) unchanged and makes the
boxed enumeration invariant under z -> z + 1.

``zeta_log_det`` evaluates log det'(Delta) = -zeta'(0) by the split-integral
method: Gamma(s) zeta(s) = int_0^s0 t^{s-1} (Theta(t) - 1) dt + int_{s0}^inf,
with the divergent small-t part (A/4pi t - 1) integrated in closed form and
the exponentially small remainders integrated numerically on a log grid.
The modulus is first reduced to the standard fundamental domain; the unit
translation and the inversion z -> -1/z act on the lattice by similarities,
and the determinant is reported for the canonical representative so that the
result is invariant under both generators.  All lattice sums carry certified
geometric tail bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetError, DomainError
from .special_functions import canonical_modulus, eta, require_upper_half

FOUR_PI_SQ = 4.0 * math.pi ** 2


@dataclass(frozen=True)
class SpectralTruncation:
    """Regularization bookkeeping for heat-trace and zeta evaluations."""

    split_time: float = 1.0
    lattice_radius: int = 64
    quadrature_nodes: int = 64
    tail_tolerance: float = 1e-10

    def __post_init__(self):
        if self.split_time <= 0:
            raise ValueError("split_time must be positive")
        if self.lattice_radius < 1:
            raise ValueError("lattice_radius must be >= 1")
        if self.quadrature_nodes < 2:
            raise ValueError("quadrature_nodes must be >= 2")
        if self.tail_tolerance <= 0:
            raise ValueError("tail_tolerance must be positive")


@dataclass(frozen=True)
class TorusSpectrum:
    modulus: complex
    truncation_radius: int
    eigenvalues: np.ndarray  # sorted ascending; zero mode included once


@dataclass(frozen=True)
class SpectralDetResult:
    """log det'(Delta) with its zeta(0) diagnostic and tail certificate."""

    log_det: float
    zeta_zero: float
    tail_bound: float
    modulus: complex  # canonical representative actually used


def _reduced_x(z: complex) -> float:
    return z.real - math.floor(z.real + 0.5)


def torus_eigenvalues(z: complex, radius: int) -> TorusSpectrum:
    """All lambda_{m,n} for |m|, |n| <= radius, sorted ascending."""
    z = require_upper_half(z)
    radius = int(radius)
    if radius < 1:
        raise ValueError("radius must be >= 1")
    x, y = _reduced_x(z), z.imag
    idx = np.arange(-radius, radius + 1)
    m, n = np.meshgrid(idx, idx, indexing="ij")
    lam = FOUR_PI_SQ * (m ** 2 + (n - m * x) ** 2 / y ** 2)
    lam = np.sort(lam.ravel())
    return TorusSpectrum(z, radius, lam)


def _gauss_tail(a: float, start: float) -> float:
    """Bound for sum_{k>=0} exp(-a (start+k)^2), start >= 0, a > 0."""
    e0 = a * start * start
    if e0 > 700.0:
        return 0.0
    r = math.exp(-a * (2.0 * start + 1.0))
    return math.exp(-e0) / (1.0 - r)


def _lattice_gauss_sum(a_out: float, a_in: float, x: float, target: float, cap: int):
    """sum over (j,k) in Z^2 of exp(-a_out j^2 - a_in (k - j x)^2), |x| <= 1/2.

    Returns (value, tail_bound, J, K); raises BudgetError when the certified
    tail cannot reach ``target`` within box radius ``cap``.
    """
    s_in_all = 1.0 + math.sqrt(math.pi / a_in)

    guess = math.ceil(math.sqrt(max(math.log(4.0 * s_in_all / target), 1.0) / a_out))
    J = max(1, min(guess, cap))
    while 2.0 * s_in_all * _gauss_tail(a_out, J + 1) > 0.5 * target:
        J += max(1, J // 4)
        if J > cap:
            raise BudgetError("lattice sum tail cannot reach tolerance within radius cap")
    t_out = 2.0 * s_in_all * _gauss_tail(a_out, J + 1)

    s_out_box = 1.0 + 2.0 * _gauss_tail(a_out, 1.0)
    guess = math.ceil(0.5 * J + math.sqrt(max(math.log(4.0 * s_out_box / target), 1.0) / a_in))
    K = max(1, min(guess, 2 * cap))
    while 2.0 * s_out_box * _gauss_tail(a_in, max(K + 1 - 0.5 * J, 0.5)) > 0.5 * target:
        K += max(1, K // 4)
        if K > 2 * cap:
            raise BudgetError("lattice sum tail cannot reach tolerance within radius cap")
    t_in = 2.0 * s_out_box * _gauss_tail(a_in, max(K + 1 - 0.5 * J, 0.5))

    j = np.arange(-J, J + 1)
    k = np.arange(-K, K + 1)
    jj, kk = np.meshgrid(j, k, indexing="ij")
    expo = a_out * jj.astype(float) ** 2 + a_in * (kk - jj * x) ** 2
    value = float(np.sum(np.exp(-expo)))
    return value, t_out + t_in, J, K


def _theta_direct(z: complex, t: float, trunc: SpectralTruncation):
    """Theta(t) by direct eigenvalue summation, with tail bound."""
    x, y = _reduced_x(z), z.imag
    a_out = FOUR_PI_SQ * t            # coefficient of m^2
    a_in = FOUR_PI_SQ * t / (y * y)   # coefficient of (n - m x)^2
    value, tail, _, _ = _lattice_gauss_sum(a_out, a_in, x, trunc.tail_tolerance, trunc.lattice_radius)
    return value, tail


def _theta_poisson(z: complex, t: float, trunc: SpectralTruncation, drop_origin: bool = False):
    """Theta(t) = (A/4 pi t) sum_{u in Z+zZ} exp(-|u|^2/4t), with tail bound.

    With ``drop_origin`` the u = 0 term is excluded, giving the remainder
    R(t) = Theta(t) - A/(4 pi t) without cancellation.
    """
    x, y = _reduced_x(z), z.imag
    pref = y / (4.0 * math.pi * t)
    a_out = y * y / (4.0 * t)   # coefficient of q^2 in |p + q z|^2
    a_in = 1.0 / (4.0 * t)      # coefficient of (p + q x)^2
    target = trunc.tail_tolerance / max(pref, 1.0)
    value, tail, _, _ = _lattice_gauss_sum(a_out, a_in, -x, target, trunc.lattice_radius)
    if drop_origin:
        value -= 1.0
    return pref * value, pref * tail


def heat_trace(z: complex, t: float, trunc: SpectralTruncation | None = None,
               method: str = "auto") -> float:
    """Heat trace Theta(t) = sum over the spectrum of exp(-t lambda).

    For t below ``trunc.split_time`` the Poisson-summed form is used, above
    it the direct eigenvalue sum; ``method`` may force either path.  The
    certified truncation tail is kept below ``trunc.tail_tolerance``.
    """
    z = require_upper_half(z)
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    trunc = trunc or SpectralTruncation()
    if method == "auto":
        method = "poisson" if t < trunc.split_time else "direct"
    if method == "direct":
        value, tail = _theta_direct(z, t, trunc)
    elif method == "poisson":
        value, tail = _theta_poisson(z, t, trunc)
    else:
        raise ValueError(f"unknown method {method!r}")
    if tail > trunc.tail_tolerance:
        raise BudgetError(f"heat trace tail bound {tail:.3e} exceeds tolerance")
    return value


@lru_cache(maxsize=32)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def _gl_nodes(a: float, b: float, n: int):
    xs, ws = _gauss_legendre(n)
    half = 0.5 * (b - a)
    return a + half * (xs + 1.0), half * ws


def _shortest_vector_sq(z: complex) -> float:
    best = math.inf
    for p in (-1, 0, 1):
        for q in (-1, 0, 1):
            if p == 0 and q == 0:
                continue
            best = min(best, abs(p + q * z) ** 2)
    return best


def zeta_log_det(z: complex, trunc: SpectralTruncation | None = None) -> SpectralDetResult:
    """log det'(Delta) = -zeta'(0) for the flat torus of modulus z.

    The modulus is reduced to the fundamental domain first (see module
    docstring), so the result is invariant under z -> z + 1 and z -> -1/z.
    The closed-form small-t part fixes zeta(0) = -1 exactly; the reported
    ``zeta_zero`` diagnostic instead measures the constant heat-trace
    coefficient numerically, so it carries real information about the
    pipeline (it must come out as -1 + O(tail)).
    """
    trunc = trunc or SpectralTruncation()
    zc = canonical_modulus(z)
    y = zc.imag
    area = y
    s0 = trunc.split_time
    n_gl = trunc.quadrature_nodes

    ell_sq = _shortest_vector_sq(zc)  # = 1 on the fundamental domain
    t_min = ell_sq / 180.0

    # Remainder R(t) = Theta(t) - A/(4 pi t), summed without cancellation.
    def remainder(t: float):
        return _theta_poisson(zc, t, trunc, drop_origin=True)

    # cutoff bound for int_0^{t_min} R(t)/t dt
    s_small, s_small_tail = remainder(t_min)
    s0_sum = s_small * (4.0 * math.pi * t_min) / y  # lattice sum without prefactor
    cut_low = area * (s0_sum + 1e-300) / (math.pi * ell_sq)

    tail_total = cut_low + s_small_tail

    # int_{t_min}^{s0} R(t)/t dt, log substitution t = e^u
    us, ws = _gl_nodes(math.log(t_min), math.log(s0), n_gl)
    i_low = 0.0
    for u, w in zip(us, ws):
        val, tl = remainder(math.exp(u))
        i_low += w * val
        tail_total += abs(w) * tl

    # upper cutoff T_max from the certified decay of Theta(t) - 1
    lam1 = FOUR_PI_SQ * min(1.0, 1.0 / (y * y))
    theta_s0, theta_s0_tail = _theta_direct(zc, s0, trunc)
    m_b = (theta_s0 - 1.0 + theta_s0_tail) * math.exp(lam1 * s0)
    t_max = 2.0 * s0
    for _ in range(400):
        if m_b * math.exp(-lam1 * t_max) / (lam1 * t_max) <= trunc.tail_tolerance / 10.0:
            break
        t_max *= 1.5
    cut_high = m_b * math.exp(-lam1 * t_max) / (lam1 * t_max)
    tail_total += cut_high + theta_s0_tail

    # int_{s0}^{T_max} (Theta(t) - 1)/t dt, same log substitution
    us, ws = _gl_nodes(math.log(s0), math.log(t_max), n_gl)
    i_high = 0.0
    for u, w in zip(us, ws):
        val, tl = _theta_direct(zc, math.exp(u), trunc)
        i_high += w * (val - 1.0)
        tail_total += abs(w) * tl

    if tail_total > trunc.tail_tolerance * 10.0:
        raise BudgetError(f"aggregate tail bound {tail_total:.3e} exceeds budget")

    h0 = i_low + i_high
    log_det = np.euler_gamma + math.log(s0) + area / (4.0 * math.pi * s0) - h0

    # zeta(0) diagnostic: measured constant term of the heat expansion minus
    # the zero-mode count; the flat torus has no constant term.
    zeta_zero = s_small - 1.0

    return SpectralDetResult(float(log_det), float(zeta_zero), float(tail_total), zc)


def closed_form_log_det(z: complex) -> float:
    """log(2 pi y^{1/2} |eta(z)|^2), the classical closed-form expression.

    Note this normalization and the spectral y^2 |eta|^4 one differ; the
    verification suite measures which one the spectral oracle matches
    instead of hardcoding either (see ``holodet.verify``).
    """
    z = require_upper_half(z)
    return math.log(2.0 * math.pi) + 0.5 * math.log(z.imag) + 2.0 * math.log(abs(eta(z)))
