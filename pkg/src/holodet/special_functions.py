"""Branch-managed complex elementary functions and the Dedekind eta function.

Conventions used throughout the library:

* principal branch: Arg in (-pi, pi];
* upper half plane H: Im(z) > 0;
* nome q = exp(2*pi*i*z), so |q| = exp(-2*pi*Im(z)) < 1 on H;
* eta(z) = q^(1/24) * prod_{n>=1} (1 - q^n), with q^(1/24) read as
  exp(pi*i*z/12).

``eta`` moves its argument with the exact unit translation z -> z - k and the
inversion eta(z) = eta(-1/z) / sqrt(-i z) until Im(z) is large enough for the
q-product to converge rapidly.  ``log_eta`` always sums the canonical series

    pi*i*z/12 + sum_{n>=1} Log(1 - q^n),

which is the analytic branch of log(eta) on all of H: every factor 1 - q^n
has positive real part because |q^n| < 1, so each principal Log is safe.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchPathError, BudgetError, DomainError

TWO_PI = 2.0 * math.pi

#: Hard cap on q-product / q-series terms.  Only reachable for log_eta at
#: heights Im(z) below roughly 2e-5; eta itself reduces the argument first.
MAX_ETA_TERMS = 200_000

#: Below this height the product converges too slowly; reduce first.
_REDUCE_HEIGHT = 0.05

#: The geometric tail bound for the q-series is used only for |q| <= this
#: (where |log(1-u)| <= 2|u| still holds); after reduction |q| <= 0.731.
_TAIL_BOUND_MAX_Q = 0.79

_DEFAULT_REL_TOL = 1e-15


def require_upper_half(z: complex, what: str = "z") -> complex:
    """Validate Im(z) > 0 and return z as a complex number."""
    z = complex(z)
    if not z.imag > 0.0:
        raise DomainError(f"Im({what}) must be positive, got {z!r}")
    return z


def _principal_winding(value: complex) -> int:
    """Winding index w with Im(value) - 2*pi*w in (-pi, pi]."""
    w = round(value.imag / TWO_PI)
    d = value.imag - TWO_PI * w
    if d <= -math.pi:
        w -= 1
    elif d > math.pi:
        w += 1
    return int(w)


@dataclass(frozen=True)
class BranchedLog:
    """A complex logarithm value with an explicit winding index.

    ``value`` is the logarithm on its chosen sheet; ``winding`` counts full
    2*pi crossings relative to the principal branch, so that
    value - winding*2*pi*i always lies in the principal strip Im in (-pi, pi].
    """

    value: complex
    winding: int

    def __post_init__(self):
        d = self.value.imag - TWO_PI * self.winding
        if not (-math.pi - 1e-9 < d <= math.pi + 1e-9):
            raise ValueError(
                f"winding {self.winding} inconsistent with Im(value) = {self.value.imag!r}"
            )

    @classmethod
    def principal(cls, u: complex) -> "BranchedLog":
        """Principal logarithm of u != 0 with winding 0."""
        u = complex(u)
        if u == 0:
            raise DomainError("log of zero")
        return cls(cmath.log(u), 0)


def continue_log(path, initial: BranchedLog) -> BranchedLog:
    """Analytically continue a logarithm along a path of nonzero points.

    ``initial`` must be a logarithm of the first path point.  Consecutive
    points must differ in argument by less than pi/2; refine the path
    otherwise.  The returned winding is updated whenever the continuation
    crosses the principal cut.
    """
    pts = [complex(p) for p in path]
    if not pts:
        raise BranchPathError("empty path")
    for p in pts:
        if p == 0:
            raise BranchPathError("path passes through 0, where log is singular")
    if abs(cmath.exp(initial.value) - pts[0]) > 1e-12 * abs(pts[0]):
        raise BranchPathError("initial value is not a logarithm of the first path point")
    val = initial.value
    for a, b in zip(pts, pts[1:]):
        step = cmath.log(b / a)
        if abs(step.imag) >= 0.5 * math.pi:
            raise BranchPathError(
                "consecutive path points differ in argument by >= pi/2; refine the path"
            )
        val += step
    return BranchedLog(val, _principal_winding(val))


def half_power(u: complex, branch_hint: BranchedLog | None = None) -> complex:
    """Branch-consistent square root exp(L/2), L a chosen log of u.

    Without a hint the principal branch is used.  A hint shifts the sheet:
    L = Log(u) + 2*pi*i*hint.winding, so winding -1 on u = -1 gives -i.
    """
    u = complex(u)
    if u == 0:
        raise DomainError("half_power of zero")
    ell = cmath.log(u)
    if branch_hint is not None:
        ell += TWO_PI * 1j * branch_hint.winding
    return cmath.exp(0.5 * ell)


def canonical_modulus(z: complex) -> complex:
    """Reduce z in H to the standard fundamental domain |Re| <= 1/2, |z| >= 1.

    Uses only the exact lattice moves z -> z - k and z -> -1/z, so the
    associated torus is unchanged up to isometry class of its similarity
    orbit.  The loop terminates because each inversion strictly increases
    Im(z) while |z| < 1.
    """
    z = require_upper_half(z)
    for _ in range(256):
        k = math.floor(z.real + 0.5)
        if k:
            z = z - k
        if abs(z) < 1.0 - 1e-15:
            z = -1.0 / z
        else:
            return z
    return z  # within float noise of the |z| = 1 boundary


def eta_term_count(z: complex, rel_tol: float = _DEFAULT_REL_TOL) -> int:
    """Number of product terms so the dropped tail is below rel_tol (relative).

    Uses sum_{n>N} |log(1 - q^n)| <= 2|q|^{N+1} / (1 - |q|).  Raises
    BudgetError when the bound cannot be met within MAX_ETA_TERMS or when
    |q| is too close to 1 for the bound to apply.
    """
    z = require_upper_half(z)
    absq = math.exp(-TWO_PI * z.imag)
    if absq > _TAIL_BOUND_MAX_Q:
        raise BudgetError(
            f"convergence budget exceeded: |q| = {absq:.6f} too close to 1 at Im(z) = {z.imag!r}"
        )
    n = math.ceil(math.log(2.0 / (rel_tol * (1.0 - absq))) / (TWO_PI * z.imag))
    n = max(n, 1)
    if n > MAX_ETA_TERMS:
        raise BudgetError(
            f"convergence budget exceeded: {n} terms needed at Im(z) = {z.imag!r}, cap {MAX_ETA_TERMS}"
        )
    return n


def eta_tail_bound(z: complex, terms: int) -> float:
    """Bound on the relative error of the q-product truncated after ``terms``.

    Returns inf where the geometric bound does not apply (|q| > 0.79).
    """
    z = require_upper_half(z)
    absq = math.exp(-TWO_PI * z.imag)
    if absq > _TAIL_BOUND_MAX_Q:
        return math.inf
    log_tail = 2.0 * absq ** (terms + 1) / (1.0 - absq)
    return math.expm1(log_tail)


def _eta_product(z: complex, terms: int) -> complex:
    q = cmath.exp(2j * math.pi * z)
    qn = q ** np.arange(1, terms + 1)
    return cmath.exp(1j * math.pi * z / 12.0) * complex(np.prod(1.0 - qn))


def eta(z: complex, terms: int | None = None) -> complex:
    """Dedekind eta function on the upper half plane.

    With ``terms=None`` the argument is first reduced (unit translations and
    the inversion) until Im(z) >= 0.05 and the truncation is chosen so the
    dropped tail is below 1e-15 relative.  An explicit ``terms`` evaluates
    the product at z as given with exactly that many factors.
    """
    z = require_upper_half(z)
    if terms is not None:
        terms = int(terms)
        if terms < 1:
            raise ValueError("terms must be a positive integer")
        return _eta_product(z, terms)
    return _eta_reduced(z, 0)


def _eta_reduced(z: complex, depth: int) -> complex:
    if depth > 128:
        raise BudgetError("modular reduction did not converge")
    if z.imag >= _REDUCE_HEIGHT:
        return _eta_product(z, eta_term_count(z))
    k = math.floor(z.real + 0.5)
    if k:
        # eta(z) = exp(-i*pi*k/12) * eta(z) shifted: eta(z'+k) = e^{i pi k/12} eta(z')
        return cmath.exp(1j * math.pi * k / 12.0) * _eta_reduced(z - k, depth + 1)
    # |Re z| <= 1/2 and Im z < 0.05 imply |z| < 1, so inversion raises Im.
    return _eta_reduced(-1.0 / z, depth + 1) / cmath.sqrt(-1j * z)


def log_eta(z: complex) -> complex:
    """Canonical branch of log(eta) on H.

    Sums pi*i*z/12 + sum_n Log(1 - q^n) with the principal Log per term;
    each 1 - q^n has positive real part since |q^n| < 1.  This branch is
    analytic on all of H and satisfies exp(log_eta(z)) = eta(z).
    """
    z = require_upper_half(z)
    absq = math.exp(-TWO_PI * z.imag)
    if not absq < 1.0:
        raise DomainError(f"|q| must be < 1, got {absq!r}")  # unreachable for Im(z) > 0
    if absq <= _TAIL_BOUND_MAX_Q:
        n = eta_term_count(z)
    else:
        # direct series without the geometric shortcut; cap still applies
        n = math.ceil(math.log(1e15 * 2.0 / (1.0 - absq)) / (TWO_PI * z.imag))
        if n > MAX_ETA_TERMS:
            raise BudgetError(
                f"convergence budget exceeded: {n} series terms needed at Im(z) = {z.imag!r}"
            )
    q = cmath.exp(2j * math.pi * z)
    qn = q ** np.arange(1, n + 1)
    return 1j * math.pi * z / 12.0 + complex(np.sum(np.log(1.0 - qn)))


def modular_discriminant(z: complex) -> complex:
    """Weight-12 discriminant eta(z)**24; invariant under z -> z + 1."""
    return eta(z) ** 24
