"""Finite-difference Wirtinger derivatives with Richardson extrapolation.

All helpers take a callable of one complex variable (values may be complex
scalars or numpy arrays) and use 2nd-order central differences; with
``refine=True`` one Richardson step lifts the truncation error to O(h^4).
"""

from __future__ import annotations

import numpy as np


def _dx_dy(f, p: complex, h: float):
    fx = (f(p + h) - f(p - h)) / (2.0 * h)
    fy = (f(p + 1j * h) - f(p - 1j * h)) / (2.0 * h)
    return fx, fy


def wirtinger_dz(f, p: complex, h: float = 1e-3, refine: bool = True):
    """d/dz = (d/dx - i d/dy)/2 at p; equals f'(p) for holomorphic f."""

    def one(step):
        fx, fy = _dx_dy(f, p, step)
        return 0.5 * (fx - 1j * fy)

    if not refine:
        return one(h)
    return (4.0 * one(0.5 * h) - one(h)) / 3.0


def wirtinger_dzbar(f, p: complex, h: float = 1e-3, refine: bool = True):
    """d/dzbar = (d/dx + i d/dy)/2 at p; vanishes for holomorphic f."""

    def one(step):
        fx, fy = _dx_dy(f, p, step)
        return 0.5 * (fx + 1j * fy)

    if not refine:
        return one(h)
    return (4.0 * one(0.5 * h) - one(h)) / 3.0


def antiholomorphic_residual(f, p: complex, h: float = 1e-3) -> float:
    """max |d/dzbar f| entrywise, as a holomorphy check at p."""
    r = wirtinger_dzbar(f, p, h)
    return float(np.max(np.abs(r)))


def mixed_second(q, z: complex, w: complex, h: float = 1e-3, refine: bool = True):
    """d^2 q / dz dw by a central 4-point stencil on holomorphic directions."""

    def one(step):
        return (
            q(z + step, w + step)
            - q(z + step, w - step)
            - q(z - step, w + step)
            + q(z - step, w - step)
        ) / (4.0 * step * step)

    if not refine:
        return one(h)
    return (4.0 * one(0.5 * h) - one(h)) / 3.0


def dz_dzbar(u, p: complex, h: float = 1e-3, refine: bool = True):
    """d^2 u / dz dzbar = Laplacian/4 of a real-valued function at p."""

    def one(step):
        lap = (
            u(p + step) + u(p - step) + u(p + 1j * step) + u(p - 1j * step) - 4.0 * u(p)
        ) / (step * step)
        return 0.25 * lap

    if not refine:
        return one(h)
    return (4.0 * one(0.5 * h) - one(h)) / 3.0
