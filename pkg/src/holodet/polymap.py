"""Sparse polynomials in split blocks of complex variables (z, w).

Used to manufacture closed mixed forms with a symbolic mixed-derivative
oracle: for a polynomial g(z, w) the matrix of coefficients
Omega_ij = d^2 g / dz^i dw^j is closed by symmetry of mixed partials, and
the cone potential it generates has the closed form
g(z, w) - g(z0, w) - g(z, w0) + g(z0, w0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Monomial = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class PolyMap:
    """Polynomial sum of c * z^alpha * w^beta with multi-indices per block."""

    dim: int
    terms: dict[Monomial, complex]

    def __call__(self, z, w) -> np.ndarray:
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        w = np.atleast_2d(np.asarray(w, dtype=complex))
        out = np.zeros(z.shape[0], dtype=complex)
        for (alpha, beta), c in self.terms.items():
            term = np.full(z.shape[0], c, dtype=complex)
            for k, a in enumerate(alpha):
                if a:
                    term *= z[:, k] ** a
            for k, b in enumerate(beta):
                if b:
                    term *= w[:, k] ** b
            out += term
        return out

    def at(self, z, w) -> complex:
        zv = np.atleast_1d(np.asarray(z, dtype=complex))
        wv = np.atleast_1d(np.asarray(w, dtype=complex))
        return complex(self(zv[None, :], wv[None, :])[0])

    def dz(self, i: int) -> "PolyMap":
        out: dict[Monomial, complex] = {}
        for (alpha, beta), c in self.terms.items():
            if alpha[i] == 0:
                continue
            a = list(alpha)
            a[i] -= 1
            key = (tuple(a), beta)
            out[key] = out.get(key, 0.0) + c * alpha[i]
        return PolyMap(self.dim, out)

    def dw(self, j: int) -> "PolyMap":
        out: dict[Monomial, complex] = {}
        for (alpha, beta), c in self.terms.items():
            if beta[j] == 0:
                continue
            b = list(beta)
            b[j] -= 1
            key = (alpha, tuple(b))
            out[key] = out.get(key, 0.0) + c * beta[j]
        return PolyMap(self.dim, out)

    def mixed_coefficient_evaluator(self):
        """Batched evaluator of the n x n matrix d^2 g / dz^i dw^j."""
        n = self.dim
        parts = [[self.dz(i).dw(j) for j in range(n)] for i in range(n)]

        def coeff(zpts: np.ndarray, wpts: np.ndarray) -> np.ndarray:
            zpts = np.atleast_2d(np.asarray(zpts, dtype=complex))
            wpts = np.atleast_2d(np.asarray(wpts, dtype=complex))
            out = np.empty((zpts.shape[0], n, n), dtype=complex)
            for i in range(n):
                for j in range(n):
                    out[:, i, j] = parts[i][j](zpts, wpts)
            return out

        return coeff


def monomials_up_to(dim: int, degree: int) -> list[Monomial]:
    """All (alpha, beta) with total degree over both blocks <= degree."""

    def block(total: int, n: int):
        if n == 1:
            for a in range(total + 1):
                yield (a,)
            return
        for a in range(total + 1):
            for rest in block(total - a, n - 1):
                yield (a,) + rest

    out = []
    for d_alpha in range(degree + 1):
        for alpha in block(d_alpha, dim):
            if sum(alpha) != d_alpha:
                continue
            for beta in block(degree - d_alpha, dim):
                out.append((alpha, beta))
    return sorted(set(out))


def random_polymap(dim: int, degree: int, n_terms: int, rng: np.random.Generator) -> PolyMap:
    """Deterministic random polynomial: coefficients in the unit box."""
    pool = monomials_up_to(dim, degree)
    picks = rng.choice(len(pool), size=min(n_terms, len(pool)), replace=False)
    terms = {}
    for p in sorted(picks):
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        terms[pool[int(p)]] = c
    return PolyMap(dim, terms)
