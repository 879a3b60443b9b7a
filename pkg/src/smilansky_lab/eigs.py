"""Symmetric eigensolvers used throughout the package.

Tridiagonal matrices get Sturm-sequence bisection (certified bracketing of
each eigenvalue) plus inverse iteration for eigenvectors.  Sparse operators
get Lanczos with full reorthogonalization and a deterministic start vector.
Periodic tridiagonals are routed through the Lanczos path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import solve_banded

from .errors import ComputationError, ConvergenceError

__all__ = [
    "TridiagonalSym",
    "LanczosOptions",
    "sturm_count",
    "sturm_smallest",
    "inverse_iteration",
    "lanczos_smallest",
]


@dataclass(frozen=True)
class TridiagonalSym:
    """Symmetric tridiagonal matrix; `corner` adds the periodic wrap entry."""

    d: np.ndarray
    e: np.ndarray
    corner: Optional[float] = None

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        e = np.asarray(self.e, dtype=float)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "e", e)
        if len(e) != len(d) - 1:
            raise ComputationError("off-diagonal must have length n-1")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ComputationError("non-finite matrix entries")

    @property
    def n(self) -> int:
        return len(self.d)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.d * v
        out[:-1] += self.e * v[1:]
        out[1:] += self.e * v[:-1]
        if self.corner is not None:
            out[0] += self.corner * v[-1]
            out[-1] += self.corner * v[0]
        return out

    def gershgorin(self) -> tuple[float, float]:
        r = np.zeros(self.n)
        r[:-1] += np.abs(self.e)
        r[1:] += np.abs(self.e)
        if self.corner is not None:
            r[0] += abs(self.corner)
            r[-1] += abs(self.corner)
        return float(np.min(self.d - r)), float(np.max(self.d + r))


def _sturm_kernel(d, e, x):
    count = 0
    q = d[0] - x
    if q < 0.0:
        count += 1
    tiny = 2.2250738585072014e-308
    for i in range(1, len(d)):
        if q == 0.0:
            q = tiny
        q = d[i] - x - e[i - 1] * e[i - 1] / q
        if q < 0.0:
            count += 1
    return count


try:  # sequential scalar recurrence; JIT makes large grids cheap
    from numba import njit

    _sturm_kernel = njit(cache=True)(_sturm_kernel)
except ImportError:  # pragma: no cover
    pass


def sturm_count(T: TridiagonalSym, x: float) -> int:
    """Number of eigenvalues of T strictly below x (non-periodic only)."""
    if T.corner is not None:
        raise ComputationError("Sturm counts are not defined for the periodic wrap")
    return int(_sturm_kernel(T.d, T.e, float(x)))


def sturm_smallest(T: TridiagonalSym, m: int = 1, tol: float = 1e-12) -> np.ndarray:
    """The m smallest eigenvalues, each bracketed to width <= tol by bisection."""
    lo0, hi0 = T.gershgorin()
    out = np.empty(m)
    for j in range(1, m + 1):
        lo, hi = lo0, hi0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if sturm_count(T, mid) >= j:
                hi = mid
            else:
                lo = mid
        out[j - 1] = 0.5 * (lo + hi)
    return out


def _tridiag_solve(T: TridiagonalSym, shift: float, rhs: np.ndarray) -> np.ndarray:
    ab = np.zeros((3, T.n))
    ab[0, 1:] = T.e
    ab[1] = T.d - shift
    ab[2, :-1] = T.e
    return solve_banded((1, 1), ab, rhs)


def inverse_iteration(T: TridiagonalSym, theta: float, tol: float = 1e-10,
                      max_iter: int = 50, seed: int = 0) -> np.ndarray:
    """Unit eigenvector for the eigenvalue nearest theta.

    A singular shifted solve is retried with the shift nudged by +-10*tol,
    at most 5 times.
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(T.n)
    v /= np.linalg.norm(v)
    shift = theta
    for attempt in range(5):
        try:
            for _ in range(max_iter):
                with np.errstate(all="raise"):
                    w = _tridiag_solve(T, shift, v)
                nw = np.linalg.norm(w)
                if not np.isfinite(nw) or nw == 0.0:
                    raise FloatingPointError("singular solve")
                v = w / nw
                rayleigh = float(v @ T.matvec(v))
                res = np.linalg.norm(T.matvec(v) - rayleigh * v)
                if res <= tol * max(1.0, abs(rayleigh)):
                    return v
            return v
        except (FloatingPointError, np.linalg.LinAlgError):
            shift = theta + (10.0 * tol) * (attempt + 1) * (-1.0) ** attempt
    raise ConvergenceError(f"inverse iteration failed near theta={theta}")


@dataclass(frozen=True)
class LanczosOptions:
    max_iter: int = 400
    tol: float = 1e-8
    seed: int = 1234

    def __post_init__(self):
        if self.tol <= 0:
            raise ComputationError("Lanczos tolerance must be positive")


def _check_symmetry(apply: Callable, n: int, rng: np.random.Generator) -> None:
    for _ in range(3):
        u = rng.standard_normal(n)
        v = rng.standard_normal(n)
        au, av = apply(u), apply(v)
        scale = max(np.linalg.norm(au) * np.linalg.norm(v),
                    np.linalg.norm(av) * np.linalg.norm(u), 1.0)
        if abs(u @ av - v @ au) > 1e-10 * scale:
            raise ComputationError("operator failed the probabilistic symmetry check")


def lanczos_smallest(apply: Callable[[np.ndarray], np.ndarray], n: int, k: int = 1,
                     opts: LanczosOptions = LanczosOptions()):
    """k smallest Ritz pairs of a symmetric operator given by its matvec.

    Returns (values, vectors, residuals, converged): values ascending,
    vectors as columns, residuals the independently recomputed ||A v - t v||.
    When the iteration budget runs out the best available pairs are returned
    with converged=False.
    """
    rng = np.random.default_rng(opts.seed)
    _check_symmetry(apply, n, rng)

    m_max = min(opts.max_iter, n)
    Q = np.empty((n, m_max))
    alphas = np.empty(m_max)
    betas = np.empty(m_max)

    q = rng.standard_normal(n)
    q /= np.linalg.norm(q)
    Q[:, 0] = q
    scale = 1.0
    theta = None
    m = 0
    for m in range(1, m_max + 1):
        w = apply(Q[:, m - 1])
        alphas[m - 1] = Q[:, m - 1] @ w
        # full reorthogonalization, two passes for 1e-10 level orthogonality
        w -= Q[:, :m] @ (Q[:, :m].T @ w)
        w -= Q[:, :m] @ (Q[:, :m].T @ w)
        beta = np.linalg.norm(w)
        betas[m - 1] = beta
        scale = max(scale, abs(alphas[m - 1]) + beta)
        if m >= max(2 * k, 8) and (m % 10 == 0 or beta <= 1e-14 * scale or m == m_max):
            theta, S = np.linalg.eigh(_small_tridiag(alphas[:m], betas[: m - 1]))
            kk = min(k, m)
            bounds = np.abs(beta * S[-1, :kk])
            if np.all(bounds <= opts.tol * scale) or beta <= 1e-14 * scale:
                break
        if m < m_max:
            if beta <= 1e-14 * scale:
                # invariant subspace hit; restart with a fresh orthogonal direction
                w = rng.standard_normal(n)
                w -= Q[:, :m] @ (Q[:, :m].T @ w)
                beta = np.linalg.norm(w)
                betas[m - 1] = 0.0
            Q[:, m] = w / beta

    theta, S = np.linalg.eigh(_small_tridiag(alphas[:m], betas[: m - 1]))
    kk = min(k, m)
    values = theta[:kk]
    vectors = Q[:, :m] @ S[:, :kk]
    vectors /= np.linalg.norm(vectors, axis=0)
    residuals = np.array([
        np.linalg.norm(apply(vectors[:, i]) - values[i] * vectors[:, i])
        for i in range(kk)
    ])
    converged = bool(np.all(residuals <= opts.tol * scale))
    if not converged and m == m_max and m < n:
        return values, vectors, residuals, False
    return values, vectors, residuals, converged


def _small_tridiag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    t = np.diag(a)
    if len(b):
        t += np.diag(b, 1) + np.diag(b, -1)
    return t
