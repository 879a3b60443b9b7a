"""Truncated 2D Hamiltonian on a grid, and the spectral-transition scan.

The operator is discretized with the 5-point stencil on [x_lo, x_hi] times
[-Y, Y], Dirichlet in y (truncation of the line), x boundary per the model
configuration.  The channel term y^2 V((x - b) y) narrows like a/y in x, so
the x-mesh must resolve the a/Y scale near each channel center; an optional
graded mesh (fine near the centers, coarse elsewhere) keeps that affordable.
The transition itself is read off the Y-dependence of the lowest eigenvalue:
subcritical configurations stabilize, supercritical ones plunge like -cY^2
with c near the 1D channel energy |E0|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ComputationError, ConfigurationError, ConvergenceError, RefinementError
from .eigs import LanczosOptions, lanczos_smallest
from .model import ModelConfig, eval_potential_2d

__all__ = [
    "Grid2D",
    "SparseHamiltonian",
    "ScanPolicy",
    "ScanRow",
    "TransitionScan",
    "graded_x_nodes",
    "assemble_h2d",
    "lowest_eigenvalues",
    "transition_scan",
    "scan_csv",
]

_MEMORY_CAP = 4_000_000


@dataclass(frozen=True)
class Grid2D:
    """Tensor grid: arbitrary interior x-nodes, uniform interior y-nodes."""

    x_lo: float
    x_hi: float
    x_nodes: np.ndarray
    y_half: float
    n_y: int
    memory_cap: int = _MEMORY_CAP

    def __post_init__(self):
        x = np.asarray(self.x_nodes, dtype=float)
        object.__setattr__(self, "x_nodes", x)
        if self.y_half <= 1.0:
            raise ConfigurationError("y-truncation must satisfy Y > 1")
        if self.n_y < 3 or len(x) < 3:
            raise ConfigurationError("need at least 3 interior nodes per direction")
        if np.any(np.diff(x) <= 0) or x[0] <= self.x_lo or x[-1] >= self.x_hi:
            raise ConfigurationError("x-nodes must be increasing and interior")
        if len(x) * self.n_y > self.memory_cap:
            raise ConfigurationError(
                f"grid size {len(x)}x{self.n_y} exceeds the memory cap")

    @classmethod
    def uniform(cls, x_lo: float, x_hi: float, n_x: int, y_half: float, n_y: int,
                staggered_x: bool = False) -> "Grid2D":
        """Uniform interior nodes; `staggered_x` places cell-centered nodes
        (used for Neumann and periodic x boundaries)."""
        if staggered_x:
            h = (x_hi - x_lo) / n_x
            x = x_lo + h * (np.arange(n_x) + 0.5)
        else:
            x = np.linspace(x_lo, x_hi, n_x + 2)[1:-1]
        return cls(x_lo, x_hi, x, y_half, n_y)

    @property
    def n_x(self) -> int:
        return len(self.x_nodes)

    @property
    def h_x(self) -> float:
        """Smallest x spacing."""
        return float(np.min(np.diff(self.x_nodes)))

    @property
    def h_y(self) -> float:
        return 2.0 * self.y_half / (self.n_y + 1)

    @property
    def y_nodes(self) -> np.ndarray:
        return np.linspace(-self.y_half, self.y_half, self.n_y + 2)[1:-1]

    @property
    def uniform_x(self) -> bool:
        d = np.diff(self.x_nodes)
        return bool(np.max(d) - np.min(d) <= 1e-12 * np.max(d))


def graded_x_nodes(x_lo: float, x_hi: float, centers: tuple[float, ...],
                   h_min: float, h_max: float = 0.25) -> np.ndarray:
    """Interior nodes graded toward the channel centers.

    Local spacing max(h_min, |x - b|/4) near the nearest center, capped at
    h_max; the |x|/4 law matches the a/y width of the channel at the height
    y = a/|x| where the point (x, y) last touches the support.
    """
    if not centers:
        centers = (0.5 * (x_lo + x_hi),)
    if h_min <= 0 or h_max < h_min:
        raise ConfigurationError("need 0 < h_min <= h_max")

    def spacing(x: float) -> float:
        d = min(abs(x - b) for b in centers)
        return min(h_max, max(h_min, d / 4.0))

    nodes = []
    x = x_lo
    while True:
        step = spacing(x + 0.5 * spacing(x))
        x = x + step
        if x >= x_hi - 0.5 * step:
            break
        nodes.append(x)
    return np.array(nodes)


@dataclass(frozen=True)
class SparseHamiltonian:
    """Assembled 5-point operator; symmetric by construction."""

    matrix: sp.csr_matrix
    grid: Grid2D
    bc: dict
    potential_min: float

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ v

    def export_coo(self) -> str:
        """Coordinate text format: one 'row col value' line per entry."""
        coo = self.matrix.tocoo()
        return "\n".join(f"{i} {j} {v:.17g}"
                         for i, j, v in zip(coo.row, coo.col, coo.data)) + "\n"


def _second_diff_1d(nodes: np.ndarray, lo: float, hi: float, bc: str) -> sp.csr_matrix:
    """Symmetric -d2/dx2 on the given nodes.

    Uniform grids get the standard stencil (Dirichlet: vertex nodes; Neumann
    and periodic: cell-centered nodes).  Nonuniform grids get the
    finite-volume form symmetrized by the half-cell weights,
    off-diagonal -1/(h_{i+1/2} sqrt(w_i w_{i+1})); Dirichlet only.
    """
    n = len(nodes)
    d = np.diff(nodes)
    uniform = np.max(d) - np.min(d) <= 1e-12 * np.max(d)
    if uniform:
        h = float(np.mean(d))
        diag = np.full(n, 2.0 / h**2)
        off = np.full(n - 1, -1.0 / h**2)
        mat = sp.diags([off, diag, off], [-1, 0, 1], format="lil")
        if bc == "neumann":
            mat[0, 0] = 1.0 / h**2
            mat[-1, -1] = 1.0 / h**2
        elif bc == "periodic":
            mat[0, -1] = -1.0 / h**2
            mat[-1, 0] = -1.0 / h**2
        return mat.tocsr()
    if bc != "dirichlet":
        raise ConfigurationError("graded meshes support Dirichlet only")
    hl = np.empty(n)
    hr = np.empty(n)
    hl[0] = nodes[0] - lo
    hl[1:] = d
    hr[:-1] = d
    hr[-1] = hi - nodes[-1]
    w = 0.5 * (hl + hr)
    diag = (1.0 / hl + 1.0 / hr) / w
    off = -1.0 / (d * np.sqrt(w[:-1] * w[1:]))
    return sp.diags([off, diag, off], [-1, 0, 1], format="csr")


def _check_resolution(config: ModelConfig, grid: Grid2D) -> None:
    x = grid.x_nodes
    for ch in config.channels:
        half = ch.profile.a / grid.y_half
        inside = np.count_nonzero((x > ch.center - half) & (x < ch.center + half))
        # fewer than 3 interior nodes means fewer than 4 cells across the channel
        if inside < 3:
            raise RefinementError(
                f"x-grid does not resolve the channel centered at {ch.center} "
                f"(width {2 * half:.3g} at |y| = {grid.y_half} spans fewer than "
                f"4 cells)")


def assemble_h2d(config: ModelConfig, grid: Grid2D) -> SparseHamiltonian:
    """Kronecker-sum assembly: kron(Bx, I) + kron(I, By) + diag(potential)."""
    if config.x_domain.kind == "interval":
        if not np.isclose(grid.x_hi, config.x_domain.c) or \
           not np.isclose(grid.x_lo, -config.x_domain.c):
            raise ConfigurationError("grid x-range does not match the interval domain")
        bc_x = config.x_domain.bc
    else:
        bc_x = "dirichlet"
    _check_resolution(config, grid)

    bx = _second_diff_1d(grid.x_nodes, grid.x_lo, grid.x_hi, bc_x)
    by = _second_diff_1d(grid.y_nodes, -grid.y_half, grid.y_half, "dirichlet")
    pot = eval_potential_2d(config, grid.x_nodes[:, None], grid.y_nodes[None, :])
    ham = (sp.kron(bx, sp.identity(grid.n_y), format="csr")
           + sp.kron(sp.identity(grid.n_x), by, format="csr")
           + sp.diags(pot.ravel(), format="csr"))
    return SparseHamiltonian(matrix=ham.tocsr(), grid=grid,
                             bc={"x": bc_x, "y": "dirichlet"},
                             potential_min=float(np.min(pot)))


def lowest_eigenvalues(ham: SparseHamiltonian, k: int = 1, tol: float = 1e-7,
                       seed: int = 1234, method: str = "auto",
                       maxiter: int = 40000) -> list[tuple[float, float]]:
    """k smallest eigenvalues with independently recomputed residual norms.

    Small problems use the self-contained Lanczos solver; large ones use
    restarted Lanczos (ARPACK) with a deterministic start vector, since a
    full-reorthogonalization basis would not fit in memory there.
    """
    if not 1 <= k <= 20:
        raise ConfigurationError("eigenvalue count must be between 1 and 20")
    a = ham.matrix
    n = a.shape[0]
    if method not in ("auto", "direct", "arpack"):
        raise ConfigurationError(f"unknown eigensolver method {method!r}")
    if method == "auto":
        method = "direct" if n <= 5000 else "arpack"
    if method == "direct":
        opts = LanczosOptions(max_iter=min(400, n), tol=tol, seed=seed)
        vals, vecs, res, ok = lanczos_smallest(lambda v: a @ v, n, k, opts)
        if not ok:
            raise ConvergenceError("Lanczos did not converge on the 2D operator")
        return [(float(v), float(r)) for v, r in zip(vals, res)]
    v0 = np.random.default_rng(seed).standard_normal(n)
    try:
        vals, vecs = spla.eigsh(a, k=k, which="SA", tol=tol, v0=v0,
                                ncv=min(n - 1, max(4 * k + 20, 100)),
                                maxiter=maxiter)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceError(f"restarted Lanczos stalled: {exc}") from exc
    order = np.argsort(vals)
    out = []
    for i in order:
        r = float(np.linalg.norm(a @ vecs[:, i] - vals[i] * vecs[:, i]))
        out.append((float(vals[i]), r))
    return out


# --- transition scan --------------------------------------------------------


@dataclass(frozen=True)
class ScanPolicy:
    """Resolution and verdict thresholds for the Y-ladder scan."""

    points_per_unit_y: int = 24
    x_half_width: float = 6.0
    h_max: float = 0.25
    stability_tol: float = 0.01     # relative, on lambda0(Ymax) vs lambda0(Ymax/2)
    r2_min: float = 0.95
    eig_tol: float = 1e-7
    memory_cap: int = _MEMORY_CAP

    def __post_init__(self):
        if self.points_per_unit_y < 4 or self.x_half_width <= 0:
            raise ConfigurationError("bad scan resolution policy")


@dataclass(frozen=True)
class ScanRow:
    y_half: float
    lambda0: float
    c_fit: float
    verdict: str


@dataclass(frozen=True)
class TransitionScan:
    rows: tuple[ScanRow, ...]
    c_fit: float
    r_squared: float
    verdict: str


def _build_scan_grid(config: ModelConfig, policy: ScanPolicy, y_half: float,
                     y_max: float) -> Grid2D:
    if config.x_domain.kind == "interval":
        x_lo, x_hi = -config.x_domain.c, config.x_domain.c
    else:
        x_lo, x_hi = -policy.x_half_width, policy.x_half_width
    centers = tuple(ch.center for ch in config.channels)
    if config.channels and config.x_domain.bc == "dirichlet" or not config.channels:
        a_min = min((ch.profile.a for ch in config.channels), default=1.0)
        # graded toward the centers, floor tied to the top of the ladder so
        # the same x-grid serves every Y (exact Dirichlet domain nesting)
        x = graded_x_nodes(x_lo, x_hi, centers, a_min / (4.0 * y_max), policy.h_max)
    else:
        n_x = int(np.ceil((x_hi - x_lo) * 4.0 * y_max))
        h = (x_hi - x_lo) / n_x
        x = x_lo + h * (np.arange(n_x) + 0.5)
    n_y = int(round(2.0 * y_half * policy.points_per_unit_y)) - 1
    return Grid2D(x_lo, x_hi, x, y_half, n_y, memory_cap=policy.memory_cap)


def transition_scan(config: ModelConfig, y_ladder: list[float],
                    policy: ScanPolicy = ScanPolicy()) -> TransitionScan:
    """Lowest eigenvalue along an increasing Y ladder, the -cY^2 fit on the
    last half, and the verdict.

    The x-grid and the y spacing are shared across the ladder, and the y-node
    sets nest, so Dirichlet domain monotonicity of lambda0 is exact and is
    checked.  Verdicts: subcritical when lambda0 stabilizes between Y_max/2
    and Y_max, supercritical when the fitted c is positive with R^2 at least
    the policy threshold, inconclusive otherwise (never a guess).
    """
    if len(y_ladder) < 3 or any(b <= a for a, b in zip(y_ladder, y_ladder[1:])):
        raise ConfigurationError("Y ladder must be increasing with >= 3 entries")
    y_max = float(y_ladder[-1])
    vals = []
    for y in y_ladder:
        grid = _build_scan_grid(config, policy, float(y), y_max)
        ham = assemble_h2d(config, grid)
        (lam0, res), = lowest_eigenvalues(ham, 1, tol=policy.eig_tol)
        if lam0 < ham.potential_min - 1e-9 * max(1.0, abs(ham.potential_min)):
            raise ComputationError("eigenvalue below the Rayleigh potential bound")
        if vals and lam0 > vals[-1] + 1e-6 * max(1.0, abs(lam0)):
            raise ComputationError(
                f"lambda0 increased from Y={y_ladder[len(vals)-1]} to Y={y}; "
                "domain monotonicity violated beyond solver tolerance")
        vals.append(lam0)

    ys = np.asarray(y_ladder, dtype=float)
    window = slice(len(ys) // 2, None)
    a = np.column_stack([ys[window] ** 2, np.ones(len(ys[window]))])
    coef, *_ = np.linalg.lstsq(a, np.asarray(vals)[window], rcond=None)
    c_fit = float(-coef[0])
    pred = a @ coef
    ss_res = float(np.sum((np.asarray(vals)[window] - pred) ** 2))
    ss_tot = float(np.sum((np.asarray(vals)[window]
                           - np.mean(np.asarray(vals)[window])) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0

    verdict = "inconclusive"
    half = 0.5 * y_max
    if half in list(ys):
        lam_half = vals[list(ys).index(half)]
        drift = abs(vals[-1] - lam_half) / max(1.0, abs(vals[-1]))
        if drift <= policy.stability_tol:
            verdict = "subcritical"
    if verdict == "inconclusive" and c_fit > 0 and r2 >= policy.r2_min:
        verdict = "supercritical"

    rows = tuple(ScanRow(float(y), float(v), c_fit, verdict)
                 for y, v in zip(ys, vals))
    return TransitionScan(rows=rows, c_fit=c_fit, r_squared=r2, verdict=verdict)


def scan_csv(scan: TransitionScan) -> str:
    lines = ["Y,lambda0,c_fit,verdict"]
    for r in scan.rows:
        lines.append(f"{r.y_half:.6g},{r.lambda0:.12g},{r.c_fit:.12g},{r.verdict}")
    return "\n".join(lines) + "\n"
