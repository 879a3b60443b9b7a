"""Quasi-mode construction certifying points of the essential spectrum.

In the supercritical regime the 2D operator admits, for every real mu, test
functions

    psi(x, y) = [h(xy) + f(xy)/y^2] e^{i theta(y)} chi(y / n_k),
    f(t) = -(i sqrt(E)/2) t^2 h(t),    theta'(y) = sqrt(E y^2 + mu),

with h the 1D channel ground state at threshold -E and chi a C^2 logarithmic
cutoff supported on [1, k].  This module builds the cutoff, selects (k, n_k)
for a requested accuracy, and evaluates the norm and residual ||(H - mu) psi||
by 2D quadrature, factoring the unimodular phase out so only theta' and
theta'' ever enter.  The huge y^2-proportional terms cancel algebraically
through the eigenvalue ODE h'' = (omega^2 - lambda V - E0) h and are removed
before evaluation; everything that remains is O(1) or n_k-suppressed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import BPoly

from .errors import ComputationError, ConfigurationError
from .model import eval_profile
from .oned import GroundState
from .quadrature import adaptive_integrate, gauss_panels, log_panels

__all__ = [
    "CutoffFunction",
    "PlateauCutoff",
    "PhaseRule",
    "QuasiMode",
    "QuasiModeNorm",
    "CertificateRow",
    "build_cutoff",
    "build_plateau_cutoff",
    "choose_parameters",
    "quasimode_norm",
    "residual_identity_check",
    "residual_norm",
    "weyl_certificate",
    "certificate_csv",
    "certificate_summary",
]


# --- logarithmic cutoff -----------------------------------------------------


@dataclass(frozen=True)
class CutoffFunction:
    """C^2 cutoff on [1, k]: cubic-log rise, logarithmic descent, and quintic
    Hermite interpolants bridging (sqrt(k), sqrt(k)+1) and (k-1, k].

    `c` is the normalization making the weighted mass int_1^k chi^2/z dz = 1.
    Moment integrals are cached at construction.
    """

    k: float
    c: float
    prescale: float         # pre-normalization scaling; c compensates exactly
    premass: float          # int_1^sqrt(k) chi_tilde^2 / z dz
    mass_over_z: float      # int chi^2 / z dz  (= 1 by construction)
    j_weighted: float       # int z chi'^2 dz
    m_chi2: float           # int chi^2 dz
    m_dchi2: float          # int chi'^2 dz
    m_ddchi2: float         # int chi''^2 dz
    m_z5: float             # int chi^2 / z^5 dz
    _g: BPoly = field(repr=False, compare=False, default=None)
    _q: BPoly = field(repr=False, compare=False, default=None)
    _g1: BPoly = field(repr=False, compare=False, default=None)
    _q1: BPoly = field(repr=False, compare=False, default=None)
    _g2: BPoly = field(repr=False, compare=False, default=None)
    _q2: BPoly = field(repr=False, compare=False, default=None)

    @property
    def breaks(self) -> tuple[float, float, float]:
        rk = np.sqrt(self.k)
        return rk, rk + 1.0, self.k - 1.0

    def _pieces(self, z: np.ndarray, deriv: int) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        z1, z2, z3 = self.breaks
        L = np.log(self.k)
        out = np.zeros_like(z)
        m1 = (z >= 1.0) & (z <= z1)
        mg = (z > z1) & (z < z2)
        m2 = (z >= z2) & (z <= z3)
        mq = (z > z3) & (z <= self.k)
        u = np.log(z[m1])
        s = self.prescale
        if deriv == 0:
            out[m1] = s * 8.0 * u**3 / L**3
            out[m2] = s * 2.0 * (L - np.log(z[m2])) / L
            if np.any(mg):
                out[mg] = self._g(z[mg])
            if np.any(mq):
                out[mq] = self._q(z[mq])
        elif deriv == 1:
            out[m1] = s * 24.0 * u**2 / (z[m1] * L**3)
            out[m2] = s * -2.0 / (z[m2] * L)
            if np.any(mg):
                out[mg] = self._g1(z[mg])
            if np.any(mq):
                out[mq] = self._q1(z[mq])
        else:
            out[m1] = s * 24.0 * u * (2.0 - u) / (z[m1] ** 2 * L**3)
            out[m2] = s * 2.0 / (z[m2] ** 2 * L)
            if np.any(mg):
                out[mg] = self._g2(z[mg])
            if np.any(mq):
                out[mq] = self._q2(z[mq])
        return out

    def raw(self, z) -> np.ndarray:
        """Pre-normalization chi_tilde."""
        return self._pieces(z, 0)

    def value(self, z) -> np.ndarray:
        return self.c * self._pieces(z, 0)

    def d1(self, z) -> np.ndarray:
        return self.c * self._pieces(z, 1)

    def d2(self, z) -> np.ndarray:
        return self.c * self._pieces(z, 2)


def _cutoff_edges(k: float, per_unit: float = 3.0) -> np.ndarray:
    z1, z2, z3 = np.sqrt(k), np.sqrt(k) + 1.0, k - 1.0
    edges = np.concatenate([
        log_panels(1.0, z1, per_unit),
        np.linspace(z1, z2, 5),
        log_panels(z2, z3, per_unit),
        np.linspace(z3, k, 5),
    ])
    return np.unique(edges)


def build_cutoff(k: float, prescale: float = 1.0) -> CutoffFunction:
    """Construct and normalize the cutoff for ladder parameter k >= 16.

    `prescale` multiplies the pre-normalization pieces; the normalization
    constant compensates exactly, so the returned cutoff is independent of it
    (exposed to make that invariance testable).
    """
    if k < 16:
        raise ConfigurationError("cutoff requires k >= 16")
    if prescale <= 0:
        raise ConfigurationError("prescale must be positive")
    k = float(k)
    z1, z2, z3 = np.sqrt(k), np.sqrt(k) + 1.0, k - 1.0
    L = np.log(k)

    def p1(z, d):
        u = np.log(z)
        if d == 0:
            return prescale * 8.0 * u**3 / L**3
        if d == 1:
            return prescale * 24.0 * u**2 / (z * L**3)
        return prescale * 24.0 * u * (2.0 - u) / (z**2 * L**3)

    def p2(z, d):
        if d == 0:
            return prescale * 2.0 * (L - np.log(z)) / L
        if d == 1:
            return prescale * -2.0 / (z * L)
        return prescale * 2.0 / (z**2 * L)

    g = BPoly.from_derivatives(
        [z1, z2],
        [[p1(z1, 0), p1(z1, 1), p1(z1, 2)], [p2(z2, 0), p2(z2, 1), p2(z2, 2)]],
    )
    q = BPoly.from_derivatives(
        [z3, k],
        [[p2(z3, 0), p2(z3, 1), p2(z3, 2)], [0.0, 0.0, 0.0]],
    )

    cut = CutoffFunction(k=k, c=1.0, prescale=prescale, premass=0.0,
                         mass_over_z=0.0, j_weighted=0.0,
                         m_chi2=0.0, m_dchi2=0.0, m_ddchi2=0.0, m_z5=0.0)
    for name, poly in (("_g", g), ("_q", q), ("_g1", g.derivative()),
                       ("_q1", q.derivative()), ("_g2", g.derivative(2)),
                       ("_q2", q.derivative(2))):
        object.__setattr__(cut, name, poly)

    edges = _cutoff_edges(k)
    try:
        raw_mass = adaptive_integrate(lambda z: cut.raw(z) ** 2 / z, edges)
        premass = adaptive_integrate(
            lambda z: cut.raw(z) ** 2 / z, np.unique(np.clip(edges, 1.0, z1)))
        c = raw_mass ** -0.5
        mass = adaptive_integrate(lambda z: (c * cut.raw(z)) ** 2 / z, edges)
        jw = adaptive_integrate(lambda z: z * (c * cut._pieces(z, 1)) ** 2, edges)
        m2 = adaptive_integrate(lambda z: (c * cut.raw(z)) ** 2, edges)
        md = adaptive_integrate(lambda z: (c * cut._pieces(z, 1)) ** 2, edges)
        mdd = adaptive_integrate(lambda z: (c * cut._pieces(z, 2)) ** 2, edges, rtol=1e-10)
        mz5 = adaptive_integrate(lambda z: (c * cut.raw(z)) ** 2 / z**5, edges)
    except RuntimeError as exc:
        raise ComputationError(f"cutoff quadrature failed for k={k}: {exc}") from exc

    out = CutoffFunction(k=k, c=c, prescale=prescale, premass=premass,
                         mass_over_z=mass, j_weighted=jw,
                         m_chi2=m2, m_dchi2=md, m_ddchi2=mdd, m_z5=mz5)
    for name in ("_g", "_q", "_g1", "_q1", "_g2", "_q2"):
        object.__setattr__(out, name, getattr(cut, name))
    return out


_CUTOFF_CACHE: dict[float, CutoffFunction] = {}


def cutoff_cached(k: float) -> CutoffFunction:
    if k not in _CUTOFF_CACHE:
        _CUTOFF_CACHE[k] = build_cutoff(k)
    return _CUTOFF_CACHE[k]


# --- plateau cutoff for the interval variant --------------------------------


@dataclass(frozen=True)
class PlateauCutoff:
    """C^2 plateau: 1 on [-w/2, w/2], quintic-smoothstep shoulders, 0 outside
    (-w, w).  sup |phi| = 1."""

    half_width: float = 1.0

    def _u(self, x: np.ndarray) -> np.ndarray:
        return np.clip((np.abs(x) / self.half_width - 0.5) * 2.0, 0.0, 1.0)

    def value(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = self._u(x)
        return 1.0 - u**3 * (10.0 - 15.0 * u + 6.0 * u**2)

    def d1(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = self._u(x)
        inner = -30.0 * u**2 * (1.0 - u) ** 2 * (2.0 / self.half_width)
        return np.where((np.abs(x) > 0.5 * self.half_width)
                        & (np.abs(x) < self.half_width),
                        inner * np.sign(x), 0.0)

    def d2(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = self._u(x)
        inner = -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u) * (2.0 / self.half_width) ** 2
        return np.where((np.abs(x) > 0.5 * self.half_width)
                        & (np.abs(x) < self.half_width), inner, 0.0)

    @property
    def sup(self) -> float:
        return 1.0


def build_plateau_cutoff(half_width: float = 1.0) -> PlateauCutoff:
    return PlateauCutoff(half_width)


# --- phase rule -------------------------------------------------------------


@dataclass(frozen=True)
class PhaseRule:
    """theta'(y) = sqrt(E y^2 + mu); only theta' and theta'' are ever used."""

    mu: float
    e_mag: float

    def dtheta(self, y) -> np.ndarray:
        return np.sqrt(self.e_mag * np.asarray(y, dtype=float) ** 2 + self.mu)

    def d2theta(self, y) -> np.ndarray:
        return self.e_mag * np.asarray(y, dtype=float) / self.dtheta(y)

    def rho(self, y) -> np.ndarray:
        """theta'(y) / (sqrt(E) y)."""
        return np.sqrt(1.0 + self.mu / (self.e_mag * np.asarray(y, dtype=float) ** 2))

    def rho_minus_1(self, y) -> np.ndarray:
        """rho - 1 evaluated without cancellation."""
        q = self.mu / (self.e_mag * np.asarray(y, dtype=float) ** 2)
        return q / (1.0 + np.sqrt(1.0 + q))


# --- quasi-mode -------------------------------------------------------------


@dataclass(frozen=True)
class QuasiMode:
    """Concrete Weyl test function, determined by (mu, k, n_k, ground state)."""

    mu: float
    cutoff: CutoffFunction
    n_k: int
    gs: GroundState
    mode: str = "line"                      # "line" | "interval"
    phi: Optional[PlateauCutoff] = None

    def __post_init__(self):
        if self.mode not in ("line", "interval"):
            raise ConfigurationError(f"unknown quasi-mode variant {self.mode!r}")
        if self.mode == "interval" and self.phi is None:
            object.__setattr__(self, "phi", build_plateau_cutoff())
        if self.gs.e0 >= 0:
            raise ConfigurationError("quasi-modes need a negative 1D threshold")

    @property
    def k(self) -> float:
        return self.cutoff.k

    @property
    def e_mag(self) -> float:
        return -self.gs.e0

    @property
    def support(self) -> tuple[float, float]:
        """y-support [n_k, k n_k] of the cutoff factor."""
        return float(self.n_k), float(self.cutoff.k * self.n_k)

    @property
    def phase(self) -> PhaseRule:
        return PhaseRule(self.mu, self.e_mag)


# --- ground-state moments ---------------------------------------------------


def _t_rule(gs: GroundState, spacing: float = 0.2, order: int = 10):
    kap = max(gs.kappa, 0.3)
    xe = gs.nodes[-1] + 30.0 / kap
    n_panels = max(64, int(np.ceil(2.0 * xe / spacing)))
    return gauss_panels(np.linspace(-xe, xe, n_panels + 1), order)


def _h_moments(gs: GroundState) -> dict:
    t, w = _t_rule(gs)
    h, h1, h2 = gs.h(t), gs.h1(t), gs.h2(t)
    e = -gs.e0
    s = np.sqrt(e)
    f = -0.5 * s * t**2 * h           # |f|; the i factor drops in moments
    f1 = -0.5 * s * (2.0 * t * h + t**2 * h1)
    f2 = -0.5 * s * (2.0 * h + 4.0 * t * h1 + t**2 * h2)
    return {
        "h2": float(w @ h**2),
        "t2h1": float(w @ (t**2 * h1**2)),
        "t4hpp": float(w @ (t**4 * h2**2)),
        "f2": float(w @ f**2),
        "t2f1": float(w @ (t**2 * f1**2)),
        "t4fpp": float(w @ (t**4 * f2**2)),
        "mix": float(w @ (np.abs(h) + 2.0 * np.abs(t * h1)) ** 2),
    }


# --- parameter selection ----------------------------------------------------


def suppressed_term_bounds(cut: CutoffFunction, n_k: int, mom: dict,
                           mu: float, e_mag: float) -> dict:
    """The explicit n_k-suppressed bounds on the residual terms, one entry per
    inequality, plus the extra phase term present when mu != 0."""
    n4 = float(n_k) ** -4.0
    n8 = float(n_k) ** -8.0
    bounds = {
        "x2_hpp": n4 * cut.m_chi2 * mom["t4hpp"],
        "x_hp_chi1": n4 * cut.m_dchi2 * mom["t2h1"],
        "h_chi2": n4 * cut.m_ddchi2 * mom["h2"],
        "x2_fpp": n8 * cut.m_chi2 * mom["t4fpp"],
        "x_fp": n4 * cut.m_chi2 * mom["t2f1"],
        "x_fp_chi1": n8 * cut.m_dchi2 * mom["t2f1"],
        "f_y2": n4 * cut.m_chi2 * mom["f2"],
        "f_chi2": n8 * cut.m_ddchi2 * mom["f2"],
        "f_chi1": n4 * cut.m_dchi2 * mom["f2"],
        "x_fp_y3": n8 * cut.m_chi2 * mom["t2f1"],
        "f_y4": n8 * cut.m_chi2 * mom["f2"],
    }
    if mu != 0.0:
        bounds["phase"] = (mu**2 / e_mag) * n4 * cut.mass_over_z * mom["mix"]
    return bounds


def choose_parameters(eps: float, gs: GroundState, mu: float = 0.0,
                      min_n: int = 1, max_k_pow: int = 200,
                      max_n_doublings: int = 60) -> tuple[float, int]:
    """Deterministic (k, n_k) selection.

    k is the smallest power of two >= 16 on the ladder with weighted
    derivative mass J(k) < eps; n_k doubles from 4k (and past `min_n`, which
    enforces disjoint supports along a ladder) until the correction-term norm
    bound is below 1/16 and the suppressed residual bounds sum below eps.
    """
    if not (0.0 < eps < 1.0):
        raise ConfigurationError("eps must lie in (0, 1)")
    if gs.e0 >= 0:
        raise ConfigurationError("parameter selection needs a negative threshold")
    cut = None
    for p in range(4, max_k_pow + 1):
        cand = cutoff_cached(2.0**p)
        if cand.j_weighted < eps:
            cut = cand
            break
    if cut is None:
        raise ComputationError(f"no ladder k up to 2^{max_k_pow} with J(k) < {eps}")

    mom = _h_moments(gs)
    n = int(4 * cut.k)
    while n <= min_n:
        n *= 2
    for _ in range(max_n_doublings):
        corr = float(n) ** -4.0 * cut.m_z5 * mom["f2"]
        bounds = suppressed_term_bounds(cut, n, mom, mu, -gs.e0)
        total = sum(bounds.values())
        if corr < 1.0 / 16.0 and total < eps:
            return cut.k, n
        n *= 2
    worst = max(bounds, key=bounds.get)
    raise ComputationError(
        f"n_k search exhausted; limiting term {worst} = {bounds[worst]!r}"
    )


# --- norm and residual ------------------------------------------------------


@dataclass(frozen=True)
class QuasiModeNorm:
    main_term: float        # squared norm of the leading part (= 1 in theory)
    correction_term: float  # squared norm of the f/y^2 part (< 1/16)
    norm: float


def quasimode_norm(qm: QuasiMode) -> QuasiModeNorm:
    """||psi|| via the t = xy change of variables.

    The leading and correction parts are orthogonal pointwise (h is real, f
    imaginary), so the squared norm splits exactly.
    """
    mom = _h_moments(qm.gs)
    main = qm.cutoff.mass_over_z * mom["h2"]
    corr = float(qm.n_k) ** -4.0 * qm.cutoff.m_z5 * mom["f2"]
    return QuasiModeNorm(main, corr, float(np.sqrt(main + corr)))


def quasimode_norm_direct(qm: QuasiMode, n_y: int = 400) -> float:
    """Direct 2D quadrature of |psi|^2 in (x, y); cross-check for the
    transformed route.  Only usable at medium n_k (x-spacing ~ 1/y)."""
    ylo, yhi = qm.support
    ynodes, yw = gauss_panels(np.linspace(ylo, yhi, n_y + 1), 8)
    t, tw = _t_rule(qm.gs)
    h = qm.gs.h(t)
    chi = qm.cutoff.value(ynodes / qm.n_k)
    acc = 0.0
    for yv, wv, cv in zip(ynodes, yw, chi):
        g2 = h**2 + (0.5 * np.sqrt(qm.e_mag) * t**2 * h / yv**2) ** 2
        if qm.mode == "interval":
            g2 = g2 * qm.phi.value(t / yv) ** 2
        # x-integral of |psi|^2 at fixed y equals (1/y) * t-integral
        acc += wv * cv**2 / yv * float(tw @ g2)
    return float(np.sqrt(acc))


def residual_identity_check(gs: GroundState, e_mag: Optional[float] = None) -> float:
    """Max pointwise defect of the algebraic identity behind the residual
    cancellation, with h' and h'' taken from central differences of the
    sampled eigenfunction (an independent route; the quasi-mode itself uses
    ODE-exact derivatives).  Converges at second order in the grid spacing."""
    e = -gs.e0 if e_mag is None else float(e_mag)
    s = np.sqrt(e)
    t = gs.nodes
    h = gs.samples
    hx = gs.grid.h
    v, _ = eval_profile(gs.profile, t)
    f = -0.5j * s * t**2 * h
    fpp = np.empty_like(f)
    fpp[1:-1] = (f[:-2] - 2.0 * f[1:-1] + f[2:]) / hx**2
    h1 = np.empty_like(h)
    h1[1:-1] = (h[2:] - h[:-2]) / (2.0 * hx)
    d = (-fpp[1:-1] + f[1:-1] * (e + gs.omega**2 - gs.lam * v[1:-1])
         - 2.0j * s * t[1:-1] * h1[1:-1] - 1.0j * s * h[1:-1])
    return float(np.max(np.abs(d)))


def _residual_z_rule(cut: CutoffFunction):
    z1, z2, z3 = cut.breaks
    edges = np.unique(np.concatenate([
        log_panels(1.0, z1, 4.0),
        np.linspace(z1, z2, 7),
        log_panels(z2, z3, 4.0),
        np.linspace(z3, cut.k, 7),
    ]))
    return gauss_panels(edges, 10)


def residual_norm(qm: QuasiMode, config=None, gauge: complex = 1.0) -> float:
    """||(H - mu) psi|| by tensor quadrature in (t, z) = (xy, y/n_k).

    The common phase e^{i theta(y)} is factored out; the y^2-proportional
    block cancels exactly through the eigenvalue ODE and is omitted from the
    assembled amplitude.  `config`, when given, must agree with the
    quasi-mode variant (line vs interval x-domain).  `gauge` multiplies the
    amplitude by a constant unimodular factor; the norm is invariant.
    """
    if config is not None:
        want = "interval" if config.x_domain.kind == "interval" else "line"
        if want != qm.mode:
            raise ConfigurationError(
                f"quasi-mode variant {qm.mode!r} does not match the "
                f"{config.x_domain.kind!r} x-domain")
    if abs(abs(gauge) - 1.0) > 1e-12:
        raise ConfigurationError("gauge factor must be unimodular")
    gs = qm.gs
    e = qm.e_mag
    s = np.sqrt(e)
    n = float(qm.n_k)
    phase = qm.phase

    t, tw = _t_rule(gs)
    h, h1, h2 = gs.h(t), gs.h1(t), gs.h2(t)
    v, _ = eval_profile(gs.profile, t)
    p = gs.omega**2 - gs.lam * v + e          # h'' = p h
    fh = -0.5j * s * t**2 * h
    f1 = -0.5j * s * (2.0 * t * h + t**2 * h1)
    th1 = t * h1
    t2ph = t**2 * p * h
    t4ph = t**4 * p * h
    t3h1 = t**3 * h1
    t2h = t**2 * h

    znodes, zw = _residual_z_rule(qm.cutoff)
    chi = qm.cutoff.value(znodes)
    chi1 = qm.cutoff.d1(znodes)
    chi2 = qm.cutoff.d2(znodes)

    total = 0.0
    block = 64
    for i0 in range(0, len(znodes), block):
        z = znodes[i0:i0 + block][:, None]
        wz = zw[i0:i0 + block]
        cz = chi[i0:i0 + block][:, None]
        cz1 = chi1[i0:i0 + block][:, None]
        cz2 = chi2[i0:i0 + block][:, None]
        y = n * z
        rho = phase.rho(y)
        rm1 = phase.rho_minus_1(y)
        theta1 = phase.dtheta(y)

        t2_term = 1.0j * s * (h[None, :] * (rm1 / rho) - 2.0 * th1[None, :] * rm1)
        t3_term = -t2ph[None, :] / y**2
        t4_term = 0.5j * s * t4ph[None, :] / y**4
        t5_term = (-e * rho * t3h1[None, :] / y**2
                   - (e / (2.0 * rho)) * t2h[None, :] / y**2)
        g = h[None, :] + fh[None, :] / y**2
        g_y = th1[None, :] / y + t * f1[None, :] / y**3 - 2.0 * fh[None, :] / y**3
        u1 = -2.0 * g_y - 2.0j * theta1 * g
        u2 = -g
        r = cz * (t2_term + t3_term + t4_term + t5_term) + cz1 * u1 / n + cz2 * u2 / n**2
        if qm.mode == "interval":
            x = t[None, :] / y
            r = r * qm.phi.value(x) + cz * (
                -2.0 * (y * h1[None, :] + f1[None, :] / y) * qm.phi.d1(x)
                - g * qm.phi.d2(x)
            )
        r = gauge * r
        total += float(np.sum((wz / znodes[i0:i0 + block]) * ((np.abs(r) ** 2) @ tw)))
    return float(np.sqrt(total))


# --- certificate ------------------------------------------------------------


@dataclass(frozen=True)
class CertificateRow:
    eps: float
    k: float
    n_k: int
    norm: float
    residual: float
    normalized_residual: float
    bound_9eps: float
    support: tuple[float, float]
    main_term: float
    correction_term: float


def weyl_certificate(config, gs: GroundState, mu: float,
                     eps_ladder: list[float]) -> list[CertificateRow]:
    """One quasi-mode per ladder entry, supports pairwise disjoint, each with
    its norm, residual, and the bound it is certified against.  The x-domain
    of `config` selects the full-line or interval variant."""
    if gs.e0 >= 0:
        raise ConfigurationError("certificate needs a supercritical channel")
    if any(not 0.0 < e < 1.0 for e in eps_ladder):
        raise ConfigurationError("eps ladder entries must lie in (0, 1)")
    if sorted(eps_ladder, reverse=True) != list(eps_ladder):
        raise ConfigurationError("eps ladder must be decreasing")
    mode = "interval" if config.x_domain.kind == "interval" else "line"
    phi = build_plateau_cutoff(config.x_domain.c) if mode == "interval" else None
    sup_phi = 1.0 if phi is None else phi.sup

    rows = []
    min_n = 1
    for eps in eps_ladder:
        k, n_k = choose_parameters(eps, gs, mu, min_n=min_n)
        qm = QuasiMode(mu=mu, cutoff=cutoff_cached(k), n_k=n_k, gs=gs,
                       mode=mode, phi=phi)
        nr = quasimode_norm(qm)
        res = residual_norm(qm, config)
        rows.append(CertificateRow(
            eps=eps, k=k, n_k=n_k, norm=nr.norm, residual=res,
            normalized_residual=res / nr.norm,
            bound_9eps=9.0 * sup_phi**2 * eps,
            support=qm.support, main_term=nr.main_term,
            correction_term=nr.correction_term,
        ))
        min_n = int(k * n_k)
    return rows


def certificate_csv(rows: list[CertificateRow]) -> str:
    lines = ["epsilon,k,n_k,norm,residual,normalized_residual,bound_9eps"]
    for r in rows:
        lines.append(f"{r.eps:.6g},{r.k:.6g},{r.n_k},{r.norm:.12g},"
                     f"{r.residual:.12g},{r.normalized_residual:.12g},{r.bound_9eps:.6g}")
    return "\n".join(lines) + "\n"


def certificate_summary(rows: list[CertificateRow]) -> dict:
    checks = {
        "norm_ge_half": all(r.norm >= 0.5 for r in rows),
        "correction_lt_sixteenth": all(r.correction_term < 1.0 / 16.0 for r in rows),
        "residual_sq_le_bound": all(r.residual**2 <= r.bound_9eps * (1.0 + 1e-6)
                                    for r in rows),
        "normalized_residual_le_2sqrt": all(
            r.normalized_residual <= 2.0 * np.sqrt(r.bound_9eps) * (1.0 + 1e-6)
            for r in rows),
        "normalized_residual_decreasing": all(
            a.normalized_residual > b.normalized_residual
            for a, b in zip(rows, rows[1:])),
        "supports_disjoint": all(a.support[1] < b.support[0]
                                 for a, b in zip(rows, rows[1:])),
    }
    return {
        "rows": [
            {"epsilon": r.eps, "k": r.k, "n_k": r.n_k, "norm": r.norm,
             "residual": r.residual,
             "normalized_residual": r.normalized_residual,
             "bound_9eps": r.bound_9eps}
            for r in rows
        ],
        "checks": checks,
        "all_pass": all(checks.values()),
    }
