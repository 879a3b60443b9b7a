"""Domain types for the 2D Hamiltonian with shrinking potential channels.

The operator acts as

    H = -d2/dx2 - d2/dy2 + omega^2 y^2 - sum_j lambda_j y^2 V_j((x - b_j) y)

with every channel profile V_j nonnegative, compactly supported and C^1.
Channel j is the translate (in x) of a centered channel; the supports of
distinct channels must not overlap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ConfigurationError

__all__ = [
    "PotentialProfile",
    "ChannelSpec",
    "XDomain",
    "ModelConfig",
    "eval_profile",
    "eval_potential_2d",
    "load_config",
    "config_to_dict",
]

_FAMILIES = ("cos2", "quartic", "table")


@dataclass(frozen=True)
class PotentialProfile:
    """Compactly supported nonnegative C^1 bump on [-a, a].

    Families:
        cos2    -- amplitude * cos^2(pi t / (2a))
        quartic -- amplitude * (1 - (t/a)^2)^2
        table   -- monotone C^1 piecewise-cubic interpolation of (t, V) samples,
                   clamped to zero outside the tabulated range
    """

    family: str = "cos2"
    a: float = 1.0
    amplitude: float = 1.0
    table: Optional[tuple[tuple[float, float], ...]] = None
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False, default=None)
    _interp_d: PchipInterpolator = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ConfigurationError(f"unknown profile family {self.family!r}")
        if self.a <= 0 or self.amplitude <= 0:
            raise ConfigurationError("profile half-width and amplitude must be positive")
        if self.family == "table":
            if not self.table or len(self.table) < 3:
                raise ConfigurationError("tabulated profile needs at least 3 points")
            ts = np.array([p[0] for p in self.table], dtype=float)
            vs = np.array([p[1] for p in self.table], dtype=float)
            if np.any(np.diff(ts) <= 0):
                raise ConfigurationError("tabulated abscissae must be strictly increasing")
            if np.any(vs < 0):
                raise ConfigurationError("tabulated profile values must be nonnegative")
            if vs[0] != 0.0 or vs[-1] != 0.0:
                raise ConfigurationError("tabulated profile must vanish at its endpoints")
            interp = PchipInterpolator(ts, self.amplitude * vs, extrapolate=False)
            object.__setattr__(self, "_interp", interp)
            object.__setattr__(self, "_interp_d", interp.derivative())

    @property
    def derivative_bound(self) -> float:
        """Upper bound on sup |V'|."""
        if self.family == "cos2":
            return self.amplitude * np.pi / (2.0 * self.a)
        if self.family == "quartic":
            return self.amplitude * 8.0 / (3.0 * np.sqrt(3.0) * self.a)
        ts = np.array([p[0] for p in self.table])
        fine = np.linspace(ts[0], ts[-1], 4096)
        return float(np.max(np.abs(self._interp_d(fine)))) * 1.05

    @property
    def sup_value(self) -> float:
        if self.family in ("cos2", "quartic"):
            return self.amplitude
        return float(np.max(self._interp(np.linspace(self.table[0][0], self.table[-1][0], 4096))))


def eval_profile(profile: PotentialProfile, t) -> tuple[np.ndarray, np.ndarray]:
    """Return (V(t), V'(t)); both vanish identically for |t| >= a."""
    t = np.asarray(t, dtype=float)
    v = np.zeros_like(t)
    dv = np.zeros_like(t)
    if profile.family == "table":
        ts = np.array([p[0] for p in profile.table])
        inside = (t > ts[0]) & (t < ts[-1])
        v[inside] = profile._interp(t[inside])
        dv[inside] = profile._interp_d(t[inside])
        np.clip(v, 0.0, None, out=v)
        return v, dv
    a, amp = profile.a, profile.amplitude
    inside = np.abs(t) < a
    ti = t[inside]
    if profile.family == "cos2":
        v[inside] = amp * np.cos(np.pi * ti / (2.0 * a)) ** 2
        dv[inside] = -amp * np.pi / (2.0 * a) * np.sin(np.pi * ti / a)
    else:  # quartic
        u = ti / a
        v[inside] = amp * (1.0 - u**2) ** 2
        dv[inside] = amp * (-4.0 * u * (1.0 - u**2)) / a
    return v, dv


@dataclass(frozen=True)
class ChannelSpec:
    """One potential channel: coupling, center in x, and its profile."""

    lam: float
    center: float = 0.0
    profile: PotentialProfile = field(default_factory=PotentialProfile)

    def __post_init__(self):
        if self.lam < 0:
            raise ConfigurationError("channel coupling must be nonnegative")

    @property
    def support(self) -> tuple[float, float]:
        return (self.center - self.profile.a, self.center + self.profile.a)


@dataclass(frozen=True)
class XDomain:
    """Either the full line (kind='line') or a symmetric interval (-c, c)."""

    kind: str = "line"
    c: float = 0.0
    bc: str = "dirichlet"

    def __post_init__(self):
        if self.kind not in ("line", "interval"):
            raise ConfigurationError(f"unknown x-domain kind {self.kind!r}")
        if self.kind == "interval":
            if self.c <= 0:
                raise ConfigurationError("interval half-width must be positive")
            if self.bc not in ("dirichlet", "neumann", "periodic"):
                raise ConfigurationError(f"unknown boundary condition {self.bc!r}")


@dataclass(frozen=True)
class ModelConfig:
    """Full specification of the 2D model."""

    omega: float
    channels: tuple[ChannelSpec, ...] = ()
    x_domain: XDomain = field(default_factory=XDomain)
    y_cutoff: Optional[float] = None  # optional |y| >= y0 gate on the channel term

    def __post_init__(self):
        if self.omega <= 0:
            raise ConfigurationError("omega must be positive")
        sups = sorted(ch.support for ch in self.channels)
        for (lo1, hi1), (lo2, hi2) in zip(sups, sups[1:]):
            if hi1 > lo2:
                raise ConfigurationError(
                    f"channel supports ({lo1}, {hi1}) and ({lo2}, {hi2}) overlap"
                )
        if self.x_domain.kind == "interval":
            for ch in self.channels:
                lo, hi = ch.support
                if max(abs(lo), abs(hi)) > self.x_domain.c:
                    raise ConfigurationError(
                        f"channel centered at {ch.center} does not fit inside "
                        f"(-{self.x_domain.c}, {self.x_domain.c})"
                    )


def eval_potential_2d(config: ModelConfig, x, y) -> np.ndarray:
    """Potential of the 2D operator at (x, y); broadcasts over array input."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    w = config.omega**2 * y**2
    if not config.channels:
        return w
    gate = 1.0
    if config.y_cutoff is not None:
        gate = (np.abs(y) >= config.y_cutoff).astype(float)
    for ch in config.channels:
        v, _ = eval_profile(ch.profile, (x - ch.center) * y)
        w = w - gate * ch.lam * y**2 * v
    return w


# --- JSON configuration -----------------------------------------------------
#
# {"omega": 1.0,
#  "channels": [{"lambda": 2.0, "center": 0.0,
#                "profile": {"family": "cos2", "a": 1.0, "amplitude": 1.0}}],
#  "x_domain": {"type": "line"},
#  "y_cutoff": null}


def _profile_from_dict(d: dict) -> PotentialProfile:
    table = d.get("table")
    if table is not None:
        table = tuple((float(t), float(v)) for t, v in table)
    return PotentialProfile(
        family=d.get("family", "cos2"),
        a=float(d.get("a", 1.0)),
        amplitude=float(d.get("amplitude", 1.0)),
        table=table,
    )


def config_from_dict(d: dict) -> ModelConfig:
    try:
        channels = tuple(
            ChannelSpec(
                lam=float(ch["lambda"]),
                center=float(ch.get("center", 0.0)),
                profile=_profile_from_dict(ch.get("profile", {})),
            )
            for ch in d.get("channels", [])
        )
        xd = d.get("x_domain", {"type": "line"})
        x_domain = XDomain(
            kind=xd.get("type", "line"),
            c=float(xd.get("c", 0.0)) if xd.get("type") == "interval" else 0.0,
            bc=xd.get("bc", "dirichlet"),
        )
        y_cutoff = d.get("y_cutoff")
        return ModelConfig(
            omega=float(d["omega"]),
            channels=channels,
            x_domain=x_domain,
            y_cutoff=None if y_cutoff is None else float(y_cutoff),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed model configuration: {exc}") from exc


def load_config(path: str) -> ModelConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(data)


def config_to_dict(config: ModelConfig) -> dict:
    out = {
        "omega": config.omega,
        "channels": [
            {
                "lambda": ch.lam,
                "center": ch.center,
                "profile": {
                    "family": ch.profile.family,
                    "a": ch.profile.a,
                    "amplitude": ch.profile.amplitude,
                    **({"table": [list(p) for p in ch.profile.table]}
                       if ch.profile.table else {}),
                },
            }
            for ch in config.channels
        ],
        "x_domain": (
            {"type": "line"} if config.x_domain.kind == "line"
            else {"type": "interval", "c": config.x_domain.c, "bc": config.x_domain.bc}
        ),
    }
    if config.y_cutoff is not None:
        out["y_cutoff"] = config.y_cutoff
    return out
