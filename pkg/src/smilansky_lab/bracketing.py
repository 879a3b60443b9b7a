"""Neumann bracketing bounds and the multi-channel classification rule.

Splitting the plane into strips G_n = R x (ln n, ln(n+1)] (and their mirror
images) with Neumann cuts bounds the operator from below by a direct sum.  On
G_n the frozen-coefficient comparison operator is unitarily equivalent to
ln^2(n) L, and the freezing error admits an explicit bound assembled from
sup V, sup |V'|, and the support half-width.  The classification rule takes
t_V, the minimum over channels of the 1D threshold inf sigma(L_j); its sign
decides bounded-below versus unbounded-below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ComputationError, ConfigurationError
from .model import ChannelSpec, ModelConfig
from .oned import ComparisonSpec, Domain1D, ResolutionPolicy, threshold

__all__ = [
    "StripBound",
    "Classification",
    "classify",
    "strip_bounds",
    "global_lower_bound",
    "classification_json_dict",
]


@dataclass(frozen=True)
class StripBound:
    """Lower bound for the Neumann restriction to G_n (and its mirror)."""

    index: int
    y_range: tuple[float, float]
    separated_bound: float      # ln^2(n) * inf sigma(L)
    correction: float
    net_bound: float


@dataclass(frozen=True)
class Classification:
    t_v: float
    verdict: str                # "subcritical" | "supercritical" | "critical"
    per_channel: tuple[float, ...]
    tol: float


def _channel_domain(config: ModelConfig) -> Domain1D:
    if config.x_domain.kind == "interval":
        return Domain1D("interval", config.x_domain.c, config.x_domain.bc)
    return Domain1D("truncated_line", 12.0)


def channel_threshold(config: ModelConfig, ch: ChannelSpec,
                      policy: ResolutionPolicy = ResolutionPolicy()) -> float:
    """inf sigma(L_j) for one channel; on an interval x-domain the comparison
    operator carries the same boundary conditions on (-c, c)."""
    spec = ComparisonSpec(config.omega, ch.lam, ch.profile, _channel_domain(config))
    return threshold(spec, policy)


def classify(config: ModelConfig, tol: float = 1e-6,
             policy: ResolutionPolicy = ResolutionPolicy()) -> Classification:
    """t_V = min_j inf sigma(L_j); sign against tol gives the verdict."""
    if not config.channels:
        raise ConfigurationError("classification needs at least one channel")
    if tol <= 0:
        raise ConfigurationError("classification tolerance must be positive")
    per = tuple(channel_threshold(config, ch, policy) for ch in config.channels)
    t_v = min(per)
    if t_v > tol:
        verdict = "subcritical"
    elif t_v < -tol:
        verdict = "supercritical"
    else:
        verdict = "critical"
    return Classification(t_v=float(t_v), verdict=verdict, per_channel=per, tol=tol)


def _correction(ch: ChannelSpec, n: int) -> float:
    """Explicit freezing-error constant for strip n >= 2.

    Combines |V(xy) - V(x ln n)| <= sup|V'| |x| (ln(n+1) - ln n) over the
    support |x ln n| <= a with |y^2 - ln^2 n| <= 2 ln(n+1) (ln(n+1) - ln n);
    both scale like ln n / n.
    """
    prof = ch.profile
    ln_n = math.log(n)
    ln_n1 = math.log(n + 1)
    gap = math.log1p(1.0 / n)      # ln(n+1) - ln(n)
    return ch.lam * (prof.a * prof.derivative_bound * ln_n1**2 * gap / ln_n
                     + 2.0 * prof.sup_value * ln_n1 * gap)


def strip_bounds(config: ModelConfig, n_max: int, n_min: int = 1,
                 policy: ResolutionPolicy = ResolutionPolicy()) -> list[StripBound]:
    """Per-strip lower bounds for a single-channel configuration.

    The n = 1 strip (0, ln 2] has ln n = 0, so freezing carries no
    information there; it is bounded by the potential minimum instead.
    """
    if len(config.channels) > 1:
        raise ConfigurationError("strip bounds are defined for a single channel")
    if n_min < 1 or n_max < n_min:
        raise ConfigurationError("need 1 <= n_min <= n_max")
    ch = config.channels[0] if config.channels else None
    e_l = (channel_threshold(config, ch, policy) if ch is not None
           else config.omega**2)
    out = []
    for n in range(n_min, n_max + 1):
        lo, hi = math.log(n), math.log(n + 1)
        if n == 1:
            corr = ch.lam * ch.profile.sup_value * hi**2 if ch is not None else 0.0
            out.append(StripBound(1, (lo, hi), 0.0, corr, -corr))
            continue
        corr = _correction(ch, n) if ch is not None else 0.0
        sep = math.log(n) ** 2 * e_l
        out.append(StripBound(n, (lo, hi), sep, corr, sep - corr))
    return out


def global_lower_bound(config: ModelConfig, n_start: int = 64,
                       max_extensions: int = 6,
                       policy: ResolutionPolicy = ResolutionPolicy()):
    """Lower bound on the whole operator, or the string "unbounded below".

    Supercritical configurations are routed straight to "unbounded below".
    Otherwise the bound is the minimum over the central region |y| <= ln 2
    (potential-minimum bound) and the computed strips, accepted only once the
    net strip bounds are increasing at the end of the range (so the tail
    cannot dip lower); the range is extended a few times before giving up.
    """
    if config.channels:
        if len(config.channels) > 1:
            cls = classify(config, policy=policy)
            if cls.verdict == "supercritical":
                return "unbounded below"
            raise ConfigurationError(
                "strip bounds (and hence the global bound) cover one channel")
        cls = classify(config, policy=policy)
        if cls.verdict == "supercritical":
            return "unbounded below"
        central = -max(ch.lam * ch.profile.sup_value for ch in config.channels) \
            * math.log(2.0) ** 2
    else:
        central = 0.0

    n_max = n_start
    for _ in range(max_extensions):
        strips = strip_bounds(config, n_max, policy=policy)
        nets = [s.net_bound for s in strips]
        tail = nets[-8:]
        if all(b >= a for a, b in zip(tail, tail[1:])):
            return min([central] + nets)
        n_max *= 2
    raise ComputationError(
        f"strip net bounds not yet monotone up to n={n_max}; "
        "cannot certify the tail")


def classification_json_dict(config: ModelConfig, cls: Classification) -> dict:
    bound = global_lower_bound(config) if len(config.channels) <= 1 or \
        cls.verdict == "supercritical" else None
    out = {
        "t_V": cls.t_v,
        "verdict": cls.verdict,
        "per_channel": list(cls.per_channel),
    }
    if bound is not None:
        out["global_lower_bound"] = bound
    return out
