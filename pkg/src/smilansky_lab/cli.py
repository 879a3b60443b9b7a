"""Command-line surface.

Every command loads a JSON model configuration, dispatches to one library
operation, and writes CSV or JSON with a reproducibility header (config
hash, tolerances, seed).  Exit codes: 0 success, 1 computation failure,
2 configuration error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import bracketing, grid2d, weyl
from .errors import ConfigurationError, SmilanskyError
from .model import ModelConfig, load_config
from .oned import (ComparisonSpec, Domain1D, Grid1D, critical_coupling,
                   ground_state, threshold, tune_lambda_to_threshold)

__all__ = ["RunRequest", "run", "main"]

_SEED = 1234
_COMMANDS = ("critical", "tune", "eig1d", "eig2d", "scan", "weyl", "classify", "bound")


@dataclass(frozen=True)
class RunRequest:
    command: str
    config_path: str
    params: dict = field(default_factory=dict)
    output: Optional[str] = None
    fmt: str = "json"

    def __post_init__(self):
        if self.command not in _COMMANDS:
            raise ConfigurationError(f"unknown command {self.command!r}")
        if self.fmt not in ("csv", "json"):
            raise ConfigurationError(f"unknown output format {self.fmt!r}")
        p = self.params
        for key in ("tol", "mu_margin"):
            if key in p and p[key] <= 0:
                raise ConfigurationError(f"{key} must be positive")
        if "ladder" in p:
            lad = p["ladder"]
            if sorted(lad) != list(lad):
                raise ConfigurationError("ladder must be sorted increasing")
        if "eps" in p:
            if any(not 0.0 < e < 1.0 for e in p["eps"]):
                raise ConfigurationError("eps values must lie in (0, 1)")


def _config_hash(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


def _meta(req: RunRequest) -> dict:
    return {
        "command": req.command,
        "config_sha256": _config_hash(req.config_path),
        "seed": _SEED,
        "params": {k: v for k, v in sorted(req.params.items())},
    }


def _emit(req: RunRequest, text: str) -> None:
    if req.output:
        with open(req.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_with_header(req: RunRequest, body: str) -> str:
    meta = _meta(req)
    head = "".join(f"# {k}={json.dumps(v, sort_keys=True)}\n" for k, v in meta.items())
    return head + body


def _json_payload(req: RunRequest, payload: dict) -> str:
    return json.dumps({"meta": _meta(req), **payload}, sort_keys=True) + "\n"


def _single_channel(config: ModelConfig):
    if not config.channels:
        raise ConfigurationError("this command needs at least one channel")
    return config.channels[0]


def _set_threads(n: Optional[int]) -> None:
    count = n if n is not None else os.environ.get("SMILANSKY_LAB_THREADS")
    if count is None:
        return
    count = str(int(count))
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = count
    try:
        from threadpoolctl import threadpool_limits
        threadpool_limits(limits=int(count))
    except ImportError:
        pass


def run(request: RunRequest) -> int:
    """Dispatch a request; returns the process exit code."""
    try:
        config = load_config(request.config_path)
        p = request.params
        if request.command == "critical":
            ch = _single_channel(config)
            lc = critical_coupling(config.omega, ch.profile, tol=p.get("tol", 1e-6))
            _emit(request, _json_payload(request, {"lambda_crit": lc}))
        elif request.command == "tune":
            ch = _single_channel(config)
            lam = tune_lambda_to_threshold(config.omega, ch.profile,
                                           p["target"], tol=p.get("tol", 1e-6))
            _emit(request, _json_payload(request, {"lambda": lam,
                                                   "target": p["target"]}))
        elif request.command == "eig1d":
            rows = []
            for ch in config.channels:
                dom = (Domain1D("interval", config.x_domain.c, config.x_domain.bc)
                       if config.x_domain.kind == "interval"
                       else Domain1D("truncated_line", 12.0))
                e = threshold(ComparisonSpec(config.omega, ch.lam, ch.profile, dom))
                rows.append({"lambda": ch.lam, "center": ch.center, "threshold": e})
            _emit(request, _json_payload(request, {"channels": rows}))
        elif request.command == "eig2d":
            y_half = p.get("y_half", 8.0)
            policy = grid2d.ScanPolicy()
            grid = grid2d._build_scan_grid(config, policy, y_half, y_half)
            ham = grid2d.assemble_h2d(config, grid)
            pairs = grid2d.lowest_eigenvalues(ham, p.get("k", 1),
                                              tol=p.get("tol", 1e-7), seed=_SEED)
            if p.get("export_matrix"):
                with open(p["export_matrix"], "w") as fh:
                    fh.write(ham.export_coo())
            _emit(request, _json_payload(request, {
                "y_half": y_half,
                "eigenvalues": [v for v, _ in pairs],
                "residuals": [r for _, r in pairs],
            }))
        elif request.command == "scan":
            scan = grid2d.transition_scan(config, p["ladder"])
            if request.fmt == "csv":
                _emit(request, _csv_with_header(request, grid2d.scan_csv(scan)))
            else:
                _emit(request, _json_payload(request, {
                    "rows": [{"Y": r.y_half, "lambda0": r.lambda0} for r in scan.rows],
                    "c_fit": scan.c_fit, "r_squared": scan.r_squared,
                    "verdict": scan.verdict,
                }))
        elif request.command == "weyl":
            ch = _single_channel(config)
            dom = Domain1D("truncated_line", 12.0)
            spec = ComparisonSpec(config.omega, ch.lam, ch.profile, dom)
            gs = ground_state(spec, Grid1D(-12.0, 12.0, 4001))
            rows = weyl.weyl_certificate(config, gs, p.get("mu", 0.0), p["eps"])
            if request.fmt == "csv":
                _emit(request, _csv_with_header(request, weyl.certificate_csv(rows)))
            else:
                _emit(request, _json_payload(request, weyl.certificate_summary(rows)))
        elif request.command == "classify":
            cls = bracketing.classify(config, tol=p.get("tol", 1e-6))
            _emit(request, _json_payload(
                request, bracketing.classification_json_dict(config, cls)))
        elif request.command == "bound":
            bound = bracketing.global_lower_bound(config)
            _emit(request, _json_payload(request, {"global_lower_bound": bound}))
        return 0
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SmilanskyError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 1


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise ConfigurationError(f"bad numeric list {text!r}: {exc}") from exc


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="smilansky-lab",
        description="Spectral analysis of the regularized Smilansky model")
    parser.add_argument("--threads", type=int, default=None,
                        help="cap worker threads (or SMILANSKY_LAB_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True)
        sp.add_argument("--output", default=None)
        sp.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        default=None)

    sp = sub.add_parser("critical", help="critical coupling of the first channel")
    common(sp)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp = sub.add_parser("tune", help="tune lambda to a target 1D threshold")
    common(sp)
    sp.add_argument("--target", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp = sub.add_parser("eig1d", help="per-channel comparison thresholds")
    common(sp)
    sp = sub.add_parser("eig2d", help="lowest 2D eigenvalues at one truncation")
    common(sp)
    sp.add_argument("--y-half", type=float, default=8.0)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--tol", type=float, default=1e-7)
    sp.add_argument("--export-matrix", default=None)
    sp = sub.add_parser("scan", help="transition scan over a Y ladder")
    common(sp)
    sp.add_argument("--ladder", required=True)
    sp = sub.add_parser("weyl", help="quasi-mode certificate")
    common(sp)
    sp.add_argument("--mu", type=float, default=0.0)
    sp.add_argument("--eps", required=True)
    sp = sub.add_parser("classify", help="t_V classification")
    common(sp)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp = sub.add_parser("bound", help="global lower bound")
    common(sp)

    args = parser.parse_args(argv)
    _set_threads(args.threads)

    params = {}
    for key in ("tol", "target", "y_half", "k", "mu"):
        if getattr(args, key, None) is not None:
            params[key] = getattr(args, key)
    if getattr(args, "export_matrix", None):
        params["export_matrix"] = args.export_matrix
    try:
        if getattr(args, "ladder", None):
            params["ladder"] = _parse_floats(args.ladder)
        if getattr(args, "eps", None):
            params["eps"] = _parse_floats(args.eps)
        fmt = args.fmt or ("csv" if args.command in ("scan", "weyl") else "json")
        request = RunRequest(command=args.command, config_path=args.config,
                             params=params, output=args.output, fmt=fmt)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    return run(request)


if __name__ == "__main__":
    sys.exit(main())
