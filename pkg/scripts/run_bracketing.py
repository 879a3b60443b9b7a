"""Classify a multi-channel configuration and tabulate strip bounds.

Builds the two-channel reference configuration (thresholds -1 and +0.3),
prints its classification, then shows the Neumann-bracketing strip bounds
and the global lower bound for a subcritical single-channel configuration.
"""

import argparse
import json

from smilansky_lab import bracketing
from smilansky_lab.model import ChannelSpec, ModelConfig, PotentialProfile
from smilansky_lab.oned import critical_coupling, tune_lambda_to_threshold


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=2000)
    args = ap.parse_args()

    prof = PotentialProfile("cos2", 1.0, 1.0)
    lam_minus = tune_lambda_to_threshold(1.0, prof, -1.0)
    lam_plus = tune_lambda_to_threshold(1.0, prof, 0.3)
    two = ModelConfig(omega=1.0,
                      channels=(ChannelSpec(lam_minus, 0.0, prof),
                                ChannelSpec(lam_plus, 3.0, prof)))
    cls = bracketing.classify(two)
    print(json.dumps(bracketing.classification_json_dict(two, cls), indent=2))

    lam_crit = critical_coupling(1.0, prof)
    sub = ModelConfig(omega=1.0,
                      channels=(ChannelSpec(0.5 * lam_crit, 0.0, prof),))
    bound = bracketing.global_lower_bound(sub)
    print(f"\nsubcritical global lower bound: {bound}")

    strips = bracketing.strip_bounds(sub, args.n_max)
    print("n, y_lo, y_hi, separated, correction, net")
    for s in strips[:: max(1, len(strips) // 12)]:
        print(f"{s.index}, {s.y_range[0]:.4f}, {s.y_range[1]:.4f}, "
              f"{s.separated_bound:.4f}, {s.correction:.4f}, "
              f"{s.net_bound:.4f}")


if __name__ == "__main__":
    main()
