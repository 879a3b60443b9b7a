import math

import pytest

from smilansky_lab import bracketing as br
from smilansky_lab.errors import ConfigurationError
from smilansky_lab.model import ChannelSpec, ModelConfig, PotentialProfile
from smilansky_lab.oned import tune_lambda_to_threshold


@pytest.fixture(scope="module")
def prof():
    return PotentialProfile("cos2", 1.0, 1.0)


@pytest.fixture(scope="module")
def lam_plus03(prof):
    return tune_lambda_to_threshold(1.0, prof, 0.3)


class TestClassify:
    def test_single_subcritical(self, prof, lam_crit):
        cfg = ModelConfig(omega=1.0,
                          channels=(ChannelSpec(0.5 * lam_crit, 0.0, prof),))
        cls = br.classify(cfg)
        assert cls.verdict == "subcritical" and cls.t_v > 0

    def test_two_channel_min_rule(self, prof, lam_e0_minus1, lam_plus03):
        cfg = ModelConfig(omega=1.0,
                          channels=(ChannelSpec(lam_e0_minus1, 0.0, prof),
                                    ChannelSpec(lam_plus03, 3.0, prof)))
        cls = br.classify(cfg)
        assert cls.verdict == "supercritical"
        assert abs(cls.t_v + 1.0) <= 2e-6

    def test_permutation_and_zero_channel_invariance(self, prof, lam_e0_minus1,
                                                     lam_plus03):
        base = ModelConfig(omega=1.0,
                           channels=(ChannelSpec(lam_e0_minus1, 0.0, prof),
                                     ChannelSpec(lam_plus03, 3.0, prof)))
        perm = ModelConfig(omega=1.0,
                           channels=(ChannelSpec(lam_plus03, 3.0, prof),
                                     ChannelSpec(lam_e0_minus1, 0.0, prof),
                                     ChannelSpec(0.0, -3.0, prof)))
        a, b = br.classify(base), br.classify(perm)
        assert a.verdict == b.verdict
        assert abs(a.t_v - b.t_v) < 1e-12

    def test_no_channel_rejected(self):
        with pytest.raises(ConfigurationError):
            br.classify(ModelConfig(omega=1.0))


class TestStrips:
    def test_partition_of_positive_axis(self, prof, lam_crit):
        cfg = ModelConfig(omega=1.0,
                          channels=(ChannelSpec(0.5 * lam_crit, 0.0, prof),))
        strips = br.strip_bounds(cfg, 12)
        for a, b in zip(strips, strips[1:]):
            assert a.y_range[1] == b.y_range[0]
        assert strips[0].y_range[0] == 0.0

    def test_net_bound_identity(self, prof, lam_crit):
        cfg = ModelConfig(omega=1.0,
                          channels=(ChannelSpec(0.5 * lam_crit, 0.0, prof),))
        for s in br.strip_bounds(cfg, 8, n_min=2):
            assert abs(s.net_bound - (s.separated_bound - s.correction)) < 1e-12

    def test_zero_coupling_strips(self):
        strips = br.strip_bounds(ModelConfig(omega=1.0), 6)
        for s in strips:
            assert s.correction == 0.0
            assert s.net_bound >= 0.0

    def test_correction_decay_trend(self, prof, lam_crit):
        ch = ChannelSpec(0.5 * lam_crit, 0.0, prof)
        ns = [2**j for j in range(3, 12)]
        corr = [br._correction(ch, n) for n in ns]
        # correction behaves like ln n / n: halves (up to the log factor)
        # under n doubling
        for n, c1, c2 in zip(ns, corr, corr[1:]):
            expect = 0.5 * math.log(2 * n) / math.log(n)
            assert abs(c2 / c1 - expect) < 0.2

    def test_divergence_when_positive(self, prof, lam_crit):
        cfg = ModelConfig(omega=1.0,
                          channels=(ChannelSpec(0.5 * lam_crit, 0.0, prof),))
        strips = br.strip_bounds(cfg, 3000)
        nets = [s.net_bound for s in strips]
        assert nets[-1] > nets[len(nets) // 2] > 0


class TestGlobalBound:
    def test_zero_coupling(self):
        assert br.global_lower_bound(ModelConfig(omega=1.0)) == 0.0

    def test_supercritical_routed(self, prof, lam_e0_minus1):
        cfg = ModelConfig(omega=1.0,
                          channels=(ChannelSpec(lam_e0_minus1, 0.0, prof),))
        assert br.global_lower_bound(cfg) == "unbounded below"

    def test_subcritical_finite_and_below_central(self, prof, lam_crit):
        lam = 0.5 * lam_crit
        cfg = ModelConfig(omega=1.0, channels=(ChannelSpec(lam, 0.0, prof),))
        bound = br.global_lower_bound(cfg)
        assert isinstance(bound, float)
        assert bound <= -lam * math.log(2.0) ** 2 + 1e-12
