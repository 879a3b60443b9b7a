import numpy as np
import pytest

from smilansky_lab.model import ChannelSpec, ModelConfig, PotentialProfile
from smilansky_lab.oned import (ComparisonSpec, Domain1D, Grid1D,
                                critical_coupling, ground_state,
                                tune_lambda_to_threshold)


@pytest.fixture(scope="session")
def cos2_profile():
    return PotentialProfile(family="cos2", a=1.0, amplitude=1.0)


@pytest.fixture(scope="session")
def lam_crit(cos2_profile):
    return critical_coupling(1.0, cos2_profile)


@pytest.fixture(scope="session")
def lam_e0_minus1(cos2_profile):
    """Coupling placing the 1D threshold at -1 (omega = 1)."""
    return tune_lambda_to_threshold(1.0, cos2_profile, -1.0)


@pytest.fixture(scope="session")
def gs_minus1(cos2_profile, lam_e0_minus1):
    spec = ComparisonSpec(1.0, lam_e0_minus1, cos2_profile,
                          Domain1D("truncated_line", 12.0))
    return ground_state(spec, Grid1D(-12.0, 12.0, 4001))


@pytest.fixture(scope="session")
def supercritical_config(cos2_profile, lam_e0_minus1):
    return ModelConfig(omega=1.0,
                       channels=(ChannelSpec(lam_e0_minus1, 0.0, cos2_profile),))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260824)
