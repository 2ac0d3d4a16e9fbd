import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homstab.errors import ConditionsFail, ConfigError, DomainError
from homstab.inequalities import (
    CURATED_AQ,
    Bump,
    CknSpec,
    GaussianMixture,
    WeightSpec,
    aq_membership,
    ckn_conditions,
    ckn_empirical,
    ckn_ratio,
    ckn_sweep,
    lebesgue_interpolation_check,
    log_sobolev_margin,
    muckenhoupt_ratio,
    optimal_gaussian_width,
    riesz_constant,
    sample_bumps,
)


@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 0.75, 0.99])
def test_hardy_type_conditions_pass(alpha):
    assert ckn_conditions(CknSpec.hardy_type(alpha)).overall


def test_hardy_type_fails_only_integrability_at_one():
    flags = ckn_conditions(CknSpec.hardy_type(1.0)).flags()
    assert not flags["integrability"]
    assert all(v for k, v in flags.items() if k != "integrability")


def test_spec_validation():
    with pytest.raises(ConfigError):
        CknSpec(3, 1.5, (2, 2, 2), (0, 0, 0), (0, 0, 0))
    with pytest.raises(ConfigError):
        CknSpec(3, 0.5, (2, 0.5, 2), (0, 0, 0), (0, 0, 0))


def test_empirical_requires_conditions():
    with pytest.raises(ConditionsFail):
        ckn_empirical(CknSpec.hardy_type(1.0), samples=2)


def test_hardy_ratio_below_sharp_constant():
    # alpha = 0 is Hardy's inequality with sharp constant 2
    emp = ckn_empirical(CknSpec.hardy_type(0.0), samples=6, seed=1)
    assert 0.0 < emp.constant < 2.0


@settings(max_examples=5, deadline=None)
@given(st.floats(0.01, 100.0))
def test_ckn_dilation_invariance(lam):
    spec = CknSpec.hardy_type(0.5)
    bump = Bump(0.7, 1.3, 0.4)
    r1 = ckn_ratio(spec, bump).ratio
    r2 = ckn_ratio(spec, bump.dilate(lam)).ratio
    assert abs(r1 - r2) <= 1e-10 * r1


def test_sample_bumps_reproducible():
    assert sample_bumps(5, 3) == sample_bumps(5, 3)


def test_sweep_csv(tmp_path):
    rows = ckn_sweep([CknSpec.hardy_type(0.5), CknSpec.hardy_type(1.0)], tmp_path / "s.csv", samples=2)
    assert rows[0]["overall"] == 1 and rows[1]["overall"] == 0
    assert math.isnan(rows[1]["empirical_constant"])
    assert (tmp_path / "s.csv").read_text().startswith("n,theta,")


def test_aq_curated_subset():
    for t1, t2, q in CURATED_AQ[::4]:
        spec = WeightSpec(t1, t2, q)
        assert aq_membership(spec) == muckenhoupt_ratio(spec, log2_samples=12).bounded


def test_aq_unweighted_is_constant_one():
    res = muckenhoupt_ratio(WeightSpec(0.0, 0.0, 2.0), log2_samples=10)
    assert math.isclose(res.max_ratio, 1.0) and math.isclose(res.min_ratio, 1.0)


def test_log_sobolev_equality_case():
    for a in (0.01, 1.0, 30.0):
        f = GaussianMixture.gaussian(optimal_gaussian_width(a))
        assert abs(log_sobolev_margin(f, a)) <= 1e-10


@settings(max_examples=15, deadline=None)
@given(st.floats(0.05, 20.0), st.floats(0.1, 10.0), st.floats(0.1, 10.0))
def test_log_sobolev_gaussian_margin_nonnegative_and_scale_free(width, a_rel, k):
    a = a_rel * width
    f = GaussianMixture.gaussian(width)
    m = log_sobolev_margin(f, a)
    assert m >= -1e-9
    scaled = GaussianMixture((k,), f.means, f.scales)
    assert abs(log_sobolev_margin(scaled, a) - m) <= 1e-9 * max(1.0, abs(m))


def test_log_sobolev_domain():
    with pytest.raises(DomainError):
        log_sobolev_margin(GaussianMixture.gaussian(1.0), 0.0)


def test_riesz_constant():
    assert math.isclose(riesz_constant(2.0), 1.0)
    with pytest.raises(DomainError):
        riesz_constant(1.0)


@settings(max_examples=40)
@given(st.lists(st.floats(-100, 100), min_size=1, max_size=30), st.floats(1.0, 8.0), st.floats(1.0, 8.0),
       st.floats(0.0, 1.0))
def test_lebesgue_interpolation(values, q0, q1, lam):
    assert lebesgue_interpolation_check(np.array(values), q0, q1, lam) >= -1e-12
