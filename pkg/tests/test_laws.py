import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from mixsurv.laws import (
    MixtureArm,
    ParametricSurvival,
    Setting,
    effect_from_anticipated,
    effect_size,
    hazard_ratio,
    survival_difference,
)

scales = st.floats(0.2, 60.0)
shapes = st.floats(0.5, 3.0)
probs = st.floats(0.0, 1.0)


def test_exponential_closed_forms():
    law = ParametricSurvival.exponential(4.0)
    assert law.mean == pytest.approx(4.0)
    assert law.survival(4.0) == pytest.approx(math.exp(-1.0))
    assert law.rmst(5.0) == pytest.approx(4.0 * (1.0 - math.exp(-1.25)), abs=1e-12)
    assert law.hazard(3.0) == pytest.approx(0.25, rel=1e-9)


def test_weibull_mean_and_survival():
    law = ParametricSurvival.weibull(10.0, 2.0)
    assert law.mean == pytest.approx(10.0 * math.gamma(1.5))
    assert law.survival(10.0) == pytest.approx(math.exp(-1.0))


@given(scale=scales, shape=shapes, tau=st.floats(0.5, 20.0))
@settings(max_examples=50, deadline=None)
def test_rmst_matches_quadrature(scale, shape, tau):
    law = ParametricSurvival.weibull(scale, shape)
    numeric, _ = quad(law.survival, 0.0, tau, limit=200)
    assert law.rmst(tau) == pytest.approx(numeric, abs=1e-8)


@given(scale=scales, shape=shapes, u=st.floats(0.0, 0.999))
@settings(max_examples=50, deadline=None)
def test_quantile_inverts_cdf(scale, shape, u):
    law = ParametricSurvival.weibull(scale, shape)
    t = law.quantile(u)
    assert 1.0 - law.survival(t) == pytest.approx(u, abs=1e-10)


def test_invalid_laws_rejected():
    with pytest.raises(ValueError):
        ParametricSurvival.exponential(-1.0)
    with pytest.raises(ValueError):
        ParametricSurvival.weibull(1.0, 0.0)
    with pytest.raises(ValueError):
        ParametricSurvival("exponential", 1.0, 2.0)


@given(
    p0=st.floats(0.05, 0.6),
    dp=st.floats(0.0, 0.35),
    s=st.tuples(scales, scales, scales, scales),
    shape=shapes,
    tau=st.floats(1.0, 15.0),
)
@settings(max_examples=60, deadline=None)
def test_decomposition_equals_direct_difference(p0, dp, s, shape, tau):
    control = MixtureArm(
        p0, ParametricSurvival.weibull(s[0], shape), ParametricSurvival.weibull(s[1], shape)
    )
    treatment = MixtureArm(
        p0 + dp, ParametricSurvival.weibull(s[2], shape), ParametricSurvival.weibull(s[3], shape)
    )
    effect = effect_size(control, treatment, tau)
    direct = treatment.rmst(tau) - control.rmst(tau)
    assert effect.d_tau == pytest.approx(direct, abs=1e-10)
    # regrouped decomposition evaluated by hand
    p1 = p0 + dp
    by_hand = p1 * effect.delta_r + (1.0 - p1) * effect.delta_nr + dp * effect.delta_0
    assert effect.d_tau == pytest.approx(by_hand, abs=1e-10)


def test_reference_design_effect(ref_control, ref_treatment):
    effect = effect_size(ref_control, ref_treatment, 5.0)
    assert effect.d_tau == pytest.approx(0.4297, abs=5e-4)
    assert effect.delta_r == pytest.approx(0.9031, abs=5e-4)
    assert effect.delta_nr == 0.0
    assert effect.delta_p == pytest.approx(0.19)
    assert effect.setting is Setting.III


def test_setting_classification():
    r = ParametricSurvival.exponential(10.0)
    nr = ParametricSurvival.exponential(5.0)
    better_r = ParametricSurvival.exponential(20.0)
    better_nr = ParametricSurvival.exponential(8.0)
    control = MixtureArm(0.2, r, nr)
    cases = [
        (MixtureArm(0.4, r, nr), Setting.I),
        (MixtureArm(0.4, r, better_nr), Setting.II),
        (MixtureArm(0.4, better_r, nr), Setting.III),
        (MixtureArm(0.4, better_r, better_nr), Setting.IV),
        (MixtureArm(0.2, better_r, nr), Setting.OTHER),
    ]
    for treatment, expected in cases:
        assert effect_size(control, treatment, 5.0).setting is expected


def test_effect_from_anticipated_by_hand():
    d = effect_from_anticipated(0.90, 0.0, 0.456, 0.19, 0.19)
    assert d == pytest.approx(0.38 * 0.90 + 0.19 * 0.456, abs=1e-12)
    assert effect_from_anticipated(0.0, 0.0, 0.0, 0.1, 0.2) == 0.0


def test_hazard_ratio_vs_numerical_log_derivative(ref_control, ref_treatment):
    eps = 1e-6
    for t in (0.5, 1.0, 2.5, 4.0, 5.0):
        h0 = -(math.log(ref_control.survival(t + eps)) - math.log(ref_control.survival(t - eps))) / (2 * eps)
        h1 = -(math.log(ref_treatment.survival(t + eps)) - math.log(ref_treatment.survival(t - eps))) / (2 * eps)
        assert hazard_ratio(ref_control, ref_treatment, t) == pytest.approx(h1 / h0, abs=1e-4)


def test_survival_difference_identity(ref_control, ref_treatment):
    for t in (0.0, 1.0, 3.3, 5.0):
        expected = ref_treatment.survival(t) - ref_control.survival(t)
        assert survival_difference(ref_control, ref_treatment, t) == pytest.approx(expected, abs=1e-12)


def test_identical_arms_have_unit_hazard_ratio(ref_control):
    assert hazard_ratio(ref_control, ref_control, 2.0) == pytest.approx(1.0, abs=1e-12)
