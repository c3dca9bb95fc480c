import numpy as np
import pytest

from mixsurv.errors import DataError, TruncationWarning
from mixsurv.inference import (
    TrialData,
    kaplan_meier,
    logrank_test,
    rmst_from_km,
    rmst_test,
    rmst_variance_hat,
)
from mixsurv.simulate import Scenario, simulate_trial


def _scenario(ref_control, ref_treatment, ref_censoring, **kw):
    defaults = dict(
        control=ref_control,
        treatment=ref_treatment,
        censoring=ref_censoring,
        tau=5.0,
        n_total=400,
        replications=1,
        seed=99,
    )
    defaults.update(kw)
    return Scenario(**defaults)


def test_km_hand_example():
    times = [1.0, 2.0, 2.0, 3.0, 4.0, 5.0]
    events = [1, 0, 1, 1, 0, 1]
    curve = kaplan_meier(times, events)
    assert curve.times.tolist() == [1.0, 2.0, 3.0, 5.0]
    assert curve.survival == pytest.approx([5 / 6, 2 / 3, 4 / 9, 0.0], abs=1e-12)
    assert curve.at_risk.tolist() == [6, 5, 3, 1]
    assert rmst_from_km(curve, 5.0) == pytest.approx(61 / 18, abs=1e-12)


def test_events_first_tie_convention():
    # a censoring tied with an event stays at risk for that event
    curve = kaplan_meier([1.0, 1.0, 2.0], [1, 0, 1])
    assert curve.survival == pytest.approx([2 / 3, 0.0], abs=1e-12)


def test_truncation_warning_on_early_censoring():
    curve = kaplan_meier([1.0, 2.0, 2.0, 3.0, 4.0], [1, 0, 1, 1, 0])
    with pytest.warns(TruncationWarning):
        value = rmst_from_km(curve, 5.0)
    # flat extension of the final step
    step = 1 + 4 / 5 + 3 / 5 + 3 / 10 * 2
    assert value == pytest.approx(step, abs=1e-12)


def test_km_at_accessor():
    curve = kaplan_meier([1.0, 2.0], [1, 1])
    assert curve.at(0.5) == 1.0
    assert curve.at(1.0) == pytest.approx(0.5)
    assert curve.at(3.0) == 0.0


def test_rmst_test_orientation(ref_control, ref_treatment, ref_censoring):
    data = simulate_trial(_scenario(ref_control, ref_treatment, ref_censoring, n_total=2000), 0)
    res = rmst_test(data, 5.0)
    assert res.k_hat1 > res.k_hat0
    assert res.z > 0
    swapped = TrialData(arm=1 - data.arm, time=data.time, event=data.event)
    res_swapped = rmst_test(swapped, 5.0)
    assert res_swapped.z == pytest.approx(-res.z, abs=1e-12)


def test_time_rescaling_invariance(ref_control, ref_treatment, ref_censoring):
    data = simulate_trial(_scenario(ref_control, ref_treatment, ref_censoring), 3)
    c = 12.0
    scaled = TrialData(arm=data.arm, time=data.time * c, event=data.event)
    res = rmst_test(data, 5.0)
    res_scaled = rmst_test(scaled, 5.0 * c)
    assert res_scaled.z == pytest.approx(res.z, abs=1e-9)
    lr = logrank_test(data)
    lr_scaled = logrank_test(scaled)
    assert lr_scaled.z == pytest.approx(lr.z, abs=1e-12)


def test_logrank_matches_statsmodels(ref_control, ref_treatment, ref_censoring):
    pytest.importorskip("statsmodels")
    from statsmodels.duration.survfunc import survdiff

    data = simulate_trial(_scenario(ref_control, ref_treatment, ref_censoring), 7)
    chi2, _ = survdiff(data.time, data.event.astype(int), data.arm)
    lr = logrank_test(data)
    assert lr.z**2 == pytest.approx(float(chi2), abs=1e-8)


def test_variance_hat_positive(ref_control, ref_treatment, ref_censoring):
    data = simulate_trial(_scenario(ref_control, ref_treatment, ref_censoring), 5)
    t, e = data.arm_times(0)
    assert rmst_variance_hat(t, e, 5.0) > 0


def test_degenerate_data_errors():
    all_censored = TrialData(
        arm=np.array([0, 0, 1, 1]),
        time=np.array([1.0, 2.0, 1.5, 2.5]),
        event=np.array([False, False, False, False]),
    )
    with pytest.raises(DataError):
        logrank_test(all_censored)
    with pytest.raises(DataError):
        rmst_test(all_censored, 5.0)
    one_armed = TrialData(
        arm=np.array([0, 0]), time=np.array([1.0, 2.0]), event=np.array([True, True])
    )
    with pytest.raises(DataError):
        rmst_test(one_armed, 5.0)


def test_csv_round_trip(tmp_path, ref_control, ref_treatment, ref_censoring):
    data = simulate_trial(_scenario(ref_control, ref_treatment, ref_censoring, n_total=50), 0)
    path = tmp_path / "trial.csv"
    data.to_csv(path)
    loaded = TrialData.from_csv(path)
    np.testing.assert_array_equal(loaded.arm, data.arm)
    np.testing.assert_array_equal(loaded.time, data.time)
    np.testing.assert_array_equal(loaded.event, data.event)
    np.testing.assert_array_equal(loaded.responder, data.responder)


def test_csv_errors_name_the_line(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("arm,time,event,responder\n0,1.5,1,0\n0,-2.0,1,0\n")
    with pytest.raises(DataError, match=":3"):
        TrialData.from_csv(bad)
    bad.write_text("arm,time,event,responder\n0,oops,1,0\n")
    with pytest.raises(DataError, match=":2"):
        TrialData.from_csv(bad)
    bad.write_text("time,arm\n")
    with pytest.raises(DataError, match="header"):
        TrialData.from_csv(bad)
    bad.write_text("arm,time,event,responder\n")
    with pytest.raises(DataError, match="no data rows"):
        TrialData.from_csv(bad)
