import numpy as np
import pytest

from mixsurv._kernels import BACKEND, _pykernels

try:
    from mixsurv._kernels import _ckernels
except ImportError:  # pragma: no cover - environment without the extension
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def _random_arm(rng, n, tie_fraction=0.3):
    t = rng.exponential(5.0, n)
    # force ties by rounding a fraction of the times
    tied = rng.random(n) < tie_fraction
    t[tied] = np.round(t[tied], 1)
    e = (rng.random(n) < 0.7).astype(np.float64)
    order = np.argsort(t, kind="stable")
    return t[order], e[order]


@needs_ext
def test_backends_agree_on_arm_kernel():
    rng = np.random.default_rng(2024)
    for n in (1, 2, 5, 37, 200, 1111):
        t, e = _random_arm(rng, n)
        for tau in (0.5, 3.0, 8.0, 50.0):
            py = _pykernels.arm_rmst_var(t, e, tau)
            cy = _ckernels.arm_rmst_var(t, e, tau)
            assert cy[0] == pytest.approx(py[0], abs=1e-12)
            assert cy[1] == pytest.approx(py[1], abs=1e-10)
            assert cy[2] == py[2]


@needs_ext
def test_backends_agree_on_logrank():
    rng = np.random.default_rng(7)
    for n in (2, 10, 101, 1000):
        t, e = _random_arm(rng, n)
        g = (rng.random(n) < 0.5).astype(np.float64)
        py = _pykernels.logrank_stat(t, e, g)
        cy = _ckernels.logrank_stat(t, e, g)
        assert cy[0] == pytest.approx(py[0], abs=1e-10)
        assert cy[1] == pytest.approx(py[1], abs=1e-10)


def test_variance_equals_greenwood_form_untied():
    """On untied data the plug-in sum collapses to the Greenwood-weighted form."""
    rng = np.random.default_rng(5)
    n = 400
    t = np.sort(rng.exponential(5.0, n))
    e = (rng.random(n) < 0.7).astype(np.float64)
    tau = 6.0
    rmst, sigma2, _ = _pykernels.arm_rmst_var(t, e, tau)

    # direct Greenwood-style computation
    S = 1.0
    cum_k = 0.0
    prev = 0.0
    total = 0.0
    for i in range(n):
        y = n - i
        seg_end = min(t[i], tau)
        if seg_end > prev:
            cum_k += S * (seg_end - prev)
            prev = seg_end
        new_s = S * (1.0 - e[i] / y)
        if e[i] > 0 and t[i] <= tau and new_s > 0:
            w = rmst - cum_k
            total += w * w / (y * (y - 1))
        S = new_s
    assert sigma2 == pytest.approx(n * total, rel=1e-10)


def test_empty_arm_rejected():
    with pytest.raises(ValueError):
        _pykernels.arm_rmst_var(np.array([]), np.array([]), 1.0)
    with pytest.raises(ValueError):
        _pykernels.logrank_stat(np.array([]), np.array([]), np.array([]))


def test_selected_backend_reported():
    assert BACKEND in ("cython", "numpy")
