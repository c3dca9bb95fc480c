"""Hot-loop kernels for trial analysis, with backend selection at import.

The compiled Cython extension is used when present; otherwise (or when the
``MIXSURV_PURE_PYTHON`` environment variable is set) a pure-NumPy fallback
with identical semantics takes over. Both expose:

``arm_rmst_var(times, events, tau) -> (rmst, sigma2, truncated)``
    Kaplan-Meier RMST, the plug-in limiting variance (already scaled by the
    arm size n), and whether the curve had to be extended flat to tau.
    ``times`` must be sorted ascending; ``events`` is 1 for an observed event.

``logrank_stat(times, events, groups) -> (num, var)``
    Pooled-sorted two-group log-rank numerator (expected minus observed
    events in group 1, so positive favors group 1) and its hypergeometric
    variance.
"""

import os

if os.environ.get("MIXSURV_PURE_PYTHON"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND_NAME
arm_rmst_var = _impl.arm_rmst_var
logrank_stat = _impl.logrank_stat

__all__ = ["BACKEND", "arm_rmst_var", "logrank_stat"]
