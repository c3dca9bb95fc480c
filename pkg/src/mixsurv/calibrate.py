"""Recover subgroup survival laws from design-stage summary statistics.

Three summary sets are supported: subgroup means and their between-arm
differences, horizon survival rates and their differences, and horizon rates
combined with restricted-mean improvements. Calibrating and then summarizing
round-trips to numerical precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from scipy.optimize import brentq

from .errors import InfeasibleInputError, NumericError
from .laws import MixtureArm, ParametricSurvival

MEANS_SET = "means"
RATES_SET = "rates"
RATES_DELTAS_SET = "rates-deltas"

_SUBGROUPS = (
    ("control responders", 0),
    ("control non-responders", 1),
    ("treatment responders", 2),
    ("treatment non-responders", 3),
)


@dataclass(frozen=True)
class SummaryInputs:
    """One of the three summary-statistics sets plus the shared inputs.

    Which payload fields are required depends on ``set_name``:

    - ``means``: m0_r, m0_nr, diffm_r, diffm_nr
    - ``rates``: S0_r, S0_nr, diffS_r, diffS_nr
    - ``rates-deltas``: S0_r, S0_nr, Delta_r, Delta_nr
    """

    set_name: str
    p0: float
    delta_p: float
    tau: float
    censor_scale: float
    shape: float = 1.0
    m0_r: float | None = None
    m0_nr: float | None = None
    diffm_r: float | None = None
    diffm_nr: float | None = None
    S0_r: float | None = None
    S0_nr: float | None = None
    diffS_r: float | None = None
    diffS_nr: float | None = None
    Delta_r: float | None = None
    Delta_nr: float | None = None

    _REQUIRED = {
        MEANS_SET: ("m0_r", "m0_nr", "diffm_r", "diffm_nr"),
        RATES_SET: ("S0_r", "S0_nr", "diffS_r", "diffS_nr"),
        RATES_DELTAS_SET: ("S0_r", "S0_nr", "Delta_r", "Delta_nr"),
    }

    def __post_init__(self):
        if self.set_name not in self._REQUIRED:
            raise ValueError(f"unknown summary set {self.set_name!r}")
        missing = [f for f in self._REQUIRED[self.set_name] if getattr(self, f) is None]
        if missing:
            raise ValueError(f"summary set {self.set_name!r} requires {', '.join(missing)}")
        if not 0.0 < self.p0 < 1.0:
            raise ValueError(f"p0 must be in (0, 1), got {self.p0}")
        if not 0.0 <= self.p0 + self.delta_p <= 1.0:
            raise ValueError(f"p0 + delta_p must be in [0, 1], got {self.p0 + self.delta_p}")
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.censor_scale <= 0:
            raise ValueError(f"censor_scale must be positive, got {self.censor_scale}")
        if self.shape <= 0:
            raise ValueError(f"shape must be positive, got {self.shape}")


@dataclass(frozen=True)
class CalibratedDesign:
    control: MixtureArm
    treatment: MixtureArm
    censoring: ParametricSurvival
    tau: float


def _law(scale: float, shape: float) -> ParametricSurvival:
    if shape == 1.0:
        return ParametricSurvival.exponential(scale)
    return ParametricSurvival.weibull(scale, shape)


def _design(scales, inputs: SummaryInputs) -> CalibratedDesign:
    b = inputs.shape
    control = MixtureArm(inputs.p0, _law(scales[0], b), _law(scales[1], b))
    treatment = MixtureArm(inputs.p0 + inputs.delta_p, _law(scales[2], b), _law(scales[3], b))
    censoring = ParametricSurvival.exponential(inputs.censor_scale)
    return CalibratedDesign(control, treatment, censoring, inputs.tau)


def calibrate_from_means(inputs: SummaryInputs) -> CalibratedDesign:
    """Scales from subgroup means: scale = mean / Gamma(1 + 1/shape)."""
    gamma = math.gamma(1.0 + 1.0 / inputs.shape)
    means = [
        inputs.m0_r,
        inputs.m0_nr,
        inputs.m0_r + inputs.diffm_r,
        inputs.m0_nr + inputs.diffm_nr,
    ]
    for (name, idx) in _SUBGROUPS:
        if means[idx] <= 0:
            raise InfeasibleInputError(name, f"implied mean {means[idx]} is not positive")
    return _design([m / gamma for m in means], inputs)


def calibrate_from_rates(inputs: SummaryInputs) -> CalibratedDesign:
    """Scales from horizon survival rates: scale = tau / (-ln S(tau))^(1/shape)."""
    rates = [
        inputs.S0_r,
        inputs.S0_nr,
        inputs.S0_r + inputs.diffS_r,
        inputs.S0_nr + inputs.diffS_nr,
    ]
    for (name, idx) in _SUBGROUPS:
        if not 0.0 < rates[idx] < 1.0:
            raise InfeasibleInputError(name, f"implied horizon rate {rates[idx]} is outside (0, 1)")
    scales = [inputs.tau / (-math.log(r)) ** (1.0 / inputs.shape) for r in rates]
    return _design(scales, inputs)


def _invert_rmst(target: float, tau: float, shape: float, subgroup: str) -> float:
    """Scale whose restricted mean at tau equals target (strictly increasing)."""
    if not 0.0 < target < tau:
        raise InfeasibleInputError(
            subgroup, f"target restricted mean {target} must lie strictly inside (0, {tau})"
        )

    def gap(scale):
        return _law(scale, shape).rmst(tau) - target

    lo, hi = 1e-8 * tau, tau
    while gap(hi) < 0:
        hi *= 2.0
        if hi > 1e12 * tau:
            raise NumericError(f"restricted-mean inversion bracket blew up for {subgroup}")
    try:
        return brentq(gap, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=200)
    except RuntimeError as exc:  # pragma: no cover - brentq rarely fails on a bracket
        raise NumericError(f"restricted-mean inversion failed for {subgroup}: {exc}") from exc


def _taylor_scale(target: float, base_scale: float, tau: float, shape: float) -> float:
    """First-order expansion of the restricted mean in the scale, around base_scale.

    Kept for comparison with the exact inversion; accuracy degrades with the
    size of the restricted-mean increment.
    """
    h = 1e-6 * base_scale
    k_plus = _law(base_scale + h, shape).rmst(tau)
    k_minus = _law(base_scale - h, shape).rmst(tau)
    slope = (k_plus - k_minus) / (2.0 * h)
    base = _law(base_scale, shape).rmst(tau)
    return base_scale + (target - base) / slope


def calibrate_from_rates_and_deltas(
    inputs: SummaryInputs, taylor: bool = False
) -> CalibratedDesign:
    """Control scales from rates; treatment scales by inverting the restricted mean.

    With ``taylor=True`` the treatment scales come from a first-order
    expansion instead of exact root-finding.
    """
    base = calibrate_from_rates(
        replace(inputs, set_name=RATES_SET, diffS_r=0.0, diffS_nr=0.0)
    )
    tau, b = inputs.tau, inputs.shape
    c_r = base.control.responders.scale
    c_nr = base.control.non_responders.scale
    targets = [
        ("treatment responders", c_r, _law(c_r, b).rmst(tau) + inputs.Delta_r),
        ("treatment non-responders", c_nr, _law(c_nr, b).rmst(tau) + inputs.Delta_nr),
    ]
    solved = []
    for name, base_scale, target in targets:
        if taylor:
            if not 0.0 < target < tau:
                raise InfeasibleInputError(
                    name, f"target restricted mean {target} must lie strictly inside (0, {tau})"
                )
            solved.append(_taylor_scale(target, base_scale, tau, b))
        else:
            solved.append(_invert_rmst(target, tau, b, name))
    return _design([c_r, c_nr, solved[0], solved[1]], inputs)


def calibrate(inputs: SummaryInputs, taylor: bool = False) -> CalibratedDesign:
    """Dispatch on the summary set."""
    if inputs.set_name == MEANS_SET:
        return calibrate_from_means(inputs)
    if inputs.set_name == RATES_SET:
        return calibrate_from_rates(inputs)
    return calibrate_from_rates_and_deltas(inputs, taylor=taylor)


def summarize(design: CalibratedDesign, set_name: str) -> SummaryInputs:
    """Recompute a summary set from calibrated laws (inverse of calibrate)."""
    tau = design.tau
    ctrl, trt = design.control, design.treatment
    shared = dict(
        set_name=set_name,
        p0=ctrl.p,
        delta_p=trt.p - ctrl.p,
        tau=tau,
        censor_scale=design.censoring.scale,
        shape=ctrl.responders.shape,
    )
    if set_name == MEANS_SET:
        return SummaryInputs(
            **shared,
            m0_r=ctrl.responders.mean,
            m0_nr=ctrl.non_responders.mean,
            diffm_r=trt.responders.mean - ctrl.responders.mean,
            diffm_nr=trt.non_responders.mean - ctrl.non_responders.mean,
        )
    if set_name == RATES_SET:
        return SummaryInputs(
            **shared,
            S0_r=ctrl.responders.survival(tau),
            S0_nr=ctrl.non_responders.survival(tau),
            diffS_r=trt.responders.survival(tau) - ctrl.responders.survival(tau),
            diffS_nr=trt.non_responders.survival(tau) - ctrl.non_responders.survival(tau),
        )
    if set_name == RATES_DELTAS_SET:
        return SummaryInputs(
            **shared,
            S0_r=ctrl.responders.survival(tau),
            S0_nr=ctrl.non_responders.survival(tau),
            Delta_r=trt.responders.rmst(tau) - ctrl.responders.rmst(tau),
            Delta_nr=trt.non_responders.rmst(tau) - ctrl.non_responders.rmst(tau),
        )
    raise ValueError(f"unknown summary set {set_name!r}")
