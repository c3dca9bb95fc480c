"""Sample-size assembly and its asymptotic-power inverse."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.stats import norm

from .errors import InfeasibleDesignError
from .laws import MixtureArm, ParametricSurvival, effect_size
from .variance import limiting_variance


@dataclass(frozen=True)
class DesignSpec:
    """Horizon, error rates, allocation, and the censoring law of a design.

    ``alpha`` is one-sided; set ``two_sided=True`` to interpret it as a
    two-sided level (it is halved internally).
    """

    tau: float
    alpha: float
    beta: float
    censoring: ParametricSurvival | None
    pi: float = 0.5
    two_sided: bool = False

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0 or not 0.0 < self.beta < 1.0:
            raise ValueError("alpha and beta must be in (0, 1)")
        if self.one_sided_alpha + self.beta >= 1.0:
            raise ValueError("alpha + beta must be below 1")
        if not 0.0 < self.pi < 1.0:
            raise ValueError(f"allocation fraction must be in (0, 1), got {self.pi}")
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")

    @property
    def one_sided_alpha(self) -> float:
        return self.alpha / 2.0 if self.two_sided else self.alpha


@dataclass(frozen=True)
class SampleSizeResult:
    n_total: float
    n_rounded: int
    n_control: int
    n_treatment: int
    d_tau: float
    sigma0_sq: float
    sigma1_sq: float


def _split(n_rounded: int, pi: float) -> tuple[int, int]:
    n_control = math.ceil(pi * n_rounded)
    return n_control, n_rounded - n_control


def sample_size(
    control: MixtureArm, treatment: MixtureArm, spec: DesignSpec
) -> SampleSizeResult:
    """Total sample size for the restricted-mean test at the design's power.

    n = (z_alpha + z_beta)^2 / D^2 * (sigma0^2/pi + sigma1^2/(1-pi)),
    rounded up, with the control share rounded up inside the total.
    """
    effect = effect_size(control, treatment, spec.tau)
    d_tau = effect.d_tau
    if d_tau <= 0:
        raise InfeasibleDesignError(
            f"no positive effect to detect (restricted-mean difference {d_tau})"
        )
    sigma0 = limiting_variance(control, spec.censoring, spec.tau).value
    sigma1 = limiting_variance(treatment, spec.censoring, spec.tau).value
    z_a = norm.ppf(1.0 - spec.one_sided_alpha)
    z_b = norm.ppf(1.0 - spec.beta)
    n_total = float(
        (z_a + z_b) ** 2 / d_tau**2 * (sigma0 / spec.pi + sigma1 / (1.0 - spec.pi))
    )
    n_rounded = math.ceil(n_total)
    n_control, n_treatment = _split(n_rounded, spec.pi)
    return SampleSizeResult(n_total, n_rounded, n_control, n_treatment, d_tau, sigma0, sigma1)


def power_at_n(
    control: MixtureArm, treatment: MixtureArm, spec: DesignSpec, n: int
) -> float:
    """Asymptotic power of the restricted-mean test at total sample size n."""
    if n < 2:
        raise ValueError(f"need at least 2 subjects, got {n}")
    n_control, n_treatment = _split(n, spec.pi)
    if n_control == 0 or n_treatment == 0:
        raise ValueError(f"allocation {spec.pi} leaves an empty group at n={n}")
    effect = effect_size(control, treatment, spec.tau)
    if effect.d_tau <= 0:
        raise InfeasibleDesignError(
            f"no positive effect to detect (restricted-mean difference {effect.d_tau})"
        )
    sigma0 = limiting_variance(control, spec.censoring, spec.tau).value
    sigma1 = limiting_variance(treatment, spec.censoring, spec.tau).value
    se = math.sqrt(sigma0 / n_control + sigma1 / n_treatment)
    z_a = norm.ppf(1.0 - spec.one_sided_alpha)
    return float(norm.cdf(effect.d_tau / se - z_a))
