"""Analysis of a realized two-arm trial dataset.

Kaplan-Meier curves, restricted-mean estimates with plug-in variances, the
standardized restricted-mean difference test, and a log-rank comparator.
Ties between events and censorings are resolved events-first throughout.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from ._kernels import arm_rmst_var, logrank_stat
from .errors import DataError, TruncationWarning

CONTROL = 0
TREATMENT = 1

_CSV_HEADER = ["arm", "time", "event", "responder"]


@dataclass(frozen=True)
class SubjectRecord:
    arm: int
    time: float
    event: bool
    responder: bool | None = None

    def __post_init__(self):
        if self.time < 0:
            raise ValueError(f"observed time must be nonnegative, got {self.time}")
        if self.arm not in (CONTROL, TREATMENT):
            raise ValueError(f"arm must be 0 or 1, got {self.arm}")


@dataclass(frozen=True)
class TrialData:
    """Column-oriented per-subject records for a two-arm trial."""

    arm: np.ndarray
    time: np.ndarray
    event: np.ndarray
    responder: np.ndarray | None = None

    def __post_init__(self):
        n = self.time.shape[0]
        if self.arm.shape[0] != n or self.event.shape[0] != n:
            raise ValueError("column lengths differ")
        if np.any(self.time < 0):
            raise ValueError("observed times must be nonnegative")

    @classmethod
    def from_records(cls, records) -> "TrialData":
        records = list(records)
        responders = [r.responder for r in records]
        return cls(
            arm=np.array([r.arm for r in records], dtype=np.int64),
            time=np.array([r.time for r in records], dtype=np.float64),
            event=np.array([r.event for r in records], dtype=bool),
            responder=None
            if any(r is None for r in responders)
            else np.array(responders, dtype=bool),
        )

    def arm_times(self, arm: int) -> tuple[np.ndarray, np.ndarray]:
        """Sorted (time, event) arrays for one arm."""
        mask = self.arm == arm
        t = self.time[mask]
        e = self.event[mask]
        order = np.argsort(t, kind="stable")
        return t[order], e[order]

    def n_arm(self, arm: int) -> int:
        return int(np.sum(self.arm == arm))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(_CSV_HEADER)
            for i in range(self.time.shape[0]):
                resp = "" if self.responder is None else int(self.responder[i])
                writer.writerow(
                    [int(self.arm[i]), repr(float(self.time[i])), int(self.event[i]), resp]
                )

    @classmethod
    def from_csv(cls, path) -> "TrialData":
        arms, times, events, responders = [], [], [], []
        try:
            fh = open(path, newline="")
        except OSError as exc:
            raise DataError(f"cannot read {path}: {exc}") from exc
        with fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != _CSV_HEADER:
                raise DataError(f"{path}: expected header {','.join(_CSV_HEADER)}")
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                try:
                    arm = int(row[0])
                    time = float(row[1])
                    event = int(row[2])
                    resp = row[3].strip() if len(row) > 3 else ""
                except (ValueError, IndexError) as exc:
                    raise DataError(f"{path}:{lineno}: malformed row {row!r}") from exc
                if arm not in (0, 1) or event not in (0, 1) or time < 0:
                    raise DataError(f"{path}:{lineno}: invalid values in row {row!r}")
                arms.append(arm)
                times.append(time)
                events.append(bool(event))
                responders.append(None if resp == "" else bool(int(resp)))
        if not times:
            raise DataError(f"{path}: no data rows")
        return cls(
            arm=np.array(arms, dtype=np.int64),
            time=np.array(times, dtype=np.float64),
            event=np.array(events, dtype=bool),
            responder=None
            if any(r is None for r in responders)
            else np.array(responders, dtype=bool),
        )


@dataclass(frozen=True)
class KmCurve:
    """Product-limit estimate: step values at the distinct event times."""

    times: np.ndarray
    survival: np.ndarray
    at_risk: np.ndarray
    events: np.ndarray
    max_time: float = field(default=0.0)

    def at(self, t: float) -> float:
        """Step value of the curve at time t (right-continuous)."""
        idx = int(np.searchsorted(self.times, t, side="right"))
        return 1.0 if idx == 0 else float(self.survival[idx - 1])


def kaplan_meier(times, events) -> KmCurve:
    """Product-limit estimator for a single arm.

    ``times`` and ``events`` are parallel sequences; censorings tied with an
    event time remain at risk for that event.
    """
    t = np.asarray(times, dtype=np.float64)
    e = np.asarray(events, dtype=bool)
    if t.size == 0:
        raise DataError("kaplan_meier needs at least one record")
    if np.any(t < 0):
        raise DataError("observed times must be nonnegative")
    order = np.argsort(t, kind="stable")
    t, e = t[order], e[order]
    n = t.size

    u, start = np.unique(t, return_index=True)
    d = np.add.reduceat(e.astype(np.float64), start)
    y = (n - start).astype(np.float64)
    mask = d > 0
    surv = np.cumprod(1.0 - d / y)[mask]
    return KmCurve(
        times=u[mask],
        survival=surv,
        at_risk=y[mask].astype(np.int64),
        events=d[mask].astype(np.int64),
        max_time=float(t[-1]),
    )


def rmst_from_km(curve: KmCurve, tau: float) -> float:
    """Exact step-function integral of the KM curve over [0, tau].

    If the curve ends, still positive, before tau, it is carried flat to tau
    and a TruncationWarning is emitted.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    last = curve.survival[-1] if curve.survival.size else 1.0
    if curve.max_time < tau and last > 0.0:
        warnings.warn(
            f"curve ends censored at {curve.max_time} before horizon {tau}; extended flat",
            TruncationWarning,
            stacklevel=2,
        )
    ts = np.minimum(curve.times, tau)
    left = np.concatenate(([1.0], curve.survival[:-1]))
    area = float(np.sum(left * (ts - np.concatenate(([0.0], ts[:-1])))))
    tail_start = float(ts[-1]) if ts.size else 0.0
    return area + last * max(0.0, tau - tail_start)


def rmst_variance_hat(times, events, tau: float) -> float:
    """Plug-in estimate of the limiting variance (scaled by the arm size).

    Substitutes the KM curve, the reverse-KM censoring survival (evaluated at
    its left limit), and the empirical remaining area into the limiting
    variance integral.
    """
    t = np.asarray(times, dtype=np.float64)
    e = np.asarray(events, dtype=bool)
    order = np.argsort(t, kind="stable")
    _, sigma2, _ = arm_rmst_var(t[order], e[order].astype(np.float64), tau)
    return sigma2


@dataclass(frozen=True)
class RmstTestResult:
    k_hat0: float
    k_hat1: float
    sigma_hat0_sq: float
    sigma_hat1_sq: float
    z: float
    p_one_sided: float
    rejected: bool
    truncated: bool = False


@dataclass(frozen=True)
class LogrankResult:
    z: float
    p_one_sided: float
    rejected: bool


def rmst_test(data: TrialData, tau: float, alpha: float = 0.05) -> RmstTestResult:
    """Standardized restricted-mean difference test, one-sided for treatment."""
    n0, n1 = data.n_arm(CONTROL), data.n_arm(TREATMENT)
    if n0 == 0 or n1 == 0:
        raise DataError("both arms must be non-empty")
    t0, e0 = data.arm_times(CONTROL)
    t1, e1 = data.arm_times(TREATMENT)
    k0, s0, trunc0 = arm_rmst_var(t0, e0.astype(np.float64), tau)
    k1, s1, trunc1 = arm_rmst_var(t1, e1.astype(np.float64), tau)
    pooled = s0 / n0 + s1 / n1
    if pooled <= 0.0:
        raise DataError("pooled variance is zero; data are degenerate")
    z = (k1 - k0) / math.sqrt(pooled)
    p = float(norm.sf(z))
    return RmstTestResult(
        k_hat0=k0,
        k_hat1=k1,
        sigma_hat0_sq=s0,
        sigma_hat1_sq=s1,
        z=z,
        p_one_sided=p,
        rejected=bool(z > norm.ppf(1.0 - alpha)),
        truncated=trunc0 or trunc1,
    )


def logrank_test(data: TrialData, alpha: float = 0.05) -> LogrankResult:
    """Two-sample log-rank test, oriented so positive z favors treatment."""
    if data.n_arm(CONTROL) == 0 or data.n_arm(TREATMENT) == 0:
        raise DataError("both arms must be non-empty")
    if not np.any(data.event):
        raise DataError("log-rank needs at least one event")
    num, var = logrank_stat(
        data.time, data.event.astype(np.float64), data.arm.astype(np.float64)
    )
    if var <= 0.0:
        raise DataError("log-rank variance is zero; data are degenerate")
    z = num / math.sqrt(var)
    p = float(norm.sf(z))
    return LogrankResult(z=z, p_one_sided=p, rejected=bool(z > norm.ppf(1.0 - alpha)))
