"""Command-line surface: five subcommands over the design and analysis APIs.

Inputs come from an optional flat ``key = value`` config file plus flags;
flags win. Reports render as a human table, json, or csv with identical
numeric content. Exit codes: 0 success, 2 usage/config error, 3 infeasible
design, 4 numeric failure, 5 data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import warnings
from dataclasses import dataclass, field

from . import __version__
from .calibrate import (
    MEANS_SET,
    RATES_DELTAS_SET,
    RATES_SET,
    CalibratedDesign,
    SummaryInputs,
    calibrate,
)
from .design import DesignSpec, power_at_n, sample_size
from .errors import (
    DataError,
    InfeasibleDesignError,
    MixsurvError,
    NumericError,
    UsageError,
)
from .inference import TrialData, kaplan_meier, logrank_test, rmst_test
from .laws import (
    MixtureArm,
    ParametricSurvival,
    effect_from_anticipated,
    effect_size,
    hazard_ratio,
)
from .simulate import (
    RNG_NAME,
    GridSpec,
    Scenario,
    build_scenario_grid,
    run_study,
    simulate_trial,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERIC = 4
EXIT_DATA = 5

_SET_NAMES = {1: MEANS_SET, 2: RATES_SET, 3: RATES_DELTAS_SET}


@dataclass
class Report:
    """Echoed inputs plus a parameter/value results table."""

    command: str
    inputs: dict
    results: list = field(default_factory=list)  # (label, value, unit)
    warnings: list = field(default_factory=list)
    rng: str | None = None

    def add(self, label: str, value, unit: str) -> None:
        self.results.append((label, value, unit))

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(
                {
                    "command": self.command,
                    "version": __version__,
                    "rng": self.rng,
                    "inputs": self.inputs,
                    "results": [
                        {"parameter": k, "value": v, "unit": u}
                        for k, v, u in self.results
                    ],
                    "warnings": self.warnings,
                },
                indent=2,
            )
        if fmt == "csv":
            lines = ["parameter,value,unit"]
            for k, v, u in self.results:
                val = repr(float(v)) if isinstance(v, float) else str(v)
                lines.append(f"{k},{val},{u}")
            return "\n".join(lines)
        # human
        width = max((len(k) for k, _, _ in self.results), default=9)
        lines = [f"mixsurv {self.command} (v{__version__})"]
        if self.inputs:
            pairs = ", ".join(f"{k}={v}" for k, v in sorted(self.inputs.items()))
            lines.append(f"inputs: {pairs}")
        if self.rng:
            lines.append(f"rng: {self.rng}")
        lines.append("")
        lines.append(f"{'Parameter'.ljust(width)}  {'Value':>14}  Unit")
        for k, v, u in self.results:
            val = f"{v:.6g}" if isinstance(v, float) else str(v)
            lines.append(f"{k.ljust(width)}  {val:>14}  {u}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines)


def _emit(report: Report, fmt: str, output: str | None) -> None:
    text = report.render(fmt)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def emit_curves(
    control: MixtureArm,
    treatment: MixtureArm,
    tau: float,
    grid: int,
    path: str,
) -> None:
    """Point sets behind the survival-by-response panels and the hazard ratio."""
    if grid < 2:
        raise UsageError(f"curve grid must be at least 2, got {grid}")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "S0", "S1", "S0_r", "S0_nr", "S1_r", "S1_nr", "HR"])
        for i in range(grid):
            t = tau * i / (grid - 1)
            hr = "" if t == 0.0 else repr(hazard_ratio(control, treatment, t))
            writer.writerow(
                [
                    repr(t),
                    repr(control.survival(t)),
                    repr(treatment.survival(t)),
                    repr(control.responders.survival(t)),
                    repr(control.non_responders.survival(t)),
                    repr(treatment.responders.survival(t)),
                    repr(treatment.non_responders.survival(t)),
                    hr,
                ]
            )


# ---------------------------------------------------------------------------
# config handling

def _read_config(path: str) -> dict:
    cfg = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
                key, value = line.split("=", 1)
                cfg[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return cfg


def _merge_inputs(args: argparse.Namespace, allowed: dict) -> dict:
    """Config file first, flags override; unknown config keys are rejected."""
    merged: dict = {}
    if getattr(args, "config", None):
        raw = _read_config(args.config)
        for key, text in raw.items():
            if key not in allowed:
                raise UsageError(f"unknown configuration key {key!r}")
            try:
                merged[key] = allowed[key](text)
            except ValueError as exc:
                raise UsageError(f"bad value for {key!r}: {text!r}") from exc
    for key in allowed:
        flag_val = getattr(args, key, None)
        if flag_val is not None:
            merged[key] = flag_val
    return merged


def _require(inputs: dict, keys, context: str):
    missing = [k for k in keys if inputs.get(k) is None]
    if missing:
        raise UsageError(f"{context} requires keys: {', '.join(missing)}")
    return [inputs[k] for k in keys]


def _auto_or_int(text: str):
    if text == "auto":
        return "auto"
    return int(text)


def _law(scale: float, shape: float) -> ParametricSurvival:
    if shape == 1.0:
        return ParametricSurvival.exponential(scale)
    return ParametricSurvival.weibull(scale, shape)


def _arms_from_inputs(inputs: dict) -> tuple[MixtureArm, MixtureArm]:
    p0, dp, shape = inputs["p0"], inputs["delta_p"], inputs.get("shape", 1.0)
    scales = _require(
        inputs, ("scale_r0", "scale_nr0", "scale_r1", "scale_nr1"), "the distribution path"
    )
    control = MixtureArm(p0, _law(scales[0], shape), _law(scales[1], shape))
    treatment = MixtureArm(p0 + dp, _law(scales[2], shape), _law(scales[3], shape))
    return control, treatment


# ---------------------------------------------------------------------------
# subcommands

_DIST_KEYS = {
    "p0": float,
    "delta_p": float,
    "tau": float,
    "shape": float,
    "scale_r0": float,
    "scale_nr0": float,
    "scale_r1": float,
    "scale_nr1": float,
}

_ANTICIPATED_KEYS = {
    "p0": float,
    "delta_p": float,
    "delta_r": float,
    "delta_nr": float,
    "delta_0": float,
}

_SUMMARY_KEYS = {
    "set_param": int,
    "p0": float,
    "delta_p": float,
    "tau": float,
    "ascale_cens": float,
    "shape": float,
    "m0_r": float,
    "m0_nr": float,
    "diffm_r": float,
    "diffm_nr": float,
    "s0_r": float,
    "s0_nr": float,
    "diffs_r": float,
    "diffs_nr": float,
    "delta_r": float,
    "delta_nr": float,
}

_DESIGN_KEYS = {"alpha": float, "beta": float, "allocation": float}

_SCENARIO_KEYS = {
    **_DIST_KEYS,
    "ascale_cens": float,
    "n_total": _auto_or_int,
    "allocation": float,
    "replications": int,
    "seed": int,
    "alpha": float,
    "hypothesis": str,
}

_ANALYZE_KEYS = {"tau": float, "alpha": float}


def _summary_inputs(inputs: dict) -> SummaryInputs:
    set_param = inputs.get("set_param")
    if set_param not in _SET_NAMES:
        raise UsageError("set_param must be 1 (means), 2 (rates), or 3 (rates-deltas)")
    set_name = _SET_NAMES[set_param]
    p0, dp, tau, cens = _require(
        inputs, ("p0", "delta_p", "tau", "ascale_cens"), "a summary set"
    )
    payload_map = {
        MEANS_SET: {
            "m0_r": "m0_r",
            "m0_nr": "m0_nr",
            "diffm_r": "diffm_r",
            "diffm_nr": "diffm_nr",
        },
        RATES_SET: {
            "S0_r": "s0_r",
            "S0_nr": "s0_nr",
            "diffS_r": "diffs_r",
            "diffS_nr": "diffs_nr",
        },
        RATES_DELTAS_SET: {
            "S0_r": "s0_r",
            "S0_nr": "s0_nr",
            "Delta_r": "delta_r",
            "Delta_nr": "delta_nr",
        },
    }[set_name]
    _require(inputs, payload_map.values(), f"summary set {set_param}")
    payload = {dest: inputs[src] for dest, src in payload_map.items()}
    try:
        return SummaryInputs(
            set_name=set_name,
            p0=p0,
            delta_p=dp,
            tau=tau,
            censor_scale=cens,
            shape=inputs.get("shape", 1.0),
            **payload,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _add_effect_rows(report: Report, effect) -> None:
    report.add("RMST difference", effect.d_tau, "time")
    report.add("RMST difference responders", effect.delta_r, "time")
    report.add("RMST difference non-responders", effect.delta_nr, "time")
    report.add("Response difference", effect.delta_p, "probability")
    report.add("Setting", effect.setting.value, "label")


def cmd_effectsize(args: argparse.Namespace) -> Report:
    inputs = _merge_inputs(args, {**_DIST_KEYS, **_ANTICIPATED_KEYS})
    report = Report("effectsize", {k: v for k, v in inputs.items() if v is not None})
    anticipated = [k for k in ("delta_r", "delta_nr", "delta_0") if inputs.get(k) is not None]
    distribution = [
        k for k in ("scale_r0", "scale_nr0", "scale_r1", "scale_nr1") if inputs.get(k) is not None
    ]
    if anticipated and distribution:
        raise UsageError(
            "provide either anticipated effects (delta_r, delta_nr, delta_0) "
            "or distribution scales, not both"
        )
    if anticipated:
        dr, dnr, d0, dp, p0 = _require(
            inputs, ("delta_r", "delta_nr", "delta_0", "delta_p", "p0"),
            "the anticipated-effects path",
        )
        d = effect_from_anticipated(dr, dnr, d0, dp, p0)
        report.add("RMST difference", d, "time")
        report.add("RMST difference responders", dr, "time")
        report.add("RMST difference non-responders", dnr, "time")
        report.add("Response difference", dp, "probability")
        return report
    _require(inputs, ("p0", "delta_p", "tau"), "the distribution path")
    control, treatment = _arms_from_inputs(inputs)
    effect = effect_size(control, treatment, inputs["tau"])
    _add_effect_rows(report, effect)
    if getattr(args, "curves", None):
        emit_curves(control, treatment, inputs["tau"], args.grid_points, args.curves)
    return report


def _calibrated(args: argparse.Namespace) -> tuple[dict, CalibratedDesign]:
    inputs = _merge_inputs(args, {**_SUMMARY_KEYS, **_DESIGN_KEYS})
    design = calibrate(_summary_inputs(inputs), taylor=getattr(args, "taylor", False))
    return inputs, design


def cmd_calibrate(args: argparse.Namespace) -> Report:
    inputs, design = _calibrated(args)
    report = Report("calibrate", {k: v for k, v in inputs.items() if v is not None})
    report.add("Control responder scale", design.control.responders.scale, "time")
    report.add("Control non-responder scale", design.control.non_responders.scale, "time")
    report.add("Treatment responder scale", design.treatment.responders.scale, "time")
    report.add("Treatment non-responder scale", design.treatment.non_responders.scale, "time")
    report.add("Shape", design.control.responders.shape, "none")
    report.add("Censoring scale", design.censoring.scale, "time")
    effect = effect_size(design.control, design.treatment, design.tau)
    _add_effect_rows(report, effect)
    if getattr(args, "curves", None):
        emit_curves(design.control, design.treatment, design.tau, args.grid_points, args.curves)
    return report


def cmd_samplesize(args: argparse.Namespace) -> Report:
    inputs, design = _calibrated(args)
    report = Report("samplesize", {k: v for k, v in inputs.items() if v is not None})
    alpha, beta = _require(inputs, ("alpha", "beta"), "samplesize")
    spec = DesignSpec(
        tau=design.tau,
        alpha=alpha,
        beta=beta,
        censoring=design.censoring,
        pi=inputs.get("allocation", 0.5),
    )
    result = sample_size(design.control, design.treatment, spec)
    effect = effect_size(design.control, design.treatment, design.tau)
    _add_effect_rows(report, effect)
    report.add("Sample size", result.n_total, "count")
    report.add("Sample size (rounded)", result.n_rounded, "count")
    report.add("Control group size", result.n_control, "count")
    report.add("Treatment group size", result.n_treatment, "count")
    report.add("Control variance", result.sigma0_sq, "time^2")
    report.add("Treatment variance", result.sigma1_sq, "time^2")
    report.add(
        "Asymptotic power at rounded n",
        power_at_n(design.control, design.treatment, spec, result.n_rounded),
        "probability",
    )
    if getattr(args, "curves", None):
        emit_curves(design.control, design.treatment, design.tau, args.grid_points, args.curves)
    return report


def _scenario_from_inputs(inputs: dict) -> Scenario:
    control, treatment = _arms_from_inputs(inputs)
    _require(inputs, ("tau", "ascale_cens"), "a scenario")
    try:
        return Scenario(
            control=control,
            treatment=treatment,
            censoring=ParametricSurvival.exponential(inputs["ascale_cens"]),
            tau=inputs["tau"],
            n_total=inputs.get("n_total", "auto"),
            allocation=inputs.get("allocation", 0.5),
            replications=inputs.get("replications", 1000),
            seed=inputs.get("seed", 0),
            alpha=inputs.get("alpha", 0.05),
            hypothesis=inputs.get("hypothesis", "alternative"),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _study_rows(report: Report, result) -> None:
    report.add("Sample size used", result.n_used, "count")
    report.add("Replications", result.replications, "count")
    report.add("RMST difference", result.d_tau_theoretical, "time")
    report.add("Empirical power (RMST)", result.power_rmst, "probability")
    report.add("MC standard error (RMST)", result.power_rmst_se, "probability")
    report.add("Empirical power (log-rank)", result.power_logrank, "probability")
    report.add("MC standard error (log-rank)", result.power_logrank_se, "probability")
    if result.empirical_alpha is not None:
        report.add("Empirical significance level", result.empirical_alpha, "probability")
    report.add("Mean censoring fraction", result.mean_censoring_fraction, "probability")
    report.add("Degenerate replications", result.degenerate, "count")


def cmd_simulate(args: argparse.Namespace) -> Report:
    inputs = _merge_inputs(args, _SCENARIO_KEYS)
    report = Report(
        "simulate", {k: v for k, v in inputs.items() if v is not None}, rng=RNG_NAME
    )
    if args.table_grid:
        grid = build_scenario_grid(
            GridSpec(
                replications=inputs.get("replications", 1000),
                seed=inputs.get("seed", 0),
                alpha=inputs.get("alpha", 0.05),
                null=inputs.get("hypothesis") == "null",
            )
        )
        if args.max_scenarios:
            grid = grid[: args.max_scenarios]
        if not args.scenario_csv:
            raise UsageError("grid mode requires --scenario-csv PATH for per-scenario rows")
        powers = []
        with open(args.scenario_csv, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(
                [
                    "scenario", "shape", "p0", "delta_p",
                    "scale_r0", "scale_nr0", "scale_r1", "scale_nr1",
                    "n", "d_tau", "power_rmst", "power_logrank",
                    "mean_censoring_fraction", "degenerate",
                ]
            )
            for idx, scenario in enumerate(grid):
                result = run_study(scenario)
                powers.append(result.power_rmst)
                writer.writerow(
                    [
                        idx,
                        scenario.control.responders.shape,
                        scenario.control.p,
                        scenario.treatment.p - scenario.control.p,
                        scenario.control.responders.scale,
                        scenario.control.non_responders.scale,
                        scenario.treatment.responders.scale,
                        scenario.treatment.non_responders.scale,
                        result.n_used,
                        repr(result.d_tau_theoretical),
                        repr(result.power_rmst),
                        repr(result.power_logrank),
                        repr(result.mean_censoring_fraction),
                        result.degenerate,
                    ]
                )
        report.add("Scenarios run", len(grid), "count")
        report.add("Median empirical power (RMST)", statistics.median(powers), "probability")
        return report
    scenario = _scenario_from_inputs(inputs)
    if args.emit_data:
        simulate_trial(scenario, 0).to_csv(args.emit_data)
    result = run_study(scenario)
    _study_rows(report, result)
    return report


def cmd_analyze(args: argparse.Namespace) -> Report:
    inputs = _merge_inputs(args, _ANALYZE_KEYS)
    tau = inputs.get("tau")
    if tau is None:
        raise UsageError("analyze requires --tau")
    alpha = inputs.get("alpha", 0.05)
    data = TrialData.from_csv(args.data)
    for arm in (0, 1):
        if data.n_arm(arm) < 2:
            raise DataError(f"arm {arm} has fewer than 2 subjects")
    report = Report("analyze", {"data": args.data, "tau": tau, "alpha": alpha})
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rmst = rmst_test(data, tau, alpha)
        logrank = logrank_test(data, alpha)
    report.warnings.extend(str(w.message) for w in caught)
    report.add("RMST control", rmst.k_hat0, "time")
    report.add("RMST treatment", rmst.k_hat1, "time")
    report.add("RMST difference", rmst.k_hat1 - rmst.k_hat0, "time")
    report.add("RMST z", rmst.z, "none")
    report.add("RMST one-sided p", rmst.p_one_sided, "probability")
    report.add("RMST rejected", str(rmst.rejected), "flag")
    report.add("Log-rank z", logrank.z, "none")
    report.add("Log-rank one-sided p", logrank.p_one_sided, "probability")
    report.add("Log-rank rejected", str(logrank.rejected), "flag")
    if args.curves:
        with open(args.curves, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["arm", "t", "survival", "at_risk", "events"])
            for arm in (0, 1):
                t, e = data.arm_times(arm)
                curve = kaplan_meier(t, e)
                for i in range(curve.times.shape[0]):
                    writer.writerow(
                        [
                            arm,
                            repr(float(curve.times[i])),
                            repr(float(curve.survival[i])),
                            int(curve.at_risk[i]),
                            int(curve.events[i]),
                        ]
                    )
    return report


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 2 with a clean message, as argparse does
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat key = value config file; flags override it")
    sub.add_argument("--format", choices=("human", "json", "csv"), default="human")
    sub.add_argument("--output", help="write the report here instead of stdout")


def _add_keys(sub: argparse.ArgumentParser, keys: dict) -> None:
    for key, conv in sorted(keys.items()):
        flag = "--" + key.replace("_", "-")
        if conv is str:
            sub.add_argument(flag, dest=key)
        else:
            sub.add_argument(flag, dest=key, type=conv)


def _add_curve_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--curves", help="write model curve point sets (CSV) here")
    sub.add_argument("--grid-points", type=int, default=101)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mixsurv", description=__doc__)
    parser.add_argument("--version", action="version", version=f"mixsurv {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("effectsize", help="restricted-mean effect size and decomposition")
    _add_common(p)
    _add_keys(p, {**_DIST_KEYS, **_ANTICIPATED_KEYS})
    _add_curve_flags(p)
    p.set_defaults(func=cmd_effectsize)

    p = subs.add_parser("samplesize", help="sample size from a summary-statistics set")
    _add_common(p)
    _add_keys(p, {**_SUMMARY_KEYS, **_DESIGN_KEYS})
    p.add_argument("--taylor", action="store_true",
                   help="first-order scale solve for set 3 instead of exact inversion")
    _add_curve_flags(p)
    p.set_defaults(func=cmd_samplesize)

    p = subs.add_parser("calibrate", help="recover subgroup laws from summary statistics")
    _add_common(p)
    _add_keys(p, _SUMMARY_KEYS)
    p.add_argument("--taylor", action="store_true")
    _add_curve_flags(p)
    p.set_defaults(func=cmd_calibrate)

    p = subs.add_parser("simulate", help="empirical power / significance by Monte Carlo")
    _add_common(p)
    _add_keys(p, _SCENARIO_KEYS)
    p.add_argument("--table-grid", action="store_true",
                   help="run the built-in scenario grid instead of one scenario")
    p.add_argument("--max-scenarios", type=int, help="cap on grid scenarios (grid mode)")
    p.add_argument("--scenario-csv", help="per-scenario results CSV (grid mode)")
    p.add_argument("--emit-data", help="write replication 0's dataset (TrialData CSV) here")
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("analyze", help="analyze a TrialData CSV")
    _add_common(p)
    _add_keys(p, _ANALYZE_KEYS)
    p.add_argument("--data", required=True, help="TrialData CSV (arm,time,event,responder)")
    p.add_argument("--curves", help="write per-arm Kaplan-Meier step points (CSV) here")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except UsageError as exc:
        print(f"mixsurv: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleDesignError as exc:
        print(f"mixsurv: infeasible design: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NumericError as exc:
        print(f"mixsurv: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DataError as exc:
        print(f"mixsurv: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except MixsurvError as exc:  # pragma: no cover - catch-all for new subclasses
        print(f"mixsurv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report, args.format, args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
