"""Trial design for survival endpoints driven by a binary response mixture.

Effect sizes are restricted-mean survival time (RMST) differences under a
two-component (responders / non-responders) mixture model; sample sizes come
from the asymptotic distribution of the Kaplan-Meier RMST estimator; Monte
Carlo studies check the resulting operating characteristics.
"""

from ._kernels import BACKEND
from .calibrate import (
    MEANS_SET,
    RATES_DELTAS_SET,
    RATES_SET,
    CalibratedDesign,
    SummaryInputs,
    calibrate,
    summarize,
)
from .design import DesignSpec, SampleSizeResult, power_at_n, sample_size
from .errors import (
    DataError,
    InfeasibleDesignError,
    InfeasibleInputError,
    MixsurvError,
    NumericError,
    TruncationWarning,
    UsageError,
)
from .inference import (
    KmCurve,
    LogrankResult,
    RmstTestResult,
    SubjectRecord,
    TrialData,
    kaplan_meier,
    logrank_test,
    rmst_from_km,
    rmst_test,
    rmst_variance_hat,
)
from .laws import (
    EffectDecomposition,
    Family,
    MixtureArm,
    ParametricSurvival,
    Setting,
    effect_from_anticipated,
    effect_size,
    hazard_ratio,
    survival_difference,
)
from .simulate import (
    GridSpec,
    Scenario,
    StudyResult,
    build_scenario_grid,
    draw_subject,
    run_study,
    simulate_trial,
)
from .variance import VarianceResult, limiting_variance, rmst_curve

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CalibratedDesign",
    "DataError",
    "DesignSpec",
    "EffectDecomposition",
    "Family",
    "GridSpec",
    "InfeasibleDesignError",
    "InfeasibleInputError",
    "KmCurve",
    "LogrankResult",
    "MEANS_SET",
    "MixsurvError",
    "MixtureArm",
    "NumericError",
    "ParametricSurvival",
    "RATES_DELTAS_SET",
    "RATES_SET",
    "RmstTestResult",
    "SampleSizeResult",
    "Scenario",
    "Setting",
    "StudyResult",
    "SubjectRecord",
    "SummaryInputs",
    "TrialData",
    "TruncationWarning",
    "UsageError",
    "VarianceResult",
    "build_scenario_grid",
    "calibrate",
    "draw_subject",
    "effect_from_anticipated",
    "effect_size",
    "hazard_ratio",
    "kaplan_meier",
    "limiting_variance",
    "logrank_test",
    "power_at_n",
    "rmst_curve",
    "rmst_from_km",
    "rmst_test",
    "rmst_variance_hat",
    "run_study",
    "sample_size",
    "simulate_trial",
    "summarize",
    "survival_difference",
    "__version__",
]
