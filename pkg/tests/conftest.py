import pytest

from mixsurv.laws import MixtureArm, ParametricSurvival

# A worked reference design used across the suite: control responders Exp(8.37)
# / non-responders Exp(5.61) at response rate 0.19; treatment responders
# Exp(35.90) at response rate 0.38 with unchanged non-responders; exponential
# censoring with scale 7; horizon 5.


@pytest.fixture
def ref_control() -> MixtureArm:
    return MixtureArm(
        0.19, ParametricSurvival.exponential(8.37), ParametricSurvival.exponential(5.61)
    )


@pytest.fixture
def ref_treatment() -> MixtureArm:
    return MixtureArm(
        0.38, ParametricSurvival.exponential(35.90), ParametricSurvival.exponential(5.61)
    )


@pytest.fixture
def ref_censoring() -> ParametricSurvival:
    return ParametricSurvival.exponential(7.0)
