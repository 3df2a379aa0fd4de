import numpy as np
import pytest

from gaussqpe.planner import GseePlan, PlanInputs, plan_gsee

ACCEPTANCE_PHASES = (-0.2, -0.05, 0.15)
ACCEPTANCE_WEIGHTS = (0.5, 0.3, 0.2)


@pytest.fixture(scope="session")
def acceptance_inputs() -> PlanInputs:
    return PlanInputs(
        delta_fail=0.1, eta=0.5, Delta_true=0.15, epsilon=0.01, alpha=0.0
    )


@pytest.fixture(scope="session")
def acceptance_plan(acceptance_inputs) -> GseePlan:
    return plan_gsee(acceptance_inputs)


@pytest.fixture(scope="session")
def acceptance_spectrum():
    from gaussqpe.simulator import SpectrumSpec

    return SpectrumSpec(
        eigenphases=ACCEPTANCE_PHASES, overlaps_sq=ACCEPTANCE_WEIGHTS
    )


@pytest.fixture
def rng():
    return np.random.default_rng(np.random.SeedSequence(1234))
