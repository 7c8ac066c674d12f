import numpy as np
import pytest

from adcfkit import CostModel, ScoreSet


@pytest.fixture
def adcf1() -> CostModel:
    return CostModel(pi_tar=0.94, pi_non=0.01, pi_spf=0.05,
                     c_miss=1.0, c_fa_non=10.0, c_fa_spf=10.0)


@pytest.fixture
def adcf2() -> CostModel:
    return CostModel(pi_tar=0.98, pi_non=0.01, pi_spf=0.01,
                     c_miss=1.0, c_fa_non=10.0, c_fa_spf=10.0)


def random_scoreset(rng: np.random.Generator, max_per_class: int = 40) -> ScoreSet:
    """Small random Gaussian ScoreSet with non-empty classes."""
    n = rng.integers(1, max_per_class + 1, size=3)
    return ScoreSet(
        tar=rng.normal(1.5, 1.0, n[0]),
        non=rng.normal(0.0, 1.0, n[1]),
        spf=rng.normal(-0.5, 1.2, n[2]),
    )


def random_cost_model(rng: np.random.Generator) -> CostModel:
    """Random valid cost model with a positive default-system cost."""
    while True:
        priors = rng.dirichlet([1.0, 1.0, 1.0])
        costs = rng.uniform(0.1, 10.0, size=3)
        m = CostModel(pi_tar=float(priors[0]), pi_non=float(priors[1]),
                      pi_spf=float(priors[2]), c_miss=float(costs[0]),
                      c_fa_non=float(costs[1]), c_fa_spf=float(costs[2]))
        if min(m.c_miss * m.pi_tar, m.c_fa_non * m.pi_non + m.c_fa_spf * m.pi_spf) > 0:
            return m
