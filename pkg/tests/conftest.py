import numpy as np
import pytest

from symcov import IntervalDataset, PopulationParams


@pytest.fixture
def d1():
    """Single variable, objects [0, 2] and [1, 3]."""
    return IntervalDataset.from_limits(["a", "b"], ["x1"], [[0.0], [1.0]], [[2.0], [3.0]])


@pytest.fixture
def d2():
    """Two variables: X1 cells [0,2], [2,4]; X2 cells [1,3], [0,2]."""
    return IntervalDataset.from_limits(
        ["a", "b"], ["x1", "x2"], [[0.0, 1.0], [2.0, 0.0]], [[2.0, 3.0], [4.0, 2.0]]
    )


@pytest.fixture
def example31_params():
    """Uncorrelated centers and ranges; moderate range spread."""
    return PopulationParams(
        mu_c=[0.0, 0.0],
        sigma_cc=np.diag([1.0, 0.5]),
        mu_r=[1.5, 1.5],
        sigma_rr=np.diag([0.64, 0.04]),
    )


@pytest.fixture
def example32_params():
    """Uncorrelated centers, strongly correlated ranges."""
    return PopulationParams(
        mu_c=[0.0, 0.0],
        sigma_cc=np.diag([1.0, 0.5]),
        mu_r=[1.3, 1.3],
        sigma_rr=[[0.16, 0.07], [0.07, 0.04]],
    )


def example33_params(var_weight: float) -> PopulationParams:
    """Center covariance tuned to cancel the range term of the given weight."""
    return PopulationParams(
        mu_c=[0.0, 0.0],
        sigma_cc=[[1.0, -9.0 * var_weight], [-9.0 * var_weight, 9.0]],
        mu_r=[3.0, 3.0],
        sigma_rr=np.diag([0.8, 0.2]),
    )


def random_dataset(rng: np.random.Generator, n: int, p: int, names=None) -> IntervalDataset:
    centers = rng.uniform(-5.0, 5.0, size=(n, p))
    ranges = rng.uniform(0.0, 4.0, size=(n, p))
    ids = [f"o{i}" for i in range(n)]
    names = names or [f"x{j + 1}" for j in range(p)]
    return IntervalDataset(ids, names, centers, ranges)


def random_params(rng: np.random.Generator, p: int) -> PopulationParams:
    a = rng.normal(size=(p + 2, p))
    b = rng.normal(size=(p + 2, p))
    return PopulationParams(
        mu_c=rng.normal(size=p),
        sigma_cc=a.T @ a / p,
        mu_r=np.abs(rng.normal(size=p)) + 0.2,
        sigma_rr=b.T @ b / p,
    )
