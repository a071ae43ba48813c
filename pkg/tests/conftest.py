import numpy as np
import pytest

from gf2rank.weights import WeightDist


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_mixture(rs: np.random.Generator, min_weight: int = 3, max_weight: int = 40,
                   max_atoms: int = 3) -> WeightDist:
    """Deterministic pseudo-random weight mixture for property tests."""
    n_atoms = int(rs.integers(1, max_atoms + 1))
    ks = sorted(rs.choice(np.arange(min_weight, max_weight + 1), size=n_atoms,
                          replace=False).tolist())
    ps = rs.dirichlet(np.ones(n_atoms)).tolist()
    ps = [p / sum(ps) for p in ps]
    return WeightDist(tuple(zip(ks, ps)))


def mixture_batch(seed: int, count: int, **kwargs) -> list:
    rs = np.random.default_rng(seed)
    return [random_mixture(rs, **kwargs) for _ in range(count)]
