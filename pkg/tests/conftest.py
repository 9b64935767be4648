import numpy as np
import pytest

from semialg_moments.catalog import get_fixture
from semialg_moments.measure import AtomicMeasure


def random_measures(name: str, count: int, atoms: int = 20, seed: int = 0, exact: bool = False):
    """
    Seeded atomic measures on a catalog set: each draws its atoms from one sampled pool of
    the set, between 1 and atoms of them (exactly atoms with exact), with positive weights
    normalized to mass 1.
    """
    fixture = get_fixture(name)
    pool = fixture.set.sample(fixture.box, 200, seed, project_onto=fixture.curve or None).points
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        k = atoms if exact else int(rng.integers(1, atoms + 1))
        idx = rng.choice(pool.shape[0], size=k, replace=False)
        w = rng.random(k) + 0.1
        out.append(AtomicMeasure(pool[idx], w / w.sum()))
    return fixture, out


@pytest.fixture
def measures():
    return random_measures
