import numpy as np
import pytest

from lossdev import AssumptionBounds, LossClass, PortfolioModel, RoundRobin

UNIT = LossClass("unit", (-1.0, 1.0), (0.5, 0.5))
DOUBLE = LossClass("double", (-2.0, 2.0), (0.5, 0.5))


@pytest.fixture
def unit_class():
    return UNIT


@pytest.fixture
def double_class():
    return DOUBLE


@pytest.fixture
def pure_unit():
    return PortfolioModel((UNIT,), weights=(1.0,))


@pytest.fixture
def pure_double():
    return PortfolioModel((DOUBLE,), weights=(1.0,))


@pytest.fixture
def eq_mix():
    return PortfolioModel((UNIT, DOUBLE), weights=(0.5, 0.5))


@pytest.fixture
def rr_mix():
    return PortfolioModel((UNIT, DOUBLE), rule=RoundRobin((1, 1)))


def random_lattice_model(rng: np.random.Generator, max_classes: int = 3):
    """Random valid model whose classes share a lattice: each class is a
    symmetric three-point law {-a g, 0, a g} (exactly centered and
    on-grid), with bounds derived from the classes themselves."""
    g = rng.choice([0.25, 0.5, 1.0])
    p = rng.integers(1, max_classes + 1)
    classes = []
    for i in range(p):
        a = int(rng.integers(1, 5))
        mass = rng.uniform(0.15, 0.5)
        classes.append(LossClass(f"c{i}", (-a * g, 0.0, a * g),
                                 (mass, 1 - 2 * mass, mass)))
    if rng.random() < 0.5:
        w = rng.dirichlet(np.ones(p))
        model = PortfolioModel(tuple(classes), weights=tuple(w.tolist()))
    else:
        model = PortfolioModel(tuple(classes),
                               rule=RoundRobin(tuple(int(v) for v in rng.integers(1, 4, p))))
    c0 = max(abs(c.min_support) for c in classes)
    c1 = min(c.variance for c in classes)
    return model, AssumptionBounds(c0, c1)


def random_general_model(rng: np.random.Generator, max_classes: int = 4):
    """Random valid model with arbitrary (auto-centered) supports; no
    common lattice guaranteed."""
    p = int(rng.integers(1, max_classes + 1))
    classes = []
    for i in range(p):
        size = int(rng.integers(2, 5))
        sup = np.sort(rng.uniform(-3, 3, size))
        while len(set(sup.tolist())) < size:
            sup = np.sort(rng.uniform(-3, 3, size))
        pr = rng.dirichlet(np.ones(size) * 2)
        pr = pr / pr.sum()
        classes.append(LossClass(f"g{i}", tuple(sup.tolist()), tuple(pr.tolist()),
                                 center=True))
    w = rng.dirichlet(np.ones(p))
    model = PortfolioModel(tuple(classes), weights=tuple(w.tolist()))
    c0 = max(max(abs(c.min_support), abs(c.max_support)) for c in classes)
    c1 = min(c.variance for c in classes)
    return model, AssumptionBounds(c0, c1)
