import numpy as np
import pytest

from qsw import conditions
from qsw.meyer import MeyerSystem
from qsw.quasispline import build


@pytest.fixture(scope="session")
def meyer():
    return MeyerSystem()


@pytest.fixture(scope="session")
def policy_n(meyer):
    return {l: conditions.select_n(meyer, l) for l in range(1, 9)}


@pytest.fixture(scope="session")
def family(meyer, policy_n):
    return {l: build(meyer, l, n) for l, n in policy_n.items()}


@pytest.fixture(scope="session")
def reports(meyer, policy_n):
    return [conditions.measure(meyer, l, n) for l, n in policy_n.items()]


@pytest.fixture(scope="session")
def family_ledger(reports):
    return conditions.ledger(reports)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
