import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from chlattice.grp import Group  # noqa: E402
from chlattice.polyhedron import build_model  # noqa: E402

ALL_P = (3, 4, 5, 6, 8, 12)

_models = {}


def model_for(p):
    if p not in _models:
        _models[p] = build_model(p)
    return _models[p]


@pytest.fixture(scope="session")
def groups():
    return {p: Group(p) for p in ALL_P}


@pytest.fixture(scope="session")
def model3():
    return model_for(3)


@pytest.fixture(scope="session")
def model4():
    return model_for(4)


@pytest.fixture(scope="session")
def all_models():
    return {p: model_for(p) for p in ALL_P}
