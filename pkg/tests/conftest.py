# tests/conftest.py
"""
Shared fixtures:
- Point the data directory at a temp dir so config files never touch the repo
- Small sample plans so checkers stay quick
"""

from fractions import Fraction

import pytest

from elsctl import utils
from elsctl.models import Game, SamplePlan


@pytest.fixture(autouse=True)
def isolated_data_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(utils, "DATA_DIR", tmp_path / "data")
    return tmp_path / "data"


@pytest.fixture
def small_plan() -> SamplePlan:
    return SamplePlan(trials=12, n_min=3, n_max=4, seed=7)


@pytest.fixture
def exact_plan() -> SamplePlan:
    return SamplePlan(trials=6, n_min=3, n_max=3, seed=3, exact=True)


@pytest.fixture
def game3() -> Game:
    # v({1})=1, v({2})=2, v({1,2})=4, v({3})=0, v({1,3})=3, v({2,3})=5, v(N)=9
    return Game(3, [0, 1, 2, 4, 0, 3, 5, 9])


@pytest.fixture
def game3_exact() -> Game:
    return Game(3, [Fraction(x) for x in (0, 1, 2, 4, 0, 3, 5, 9)])
