"""Shared fixtures: small search budgets keep the suite fast"""

import math

import pytest

from src.core.config import BudgetConfig, CapsConfig, LabConfig
from src.core.lattice import LatticeSpec
from src.lab import PolyLab


@pytest.fixture
def budget():
    return BudgetConfig(restarts=8, iterations=150, certify_points=200_000)


@pytest.fixture
def caps():
    return CapsConfig()


@pytest.fixture
def lab(budget):
    return PolyLab(LabConfig(budget=budget, threads=1))


@pytest.fixture
def l1_2():
    return LatticeSpec.lp(1, 2)


@pytest.fixture
def l2_2():
    return LatticeSpec.lp(2, 2)


@pytest.fixture
def linf_2():
    return LatticeSpec.lp(math.inf, 2)


@pytest.fixture
def lorentz_21_2():
    return LatticeSpec.lorentz(2, 1, 2)
