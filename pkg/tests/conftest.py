import numpy as np
import pytest

from qfchub import TuningConstraints, builtin_materials


@pytest.fixture(scope="session")
def materials():
    return builtin_materials()


@pytest.fixture(scope="session")
def jundt(materials):
    return materials["jundt1997"]


@pytest.fixture(scope="session")
def zelmon(materials):
    return materials["zelmon1997"]


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)


@pytest.fixture
def cutoff_1550():
    return TuningConstraints(constraint_mode="max_converted_wavelength",
                             constraint_value_nm=1550.0)


@pytest.fixture
def separation_20():
    return TuningConstraints(constraint_mode="min_pump_converted_separation",
                             constraint_value_nm=20.0)
