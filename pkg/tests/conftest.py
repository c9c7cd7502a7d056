import pytest

from uavfd.campaign import GridSpec, builtin_scenarios, run_capacity_sweep, run_power_sweep


@pytest.fixture(scope="session")
def grid():
    return GridSpec()


@pytest.fixture(scope="session")
def scenarios():
    return builtin_scenarios()


@pytest.fixture(scope="session")
def power_dir01(scenarios, grid):
    return run_power_sweep(scenarios["directional-0.1"], grid)


@pytest.fixture(scope="session")
def power_dir18(scenarios, grid):
    return run_power_sweep(scenarios["directional-1.8"], grid)


@pytest.fixture(scope="session")
def power_dipole(scenarios, grid):
    return run_power_sweep(scenarios["dipole-0.1"], grid)


@pytest.fixture(scope="session")
def capacity_dir01_analytic(scenarios, grid):
    return run_capacity_sweep(scenarios["directional-0.1"], grid)
