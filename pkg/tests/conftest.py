import pytest

from omcomb import SolverSettings, preset_params, simulate


@pytest.fixture(scope="session")
def run_cache():
    """Memoized full-pipeline runs keyed by preset name + solver overrides.

    The figure-level checks share these so each regime is integrated once
    per session.
    """
    cache: dict = {}

    def get(name, **solver_overrides):
        key = (name, tuple(sorted(solver_overrides.items())))
        if key not in cache:
            solver = SolverSettings(**solver_overrides) if solver_overrides else None
            cache[key] = simulate(preset_params(name), solver)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def baseline():
    return preset_params("baseline")
