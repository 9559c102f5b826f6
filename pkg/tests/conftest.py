import numpy as np
import pytest

from qassoc.thermo import AverageModel, log_grid, sweep

FIG_N = 8_000_000
FIG_D_OVER_N = 0.01

_acceptance_lines: list[str] = []


def record(criterion: str, passed: bool, detail: str):
    line = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"
    _acceptance_lines.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def fig_model():
    return AverageModel.from_fraction(FIG_N, FIG_D_OVER_N, "sum")


@pytest.fixture(scope="session")
def fig_grid():
    return log_grid(1e-3, 1e5, 10)


@pytest.fixture(scope="session")
def fig_sweep(fig_model, fig_grid):
    import time

    start = time.perf_counter()
    result = sweep(fig_model, fig_grid)
    result.elapsed = time.perf_counter() - start
    return result
