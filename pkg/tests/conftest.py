import numpy as np
import pytest

from vinesim.agents import builtin_profiles
from vinesim.field import preset_field

ACCEPTANCE_LINES = []


@pytest.fixture
def field():
    return preset_field("52x227")


@pytest.fixture
def profiles():
    return builtin_profiles()


def checkerboard_grid(n_zones=28, shape=(9, 7), low=1.0, high=5.0):
    """Grid whose first ``n_zones`` checkerboard cells are low: isolated 4-connected zones."""
    grid = np.full(shape, high)
    cells = [(i, j) for i in range(shape[0]) for j in range(shape[1]) if (i + j) % 2 == 0]
    assert n_zones <= len(cells)
    for i, j in cells[:n_zones]:
        grid[i, j] = low
    return grid


def grid_csv(grid, cell_size=None):
    lines = [] if cell_size is None else [f"#cell_size={cell_size}"]
    lines += [",".join(f"{v:g}" for v in row) for row in grid]
    return "\n".join(lines) + "\n"


@pytest.fixture
def yield_28(tmp_path):
    path = tmp_path / "yield_28.csv"
    path.write_text(grid_csv(checkerboard_grid(), cell_size=26))
    return path


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
