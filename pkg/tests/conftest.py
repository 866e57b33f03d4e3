from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"


def load_grid(name: str) -> dict[tuple[int, int], int]:
    """Order-by-degree table as {(order, degree): dim}, zero cells dropped."""
    out = {}
    with open(GOLDEN / name, newline="") as f:
        for row in csv.DictReader(f):
            n = int(row.pop("order"))
            for key, value in row.items():
                if int(value):
                    out[(n, int(key[3:]))] = int(value)
    return out


def load_dims_golden() -> list[dict[str, int | None]]:
    with open(GOLDEN / "dims.csv", newline="") as f:
        return [{k: int(v) if v else None for k, v in row.items()} for row in csv.DictReader(f)]


def load_hall_golden() -> list[dict]:
    return json.loads((GOLDEN / "hall_set.json").read_text())


@pytest.fixture(scope="session")
def hall_golden():
    return load_hall_golden()


@pytest.fixture(scope="session")
def dims_golden():
    return load_dims_golden()


@pytest.fixture(scope="session")
def dim_lacm():
    return load_grid("dim_lacm.csv")


@pytest.fixture(scope="session")
def dim_trees():
    return load_grid("dim_trees.csv")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance_results", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
