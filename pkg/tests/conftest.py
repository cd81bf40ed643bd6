from pathlib import Path

import numpy as np
import pytest

from itre import io

DATA = Path(__file__).parent / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def regression_paths():
    return sorted((DATA / "regression").glob("*.png"))


@pytest.fixture(scope="session")
def regression_images():
    return {p.stem: io.read_image(p) for p in regression_paths()}


@pytest.fixture(scope="session")
def near_uniform_image():
    return io.read_image(DATA / "near_uniform_dark.png")


@pytest.fixture(scope="session")
def color_diverse_image():
    return io.read_image(DATA / "color_diverse.png")


ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line per acceptance criterion and echo it at the end of the run."""
    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
