import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from dfa import ModelContext
from dfa.cli import default_model

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ORACLES = Path(__file__).parent / "oracles" / "frozen.json"


@pytest.fixture(scope="session")
def frozen():
    return json.loads(ORACLES.read_text())


@pytest.fixture
def bundled():
    return default_model()


@pytest.fixture
def one_fn():
    """(f1, f1) = 1, zeta1(f1) = 0.5, alpha(f1) = 0.5."""
    return ModelContext(("f1",), [[1.0]], ("z1",), [[0.5]], alpha={"f1": 0.5})


@pytest.fixture
def two_fn():
    return ModelContext(("f1", "f2"), [[1.0, 0.3 + 0.1j], [0.3 - 0.1j, 2.0]], ("z1",), [[0.5, 1.0]])


@pytest.fixture
def exact2():
    """Exact two-function, two-functional model."""
    return ModelContext(
        ("f1", "f2"),
        [[1, Fraction(1, 3)], [Fraction(1, 3), 2]],
        ("z1", "z2"),
        [[Fraction(1, 2), Fraction(1)], [Fraction(-1, 4), Fraction(3, 2)]],
        exact=True,
    )


# -- acceptance criteria report ---------------------------------------------------

_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """``criterion(n, passed, detail)`` records one acceptance line; returns ``passed``."""
    def record(n: int, passed: bool, detail: str) -> bool:
        _CRITERIA[n] = (bool(passed), detail)
        return bool(passed)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
