from functools import lru_cache

import pytest

from qpolylab.gfspace import FieldSpec
from qpolylab.operators import build_operators
from qpolylab.poset import build_geometry

GF4_MODULUS = (1, 1, 1)  # x^2 + x + 1, constant term first


def field_for(q: int) -> FieldSpec:
    if q == 4:
        return FieldSpec(2, 2, GF4_MODULUS)
    return FieldSpec(q)


@lru_cache(maxsize=None)
def geometry(q: int, N: int):
    return build_geometry(field_for(q), N)


@lru_cache(maxsize=None)
def operators(q: int, N: int):
    return build_operators(geometry(q, N))


@pytest.fixture
def geo():
    return geometry


@pytest.fixture
def ops():
    return operators


def failures(results):
    return [(r.id, r.witness) for r in results if not r.passed]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULT_LINES
    except ImportError:
        return
    if RESULT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in RESULT_LINES:
            terminalreporter.write_line(line)
