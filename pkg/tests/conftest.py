from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pep2gi.code import LinearCode, Permutation, code_make
from pep2gi.field import FieldSpec, field_of_order

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    derandomize=True,
)
settings.load_profile("default")

ODD_Q = (3, 5, 7, 9, 11, 13, 25, 27)
ALL_Q = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27)


@pytest.fixture
def F3() -> FieldSpec:
    return field_of_order(3)


@pytest.fixture
def F5() -> FieldSpec:
    return field_of_order(5)


@pytest.fixture
def example_pair(F3) -> tuple[LinearCode, LinearCode]:
    """The [4,2]_3 worked example and its image under the swap of coordinates 0 and 1."""
    C = code_make(F3, [[1, 1, 0, 0], [0, 1, 1, 0]])
    Cp = code_make(F3, [[1, 1, 0, 0], [1, 0, 1, 0]])
    return C, Cp


def random_matrix(rng: random.Random, q: int, rows: int, cols: int) -> np.ndarray:
    return np.array([[rng.randrange(q) for _ in range(cols)] for _ in range(rows)], dtype=np.int64).reshape(rows, cols)


def random_code(rng: random.Random, field: FieldSpec, n: int, k: int) -> LinearCode:
    """A uniformly drawn full-rank generator; resampled until the rank is k."""
    if k == 0:
        return code_make(field, np.zeros((0, n), dtype=np.int64))
    while True:
        C = code_make(field, random_matrix(rng, field.q, k, n))
        if C.k == k:
            return C


def random_permutation(rng: random.Random, n: int) -> Permutation:
    img = list(range(n))
    rng.shuffle(img)
    return Permutation(tuple(img))


@st.composite
def fields(draw, qs=ALL_Q) -> FieldSpec:
    return field_of_order(draw(st.sampled_from(qs)))


@st.composite
def codes(draw, qs=(3, 5, 7, 9), max_n: int = 7) -> LinearCode:
    f = draw(fields(qs))
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(0, n))
    rows = draw(st.lists(st.lists(st.integers(0, f.q - 1), min_size=n, max_size=n), min_size=k, max_size=k))
    if not rows:
        return code_make(f, np.zeros((0, n), dtype=np.int64))
    return code_make(f, rows)


@st.composite
def permutations_of(draw, n: int) -> Permutation:
    return Permutation(tuple(draw(st.permutations(list(range(n))))))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
