import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pep2gi.code import (
    LinearCode,
    Permutation,
    ReducibilityTag,
    StructureParams,
    apply_permutation,
    candidate_bs,
    centralizer_check,
    classify,
    code_make,
    dual,
    gram,
    hull_basis,
    hull_dim,
    is_m_lcd,
)
from pep2gi.field import field_of_order
from pep2gi.matrix import MatrixFq, ShapeError, is_invertible, mul

from .conftest import codes, random_code, random_permutation

SELF_ORTHOGONAL = [[1, 1, 1, 0], [1, 2, 0, 1]]


def _valid_params(F, n, rng):
    while True:
        a, b = rng.randrange(1, F.q), rng.randrange(F.q)
        if StructureParams.is_valid(F, a, b, n):
            return StructureParams.of(F, a, b, n)


def test_code_make_examples(F3, example_pair):
    C, _ = example_pair
    assert (C.n, C.k) == (4, 2)
    assert code_make(F3, [[1, 1], [2, 2]]).k == 1
    full = code_make(F3, np.eye(3, dtype=np.int64))
    assert full.k == 3


def test_apply_permutation_example(example_pair):
    C, Cp = example_pair
    swap = Permutation.transposition(4, 0, 1)
    assert apply_permutation(C, swap) == Cp
    assert apply_permutation(C, Permutation.identity(4)) == C


def test_permutation_matrix_convention(F3):
    pi = Permutation((2, 0, 1))
    P = pi.matrix(F3)
    x = MatrixFq(F3, [[1, 2, 0]])
    # coordinate i moves to position pi(i)
    assert mul(x, P).row(0) == pi.apply_vector((1, 2, 0)) == (2, 0, 1)
    assert pi.then(pi.inverse()).is_identity()


def test_gram_examples(F3, example_pair):
    C, Cp = example_pair
    M = StructureParams.of(F3, 1, 1, 4)
    assert gram(C).tolist() == [[2, 1], [1, 2]]
    assert gram(Cp).tolist() == [[2, 1], [1, 2]]
    assert gram(C, M).tolist() == [[0, 2], [2, 0]]
    assert gram(Cp, M).tolist() == [[0, 2], [2, 0]]
    assert gram(code_make(F3, np.eye(3, dtype=np.int64))) == MatrixFq.identity(F3, 3)


def test_hull_examples(F3, example_pair):
    C, _ = example_pair
    M = StructureParams.of(F3, 1, 1, 4)
    assert hull_dim(C) == 1 and hull_dim(C, M) == 0
    assert hull_basis(C) == [(1, 2, 1, 0)]
    assert hull_basis(C, M) == []
    so = code_make(F3, SELF_ORTHOGONAL)
    assert hull_dim(so) == 2
    assert code_make(F3, hull_basis(so)) == so


def test_dual_examples(F3, example_pair):
    C, _ = example_pair
    assert dual(code_make(F3, np.eye(3, dtype=np.int64))).k == 0
    D = dual(C)
    assert D.k == 2 and D.contains((1, 2, 1, 0))
    assert dual(code_make(F3, [[1, 0]])) == code_make(F3, [[0, 1]])


def test_classify_examples(F3, example_pair):
    C, _ = example_pair
    v = classify(C)
    assert v.tag is ReducibilityTag.HULL_ONE_REDUCIBLE
    assert v.hull_vector == (1, 2, 1, 0) and F3.sum(v.hull_vector) == 1
    assert v.witness_b == 1
    padded = code_make(F3, [[1, 0, 0, 0], [0, 1, 0, 0]])
    assert classify(padded).tag is ReducibilityTag.LCD
    assert classify(code_make(F3, SELF_ORTHOGONAL)).tag is ReducibilityTag.HULL_TOO_LARGE
    assert classify(code_make(F3, [[1, 1, 1]])).tag is ReducibilityTag.HULL_ONE_IRREDUCIBLE


def test_centralizer_examples(F3):
    assert centralizer_check(StructureParams.of(F3, 1, 2, 3).matrix())
    assert not centralizer_check(MatrixFq(F3, [[1, 0], [0, 2]]))
    assert centralizer_check(MatrixFq.ones(F3, 3, 3))


def test_structure_params_validation(F3):
    with pytest.raises(ValueError):
        StructureParams.of(F3, 0, 1, 3)
    with pytest.raises(ValueError):
        StructureParams.of(F3, 1, 2, 4)  # 1 + 4*2 = 9 = 0
    M = StructureParams.of(F3, 2, 2, 4)
    assert M.det() == M.matrix().det()
    assert candidate_bs(F3, 4) == [1]


@given(codes(max_n=8), st.randoms(use_true_random=False))
def test_gram_rank_one_form_matches_dense(C, rng):
    if C.k == 0:
        return
    M = _valid_params(C.field, C.n, rng)
    dense = mul(mul(C.gen, M.matrix()), C.gen.T)
    assert gram(C, M) == dense


@given(codes(max_n=8), st.randoms(use_true_random=False))
def test_hull_dim_permutation_invariant(C, rng):
    pi = random_permutation(rng, C.n)
    M = _valid_params(C.field, C.n, rng)
    assert hull_dim(apply_permutation(C, pi), M) == hull_dim(C, M)
    assert hull_dim(apply_permutation(C, pi)) == hull_dim(C)


@given(codes(max_n=7), st.randoms(use_true_random=False))
def test_hull_dim_bound(C, rng):
    M = _valid_params(C.field, C.n, rng)
    assert abs(hull_dim(C, M) - hull_dim(C)) <= 1


@given(codes(max_n=7), st.randoms(use_true_random=False))
def test_classify_generator_invariant(C, rng):
    if C.k == 0:
        return
    F = C.field
    while True:
        R = MatrixFq(F, [[rng.randrange(F.q) for _ in range(C.k)] for _ in range(C.k)])
        if is_invertible(R):
            break
    C2 = code_make(F, mul(R, C.gen))
    assert C2 == C
    assert classify(C2) == classify(C)


@given(codes(max_n=7), st.randoms(use_true_random=False))
def test_dual_involution(C, rng):
    F = C.field
    b = rng.choice(candidate_bs(F, C.n) or [0])
    for M in (None, StructureParams.of(F, 1, b, C.n) if b else None):
        D = dual(C, M)
        assert D.k == C.n - C.k
        assert dual(D, M) == C


@given(codes(max_n=7))
def test_hull_basis_lies_in_code_and_dual(C):
    basis = hull_basis(C)
    assert len(basis) == hull_dim(C)
    D = dual(C)
    for x in basis:
        assert C.contains(x) and D.contains(x)


def test_reducible_iff_some_b_works():
    rng = random.Random(3)
    for q in (3, 5, 7):
        F = field_of_order(q)
        for _ in range(150):
            n = rng.randint(2, 7)
            C = random_code(rng, F, n, rng.randint(1, n - 1))
            v = classify(C)
            some_b = any(is_m_lcd(C, StructureParams.of(F, 1, b, n)) for b in candidate_bs(F, n))
            assert v.reducible == (v.tag is ReducibilityTag.LCD or some_b)


def test_json_round_trip_and_errors(F3, example_pair):
    C, _ = example_pair
    assert LinearCode.from_json(C.to_json()) == C
    data = C.to_json()
    data["gen"] = [[1, 1, 0], [0, 1, 1, 0]]
    with pytest.raises(ShapeError, match="row 0"):
        LinearCode.from_json(data)
    data = C.to_json()
    data["k"] = 3
    with pytest.raises(ValueError):
        LinearCode.from_json(data)
