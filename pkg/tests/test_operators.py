"""Operators: application, transposes, norm estimates, lifting bounds."""

import itertools
import math

import numpy as np
import pytest

from lattice_calc import (AscentBudget, DimensionMismatchError, LpFamily,
                          OperatorInstance, apply, apply_n, lattice,
                          operator_norm, transpose,
                          tuple_lifting_bound_check)


def _op(matrix, p_in=2, p_out=2):
    m, d = np.asarray(matrix).shape
    return OperatorInstance(matrix, lattice(d, LpFamily(p_in)),
                            lattice(m, LpFamily(p_out)))


def test_apply_identity_and_zero():
    op = _op(np.eye(3))
    w = np.array([1.0, -2.0, 0.5])
    assert np.array_equal(apply(op, w), w)
    assert np.array_equal(apply(_op(np.zeros((3, 3))), w), np.zeros(3))


def test_apply_matches_naive_recompute():
    rng = np.random.default_rng(0)
    mat = rng.standard_normal((3, 4))
    op = _op(mat)
    for _ in range(50):
        w = rng.standard_normal(4)
        naive = [sum(mat[i, j] * w[j] for j in range(4)) for i in range(3)]
        assert np.allclose(apply(op, w), naive, rtol=1e-13)


def test_apply_n_rowwise_and_padding():
    rng = np.random.default_rng(1)
    mat = rng.standard_normal((2, 3))
    op = _op(mat)
    rows = rng.standard_normal((4, 3))
    lifted = apply_n(op, rows)
    assert lifted.shape == (4, 2)
    for j in range(4):
        assert np.array_equal(lifted[j], apply(op, rows[j]))
    padded = apply_n(op, np.vstack([rows, np.zeros((1, 3))]))
    assert np.array_equal(padded[:4], lifted)
    assert np.all(padded[4] == 0.0)
    assert np.array_equal(apply_n(op, np.zeros((2, 3))), np.zeros((2, 2)))


def test_transpose_swaps_spaces_and_matrix():
    op = _op(np.diag([1.0, 2.0]), p_in=1.5, p_out=3)
    ts = transpose(op)
    assert np.array_equal(ts.matrix, np.diag([1.0, 2.0]))
    assert ts.domain.family.p == pytest.approx(1.5)  # dual of l3
    assert ts.codomain.family.p == pytest.approx(3.0)  # dual of l1.5
    assert np.array_equal(transpose(ts).matrix, op.matrix)


def test_transpose_pairing_identity():
    rng = np.random.default_rng(2)
    mat = rng.standard_normal((3, 4))
    op = _op(mat)
    ts = transpose(op)
    for _ in range(1000):
        w = rng.standard_normal(4)
        phi = rng.standard_normal(3)
        lhs = float(apply(op, w) @ phi)
        rhs = float(w @ apply(ts, phi))
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_operator_norm_diagonal():
    res = operator_norm(_op(np.diag([1.0, -3.0, 2.0])), seed=0)
    assert res.value == pytest.approx(3.0, rel=1e-9)


def test_operator_norm_vertex_oracle_linf_to_l2():
    # exact value by enumerating the cube vertices of the domain ball
    rng = np.random.default_rng(3)
    mat = rng.standard_normal((3, 3))
    op = OperatorInstance(mat, lattice(3, LpFamily(math.inf)),
                          lattice(3, LpFamily(2)))
    exact = max(np.linalg.norm(mat @ np.array(s))
                for s in itertools.product([-1.0, 1.0], repeat=3))
    res = operator_norm(op, seed=4)
    assert res.value == pytest.approx(exact, rel=1e-9)


def test_operator_norm_transpose_symmetry():
    rng = np.random.default_rng(5)
    for k in range(4):
        mat = rng.standard_normal((3, 3))
        op = _op(mat, p_in=[2, 1.5, 3, 2][k], p_out=[2, 3, 1.5, math.inf][k])
        a = operator_norm(op, seed=10 + k).value
        b = operator_norm(transpose(op), seed=90 + k).value
        assert a == pytest.approx(b, rel=1e-4)


def test_lifting_bound_identity_and_zero():
    ident = _op(np.eye(3))
    rows = np.random.default_rng(6).standard_normal((3, 3))
    lhs, rhs, holds = tuple_lifting_bound_check(ident, LpFamily(2), rows,
                                                seed=0)
    assert holds
    assert lhs == pytest.approx(rhs, rel=1e-9)
    zero = _op(np.zeros((3, 3)))
    lhs, _, holds = tuple_lifting_bound_check(zero, LpFamily(2), rows, seed=0)
    assert holds and lhs == 0.0


def test_lifting_bound_sweep():
    for k in range(100):
        rng = np.random.default_rng(700 + k)
        mat = rng.standard_normal((3, 2))
        op = OperatorInstance(mat, lattice(2, LpFamily([1, 2, math.inf][k % 3])),
                              lattice(3, LpFamily([2, 1.5, 1][k % 3])))
        rows = rng.standard_normal((3, 2)) * 2.0
        _, _, holds = tuple_lifting_bound_check(
            op, LpFamily([1, 1.5, 2][(k + 1) % 3]), rows,
            budget=AscentBudget(6, 100, 0.2), seed=k)
        assert holds


def test_shape_validation():
    with pytest.raises(DimensionMismatchError):
        OperatorInstance(np.ones((2, 3)), lattice(2, LpFamily(2)),
                         lattice(2, LpFamily(2)))
    op = _op(np.ones((2, 3)))
    with pytest.raises(DimensionMismatchError):
        apply(op, np.ones(2))
    with pytest.raises(DimensionMismatchError):
        apply_n(op, np.ones((2, 2)))
