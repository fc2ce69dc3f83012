"""Pointwise functional calculus and finite lattices."""

import math

import numpy as np
import pytest

from lattice_calc import (DimensionMismatchError, DualLattice, FiniteLattice,
                          LpFamily, NormedSpace, OrliczFamily, absolute,
                          compose, homogeneous, join, krivine_apply,
                          krivine_bound_check, krivine_compose_check, lattice,
                          lattice_valued_norm, meet, norm_function,
                          parse_gauge, projection, sup_representation)


def test_projection_recovery_exact():
    rows = np.array([[1.0, -1.0, 2.0], [0.5, 3.0, -2.0]])
    for j in range(2):
        assert np.array_equal(krivine_apply(projection(2, j), rows), rows[j])


def test_pointwise_euclidean():
    rows = np.array([[1.0, 0.0], [0.0, 1.0]])
    got = krivine_apply(norm_function(LpFamily(2), 2), rows)
    assert np.allclose(got, [1.0, 1.0])


def test_pointwise_join():
    h = homogeneous(lambda a: np.maximum(a[..., 0], a[..., 1]), 2,
                    batched=True)
    got = krivine_apply(h, np.array([[1.0, -1.0], [0.0, 2.0]]))
    assert np.array_equal(got, [1.0, 2.0])


def test_lattice_operations_coordinatewise():
    x = np.array([1.0, -2.0, 0.0])
    y = np.array([0.0, 3.0, -1.0])
    assert np.array_equal(join(x, y), [1.0, 3.0, 0.0])
    assert np.array_equal(meet(x, y), [0.0, -2.0, -1.0])
    assert np.array_equal(absolute(x), join(x, -x))


def test_lattice_valued_norm_values():
    rows = np.array([[1.0, 2.0], [2.0, 1.0]])
    assert np.allclose(lattice_valued_norm(LpFamily(1), rows), [3.0, 3.0])
    assert np.allclose(lattice_valued_norm(LpFamily(math.inf), rows),
                       [2.0, 2.0])
    orl = OrliczFamily(parse_gauge("u^2"))
    rows2 = np.array([[3.0, 0.0], [4.0, 0.0]])
    assert np.allclose(lattice_valued_norm(orl, rows2), [5.0, 0.0],
                       atol=1e-12)


def test_compose_identity_with_projections():
    rows = np.random.default_rng(0).standard_normal((3, 4))
    inner = [projection(3, j) for j in range(3)]
    h = norm_function(LpFamily(2), 3)
    lhs, rhs, equal = krivine_compose_check(inner, h, rows)
    assert equal
    assert np.array_equal(lhs, krivine_apply(h, rows))


def test_compose_identity_with_diagonal_scaling():
    # scaling the arguments before a norm equals composing with the scaled norm
    rng = np.random.default_rng(1)
    rows = rng.standard_normal((3, 4))
    coeff = rng.uniform(0.5, 2.0, 3)
    inner = [homogeneous(lambda a, j=j, c=coeff[j]: c * a[..., j], 3,
                         batched=True) for j in range(3)]
    h = norm_function(LpFamily(1.5), 3)
    lhs, rhs, equal = krivine_compose_check(inner, h, rows)
    assert equal


def test_compose_identity_random_sweep():
    count = 0
    for k in range(100):
        rng = np.random.default_rng(500 + k)
        n, m = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        rows = rng.standard_normal((n, m))
        cols = rng.standard_normal((2, n))
        inner = [homogeneous(lambda a, c=c: a @ c, n, batched=True, samples=4)
                 for c in cols]
        inner.append(norm_function(LpFamily(2), n))
        h = norm_function(LpFamily(1), 3)
        _, _, equal = krivine_compose_check(inner, h, rows)
        count += equal
    assert count == 100


def test_bound_check_projection_and_ones():
    X = lattice(2, LpFamily(math.inf))
    rows = np.array([[1.0, 0.0], [0.0, 1.0]])
    lhs, rhs, holds = krivine_bound_check(projection(2, 0), rows, X)
    assert holds and lhs == 1.0 and rhs == 1.0
    m = 4
    X1 = lattice(m, LpFamily(1))
    ones = np.ones((3, m))
    lhs, rhs, holds = krivine_bound_check(norm_function(LpFamily(1), 3),
                                          ones, X1)
    assert holds
    assert lhs == pytest.approx(3.0 * m)
    assert rhs == pytest.approx(3.0 * m)


def test_bound_check_random_sweep():
    for k in range(200):
        rng = np.random.default_rng(900 + k)
        n, m = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        rows = rng.standard_normal((n, m)) * 2.0
        X = lattice(m, LpFamily([1, 2, math.inf][k % 3]))
        h = norm_function(LpFamily([1, 1.5, 2][(k + 1) % 3]), n)
        _, _, holds = krivine_bound_check(h, rows, X)
        assert holds


def test_homogeneity_validated_at_construction():
    # linear functionals pass, quadratics are rejected with a diagnostic
    homogeneous(lambda a: a @ np.array([1.0, -2.0]), 2, batched=True)
    with pytest.raises(Exception, match="homogeneous"):
        homogeneous(lambda a: (a ** 2).sum(axis=-1), 2, batched=True)


def test_sampled_sup_norm_is_lower_estimate():
    h = homogeneous(lambda a: np.abs(a).sum(axis=-1), 3, batched=True,
                    samples=2000, seed=1)
    assert h.sup_norm <= 3.0 + 1e-12
    assert h.sup_norm >= 2.5  # cube corners dominate and sampling gets close


def test_sup_representation_bounds_and_analytic():
    rng = np.random.default_rng(4)
    for p in (1.0, 1.5, 2.0, math.inf):
        fam = LpFamily(p)
        rows = rng.standard_normal((3, 5)) * 2.0
        rep = sup_representation(fam, rows, samples=128, seed=7)
        assert np.all(rep.sampled <= rep.reference + 1e-9)
        assert np.allclose(rep.analytic, rep.reference, rtol=1e-9, atol=1e-12)


def test_spaces_and_duals():
    X = lattice(3, LpFamily(3))
    assert isinstance(X, FiniteLattice)
    Xd = X.dual()
    assert isinstance(Xd, DualLattice)
    assert Xd.base is X
    # dual norm is the conjugate lp norm: (1 + 1 + 1) ** (2/3) under l1.5
    assert Xd.norm([1.0, 1.0, 1.0]) == pytest.approx(3.0 ** (2.0 / 3.0))
    # pairing bound against the dual norm
    rng = np.random.default_rng(2)
    for _ in range(100):
        x = rng.standard_normal(3)
        phi = rng.standard_normal(3)
        assert abs(phi @ x) <= Xd.norm(phi) * X.norm(x) * (1 + 1e-9)


def test_dimension_checks():
    X = lattice(2, LpFamily(2))
    with pytest.raises(DimensionMismatchError):
        X.norm([1.0, 2.0, 3.0])
    with pytest.raises(DimensionMismatchError):
        krivine_apply(projection(3, 0), np.ones((2, 2)))
    with pytest.raises(DimensionMismatchError):
        compose(norm_function(LpFamily(2), 2),
                [projection(2, 0), projection(3, 1)])


def test_normed_space_dual_of_dual():
    E = NormedSpace(2, LpFamily(1.5))
    Edd = E.dual().dual()
    probes = np.random.default_rng(8).standard_normal((10, 2))
    assert np.allclose(Edd.norm_array(probes), E.norm_array(probes),
                       rtol=1e-12)
