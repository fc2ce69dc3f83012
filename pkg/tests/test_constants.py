"""Convexity and concavity constants, oracles and duality."""

import math

import numpy as np
import pytest

from lattice_calc import (AscentBudget, InputError, LpFamily, OperatorInstance,
                          ScaleGuardError, brute_force_constant,
                          concavity_ratio, convexity_ratio, duality_check,
                          estimate_constant, functional_norm, kothe_dual,
                          lattice, lattice_constants, pointwise_mixed_norm,
                          strong_mixed_norm)

LIGHT = AscentBudget(12, 200, 0.1)


def _identity(p, m=3):
    space = lattice(m, LpFamily(p))
    return OperatorInstance(np.eye(m), space, space)


def test_ratio_identity_matched_lp_is_one():
    rng = np.random.default_rng(0)
    for p in (1.0, 2.0, math.inf):
        op = _identity(p)
        for _ in range(20):
            rows = rng.standard_normal((3, 3)) * 2.0
            assert convexity_ratio(op, LpFamily(p), rows) == pytest.approx(1.0)
            assert concavity_ratio(op, LpFamily(p), rows) == pytest.approx(1.0)


def test_ratio_scaling():
    rng = np.random.default_rng(1)
    mat = rng.standard_normal((2, 2))
    E = lattice(2, LpFamily(2))
    X = lattice(2, LpFamily(1))
    op = OperatorInstance(mat, E, X)
    scaled = OperatorInstance(-1.5 * mat, E, X)
    rows = rng.standard_normal((3, 2))
    assert convexity_ratio(scaled, LpFamily(2), rows) == pytest.approx(
        1.5 * convexity_ratio(op, LpFamily(2), rows), rel=1e-12)


def test_ratio_recomposition_oracle():
    rng = np.random.default_rng(2)
    mat = rng.standard_normal((3, 2))
    E = lattice(2, LpFamily(1.5))
    X = lattice(3, LpFamily(2))
    op = OperatorInstance(mat, E, X)
    fam = LpFamily(3)
    rows = rng.standard_normal((3, 2))
    lifted = rows @ mat.T
    expected = (pointwise_mixed_norm(X, fam, lifted)
                / strong_mixed_norm(E, fam, rows))
    assert convexity_ratio(op, fam, rows) == pytest.approx(expected, rel=1e-12)


def test_zero_denominator_rejected():
    op = _identity(2)
    with pytest.raises(InputError):
        convexity_ratio(op, LpFamily(2), np.zeros((2, 3)))
    with pytest.raises(InputError):
        concavity_ratio(op, LpFamily(2), np.zeros((2, 3)))


def test_estimate_identity_levels_are_one():
    est = estimate_constant(_identity(2), LpFamily(2), "convexity", 3,
                            LIGHT, seed=0)
    for bound in est.per_n:
        assert bound.value == pytest.approx(1.0, abs=1e-6)
    assert est.overall == pytest.approx(1.0, abs=1e-6)


def test_estimate_scaling_same_seed():
    rng = np.random.default_rng(3)
    mat = rng.standard_normal((2, 2))
    E = lattice(2, LpFamily(2))
    X = lattice(2, LpFamily(1))
    a = estimate_constant(OperatorInstance(mat, E, X), LpFamily(2),
                          "convexity", 2, LIGHT, seed=11)
    b = estimate_constant(OperatorInstance(2.0 * mat, E, X), LpFamily(2),
                          "convexity", 2, LIGHT, seed=11)
    for x, y in zip(a.per_n, b.per_n):
        assert y.value == pytest.approx(2.0 * x.value, rel=1e-9)


def test_estimate_levels_nondecreasing_and_witnesses():
    rng = np.random.default_rng(4)
    mat = rng.standard_normal((3, 3))
    E = lattice(3, LpFamily(2))
    X = lattice(3, LpFamily(1))
    op = OperatorInstance(mat, E, X)
    est = estimate_constant(op, LpFamily(1.5), "convexity", 3, LIGHT, seed=2)
    values = [b.value for b in est.per_n]
    assert values == sorted(values)
    for bound in est.per_n:
        assert convexity_ratio(op, LpFamily(1.5), bound.witness) == \
            pytest.approx(bound.value, rel=1e-9)


def test_brute_force_identity_and_scalar():
    bf = brute_force_constant(_identity(2, m=2), LpFamily(2), "convexity", 2,
                              grid_resolution=9)
    assert bf.per_n[0].value == pytest.approx(1.0, abs=1e-12)
    assert bf.certified
    E1 = lattice(1, LpFamily(2))
    lam = OperatorInstance([[-2.5]], E1, E1)
    bf = brute_force_constant(lam, LpFamily(2), "convexity", 1)
    assert bf.per_n[0].value == pytest.approx(2.5)
    assert bf.optimizer["upper_bracket"] >= bf.per_n[0].value


def test_brute_force_scale_guard():
    with pytest.raises(ScaleGuardError):
        brute_force_constant(_identity(2, m=4), LpFamily(2), "convexity", 2)


def test_estimate_agrees_with_grid_oracle():
    for k, (hp, xp) in enumerate([(1.0, math.inf), (2.0, 1.0)]):
        rng = np.random.default_rng(40 + k)
        mat = rng.standard_normal((2, 2))
        E = lattice(2, LpFamily(hp))
        X = lattice(2, LpFamily(xp))
        op = OperatorInstance(mat, E, X)
        for flavor, dom in (("convexity", (E, X)), ("concavity", (X, E))):
            inst = OperatorInstance(mat, *dom)
            est = estimate_constant(inst, LpFamily(2), flavor, 2,
                                    seed=7 + k).per_n[-1].value
            grid = brute_force_constant(inst, LpFamily(2), flavor, 2,
                                        grid_resolution=21).per_n[0].value
            assert est == pytest.approx(grid, rel=1e-2)


def test_functional_norm_sqrt2_case():
    E = lattice(1, LpFamily(2))
    res = functional_norm(E, LpFamily(2), [[1.0], [1.0]], "strong", LIGHT, 0)
    assert res.value == pytest.approx(math.sqrt(2.0), rel=1e-9)


def test_functional_norm_single_coordinate():
    E = lattice(3, LpFamily(3))
    s = np.array([[0.0, 2.0, 0.0]])
    res = functional_norm(E, LpFamily(2), s, "strong", LIGHT, 0)
    dual_row = E.dual().norm(s[0])
    expect = dual_row * kothe_dual(LpFamily(2)).norm([1.0])
    assert res.value == pytest.approx(expect, rel=1e-9)


def test_functional_norm_matches_dual_mixed_norms():
    for k in range(4):
        rng = np.random.default_rng(60 + k)
        space = lattice(3, LpFamily([2, 1.5, 3, 2][k]))
        fam = LpFamily([2, 3, 1.5, 2][k])
        s = rng.standard_normal((2, 3))
        strong = functional_norm(space, fam, s, "strong", seed=k)
        assert strong.value == pytest.approx(
            strong_mixed_norm(space.dual(), kothe_dual(fam), s), rel=1e-3)
        pw = functional_norm(space, fam, s, "pointwise", seed=k)
        assert pw.value == pytest.approx(
            pointwise_mixed_norm(space.dual(), kothe_dual(fam), s), rel=1e-3)


def test_duality_identity_and_scaling():
    rep = duality_check(_identity(2), LpFamily(2), 2, LIGHT, seed=0)
    assert rep.rel_gap < 1e-6
    rng = np.random.default_rng(5)
    mat = rng.standard_normal((2, 2))
    E = lattice(2, LpFamily(2))
    X = lattice(2, LpFamily(1))
    a = duality_check(OperatorInstance(mat, E, X), LpFamily(2), 2, LIGHT, 3)
    b = duality_check(OperatorInstance(3.0 * mat, E, X), LpFamily(2), 2,
                      LIGHT, 3)
    assert b.convex_n == pytest.approx(3.0 * a.convex_n, rel=1e-9)
    assert b.rel_gap == pytest.approx(a.rel_gap, abs=1e-9)


def test_lattice_constants_matched_lp_and_linf():
    conv, conc = lattice_constants(lattice(3, LpFamily(2)), LpFamily(2), 2,
                                   LIGHT, seed=0)
    assert conv.overall == pytest.approx(1.0, abs=1e-6)
    assert conc.overall == pytest.approx(1.0, abs=1e-6)
    conv, _ = lattice_constants(lattice(3, LpFamily(math.inf)),
                                LpFamily(math.inf), 2, LIGHT, seed=0)
    assert conv.overall == pytest.approx(1.0, abs=1e-6)


def test_lattice_constant_l1_lattice_vs_grid():
    space = lattice(2, LpFamily(1))
    conv, _ = lattice_constants(space, LpFamily(2), 2, seed=1)
    ident = OperatorInstance(np.eye(2), space, space)
    grid = brute_force_constant(ident, LpFamily(2), "convexity", 2,
                                grid_resolution=21)
    assert conv.per_n[-1].value == pytest.approx(grid.per_n[0].value,
                                                 rel=1e-2)
    # two orthogonal rows of unit l1 norm give the known sqrt(2) lower bound
    assert conv.per_n[-1].value >= math.sqrt(2.0) - 1e-9


def test_flavor_validation():
    op = _identity(2)
    with pytest.raises(InputError):
        estimate_constant(op, LpFamily(2), "smoothness", 2)
    with pytest.raises(InputError):
        estimate_constant(op, LpFamily(2), "convexity", 0)


def test_estimate_to_record_roundtrip():
    est = estimate_constant(_identity(2, m=2), LpFamily(2), "convexity", 2,
                            LIGHT, seed=0)
    rec = est.to_record()
    assert rec["flavor"] == "convexity"
    assert len(rec["per_n"]) == 2
    assert rec["per_n"][0]["n"] == 1
    assert rec["optimizer"]["restarts"] == LIGHT.restarts
