"""Mixed tuple norms, truncated sequences and the pairing checks."""

import math

import numpy as np
import pytest

from lattice_calc import (DimensionMismatchError, InputError, LpFamily,
                          OrliczFamily, TruncatedSequence, VectorTuple,
                          join_bound_check, lattice, lattice_holder_check,
                          mixed_norm_equivalence_check, parse_gauge,
                          pointwise_mixed_norm, riesz_join_check,
                          sequence_pairing, strong_mixed_norm, tail_profile)
from lattice_calc.seq_lattice import kothe_dual

# ---------------------------------------------------------------------------
# independent recomposition oracles (plain python, no package reductions)


def strong_oracle(space_p, family, rows):
    """Row norms by hand, then the family norm of that vector."""
    norms = []
    for row in rows:
        if space_p == math.inf:
            norms.append(max(abs(v) for v in row))
        else:
            norms.append(sum(abs(v) ** space_p for v in row) ** (1 / space_p))
    return family.norm(norms)


def pointwise_oracle(space_p, family, rows):
    """Per-coordinate family norms by double loop, then the space norm."""
    n, m = rows.shape
    pw = [family.norm([rows[j][w] for j in range(n)]) for w in range(m)]
    if space_p == math.inf:
        return max(pw)
    return sum(v ** space_p for v in pw) ** (1 / space_p)


# ---------------------------------------------------------------------------

def test_strong_mixed_norm_value():
    E = lattice(2, LpFamily(2))
    w = np.array([[3.0, 4.0], [0.0, 1.0]])
    assert strong_mixed_norm(E, LpFamily(1), w) == pytest.approx(6.0)


def test_strong_mixed_norm_padding():
    E = lattice(2, LpFamily(2))
    w = np.array([[3.0, 4.0], [0.0, 1.0]])
    padded = np.vstack([w, np.zeros((1, 2))])
    assert strong_mixed_norm(E, LpFamily(1), padded) == \
        strong_mixed_norm(E, LpFamily(1), w)


def test_strong_mixed_norm_orlicz_recomposition():
    orl = OrliczFamily(parse_gauge("u^2"))
    E = lattice(3, LpFamily(2))
    rng = np.random.default_rng(1)
    for _ in range(25):
        w = rng.standard_normal((4, 3)) * 2.0
        assert strong_mixed_norm(E, orl, w) == pytest.approx(
            strong_oracle(2.0, orl, w), rel=1e-12)


def test_pointwise_mixed_norm_value():
    X = lattice(2, LpFamily(math.inf))
    x = np.array([[3.0, 0.0], [4.0, 0.0]])
    assert pointwise_mixed_norm(X, LpFamily(2), x) == pytest.approx(5.0)


def test_pointwise_matches_strong_for_matched_lp():
    rng = np.random.default_rng(2)
    for p in (1.0, 2.0, 3.0, math.inf):
        X = lattice(3, LpFamily(p))
        fam = LpFamily(p)
        for _ in range(20):
            x = rng.standard_normal((3, 3)) * 2.0
            assert pointwise_mixed_norm(X, fam, x) == pytest.approx(
                strong_mixed_norm(X, fam, x), rel=1e-12)


def test_pointwise_mixed_norm_recomposition():
    rng = np.random.default_rng(3)
    for p in (1.0, 2.0, math.inf):
        X = lattice(3, LpFamily(p))
        for fam in (LpFamily(1.5), OrliczFamily(parse_gauge("u^2"))):
            x = rng.standard_normal((4, 3)) * 2.0
            assert pointwise_mixed_norm(X, fam, x) == pytest.approx(
                pointwise_oracle(p, fam, x), rel=1e-12)


def test_equivalence_check_single_row_and_sweep():
    X = lattice(3, LpFamily(2))
    fam = LpFamily(1.5)
    row = np.array([[1.0, -2.0, 0.5]])
    tau, summed, holds = mixed_norm_equivalence_check(X, fam, row)
    assert holds
    assert tau == pytest.approx(fam.unit_vector_norm(0, 1) * X.norm(row[0]))
    assert summed == pytest.approx(X.norm(row[0]))
    rng = np.random.default_rng(4)
    for k in range(200):
        x = rng.standard_normal((3, 3)) * 2.0
        _, _, ok = mixed_norm_equivalence_check(X, fam, x)
        assert ok


def test_equivalence_disjoint_l1_equality():
    # additive lattice norm on disjoint supports: the two sides coincide
    X = lattice(2, LpFamily(1))
    x = np.array([[1.0, 0.0], [0.0, 1.0]])
    tau, summed, holds = mixed_norm_equivalence_check(X, LpFamily(1), x)
    assert holds
    assert tau == pytest.approx(summed)
    # non-disjoint rows in the same setting stay strictly below
    y = np.array([[1.0, 0.0], [1.0, 1.0]])
    tau2, summed2, _ = mixed_norm_equivalence_check(X, LpFamily(1), y)
    assert tau2 == pytest.approx(summed2)  # l1 over l1 is additive anyway
    X2 = lattice(2, LpFamily(2))
    tau3, summed3, _ = mixed_norm_equivalence_check(X2, LpFamily(1), y)
    assert tau3 < summed3


def test_tail_profile_values_and_monotonicity():
    E = lattice(2, LpFamily(2))
    fam = LpFamily(1)
    seq = np.array([[3.0, 4.0], [0.0, 0.0]])
    prof = tail_profile(fam, E, seq, "strong")
    assert prof[0] == pytest.approx(5.0 * fam.unit_vector_norm(0, 1))
    assert prof[1] == 0.0
    geo = np.array([[2.0 ** -j, 2.0 ** -j] for j in range(1, 5)])
    prof = tail_profile(fam, E, geo, "strong")
    assert np.all(np.diff(prof) < 0.0)
    rng = np.random.default_rng(5)
    for flavor in ("strong", "pointwise"):
        for _ in range(50):
            seq = rng.standard_normal((4, 2))
            prof = tail_profile(fam, E, seq, flavor)
            assert np.all(np.diff(prof) <= prof[0] * 1e-12)


def test_truncated_sequence_norm_at_last_nonzero():
    E = lattice(2, LpFamily(2))
    fam = LpFamily(1.5)
    rows = np.array([[1.0, 2.0], [0.5, -1.0], [0.0, 0.0]])
    seq = TruncatedSequence(VectorTuple(rows))
    assert seq.last_nonzero == 2
    assert strong_mixed_norm(E, fam, rows) == \
        strong_mixed_norm(E, fam, rows[:2])


def test_vector_tuple_immutable_and_validated():
    vt = VectorTuple(np.array([[1.0, 2.0]]))
    with pytest.raises(ValueError):
        vt.rows[0, 0] = 3.0
    with pytest.raises(InputError):
        VectorTuple(np.array([1.0, 2.0]))
    padded = vt.padded(2)
    assert padded.n == 3 and padded.dim == 2


def test_sequence_pairing_values_and_bound():
    E = lattice(2, LpFamily(2))
    fam = LpFamily(2)
    value, report = sequence_pairing(E, fam, [[1.0, 0.0]], [[1.0, 0.0]])
    assert value == pytest.approx(1.0)
    assert report["holds"]
    assert report["rhs"] == pytest.approx(1.0)
    value, report = sequence_pairing(E, fam, np.zeros((2, 2)),
                                     np.ones((2, 2)))
    assert value == 0.0
    rng = np.random.default_rng(6)
    for fam in (LpFamily(2), LpFamily(3)):
        for _ in range(100):
            s = rng.standard_normal((3, 2))
            w = rng.standard_normal((3, 2))
            _, report = sequence_pairing(E, fam, s, w)
            assert report["holds"]


def test_lattice_holder_scalar_reduces_to_cauchy_schwarz():
    X = lattice(1, LpFamily(2))
    x = np.array([[2.0], [3.0]])
    phi = np.array([[4.0], [6.0]])  # proportional: equality
    lhs, rhs, holds = lattice_holder_check(X, LpFamily(2), x, phi)
    assert holds
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_lattice_holder_single_row():
    X = lattice(3, LpFamily(2))
    rng = np.random.default_rng(7)
    for fam in (LpFamily(1.5), LpFamily(3)):
        for _ in range(50):
            x = rng.standard_normal((1, 3))
            phi = rng.standard_normal((1, 3))
            lhs, rhs, holds = lattice_holder_check(X, fam, x, phi)
            assert holds


def test_lattice_holder_sweep_four_families():
    X = lattice(3, LpFamily(2))
    rng = np.random.default_rng(8)
    fams = [LpFamily(1), LpFamily(2), LpFamily(3),
            OrliczFamily(parse_gauge("u^2"))]
    for fam in fams:
        dual = kothe_dual(fam)
        for _ in range(50):
            x = rng.standard_normal((4, 3)) * 2.0
            phi = rng.standard_normal((4, 3)) * 2.0
            _, _, holds = lattice_holder_check(X, fam, x, phi,
                                               dual_family=dual)
            assert holds


def test_riesz_join_single_and_disjoint():
    phis = np.array([[1.0, 0.5]])
    x = np.array([2.0, 1.0])
    jv, gv, ok = riesz_join_check(phis, x, trials=10, seed=0)
    assert ok and jv == pytest.approx(2.5) and gv == pytest.approx(2.5)
    phis = np.array([[1.0, 0.0], [0.0, 1.0]])
    x = np.array([1.0, 1.0])
    jv, gv, ok = riesz_join_check(phis, x, trials=10, seed=0)
    assert ok and jv == pytest.approx(2.0)


def test_riesz_join_random_sweep():
    for k in range(200):
        rng = np.random.default_rng(1000 + k)
        phis = rng.standard_normal((3, 4))
        x = np.abs(rng.standard_normal(4))
        _, _, ok = riesz_join_check(phis, x, trials=25, seed=k)
        assert ok


def test_riesz_join_rejects_negative():
    with pytest.raises(InputError):
        riesz_join_check(np.ones((2, 2)), np.array([1.0, -1.0]))


def test_join_bound_check_lp():
    X = lattice(3, LpFamily(2))
    rng = np.random.default_rng(9)
    for p in (1.5, 2.0, 3.0):
        for k in range(30):
            rows = rng.standard_normal((3, 3)) * 2.0
            rep = join_bound_check(X, LpFamily(p), rows, samples=16, seed=k)
            assert rep.holds
            assert rep.analytic_gap <= 1e-9


def test_dimension_mismatches_rejected():
    X = lattice(2, LpFamily(2))
    with pytest.raises(DimensionMismatchError):
        lattice_holder_check(X, LpFamily(2), np.ones((2, 2)), np.ones((3, 2)))
    with pytest.raises(DimensionMismatchError):
        sequence_pairing(X, LpFamily(2), np.ones((2, 2)), np.ones((3, 2)))
