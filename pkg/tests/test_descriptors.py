"""Descriptor parsing and the gauge expression grammar."""

import math

import numpy as np
import pytest

from lattice_calc import DescriptorError, family_from_descriptor, parse_gauge


def test_lp_descriptor_roundtrip():
    fam = family_from_descriptor({"kind": "lp", "p": 2})
    assert fam.norm([3, 4]) == 5.0
    assert fam.descriptor() == {"kind": "lp", "p": 2.0}
    inf = family_from_descriptor({"kind": "lp", "p": "inf"})
    assert inf.p == math.inf
    assert inf.descriptor() == {"kind": "lp", "p": "inf"}


def test_weighted_descriptor():
    fam = family_from_descriptor(
        {"kind": "weighted_lp", "p": 1, "weights": [2, 1]})
    assert fam.norm([1, 1]) == 3.0
    assert fam.descriptor()["weights"] == [2.0, 1.0]


def test_orlicz_descriptor():
    fam = family_from_descriptor({"kind": "orlicz", "phi": "u^2"})
    assert fam.norm([3, 4]) == pytest.approx(5.0, rel=1e-12)
    assert fam.descriptor() == {"kind": "orlicz", "phi": "u^2"}


def test_gauge_grammar_forms():
    u = np.linspace(0.0, 3.0, 7)
    cases = {
        "u^2": u ** 2,
        "2*u": 2 * u,
        "u^2 + u^3": u ** 2 + u ** 3,
        "0.5*u^1.5": 0.5 * u ** 1.5,
        "(u^2)*(1 + u)": u ** 2 * (1 + u),
        "exp(u)*u^2": np.exp(u) * u ** 2,
        "u^(2)": u ** 2,
    }
    for text, expected in cases.items():
        phi = parse_gauge(text)
        assert np.allclose(phi(u), expected), text


def test_gauge_grammar_rejections():
    for text in ("u - 1", "v^2", "u^u", "sin(u)", "u^", "2 +", "(u", "u/2"):
        with pytest.raises(DescriptorError):
            parse_gauge(text)


def test_invalid_gauges_rejected_by_validation():
    # parses, but fails the Orlicz contract (phi(0) = 1)
    with pytest.raises(Exception):
        parse_gauge("exp(u)")


def test_family_descriptor_rejections():
    for bad in ({"kind": "nope"}, {"p": 2}, "lp", {"kind": "lp"},
                {"kind": "weighted_lp", "p": 2},
                {"kind": "lp", "p": "two"}):
        with pytest.raises(DescriptorError):
            family_from_descriptor(bad)
