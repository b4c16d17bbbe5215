"""Smoke tests for the _pointlim extension module."""

import math

import pytest

import _pointlim as pl


def fixture_triple(name, **params):
    triple, tag, _note = pl.fixture(name, params)
    return triple, tag


def test_fixture_classification_tags():
    for name, expected in [
        ("a1_fixture", "A1"),
        ("a2_fixture", "A2"),
        ("a3_fixture", "A3"),
        ("b1_fixture", "B1"),
        ("b2_fixture", "B2"),
        ("b3_lambda", "B3"),
    ]:
        triple, tag = fixture_triple(name)
        assert tag == expected
        doc = pl.classify(triple)
        assert doc["case"] == expected
        assert doc["schema_version"] == 1


def test_profile_moments_and_norms():
    one = pl.Profile.constant(1.0)
    assert one.moment(0) == pytest.approx(2.0)
    bump = pl.Profile.bump_even()
    assert bump.l2norm() == pytest.approx(1.0, abs=1e-12)
    x = pl.Profile.poly([0.0, 1.0])
    assert x.moment(1) == pytest.approx(2.0 / 3.0)
    assert x(0.25) == pytest.approx(0.25)
    assert x(1.5) == 0.0


def test_scattering_unitarity_and_limit():
    triple, _ = fixture_triple("a3_fixture")
    s = pl.scattering_eps(triple, 0.125, 1.0)
    assert s.unitarity_defect() < 1e-8
    lim = pl.scattering_limit(triple, 1.0)
    # delta interaction of strength 2: t = 2i/(2i - 2)
    expected = 2j / (2j - 2.0)
    assert lim.t == pytest.approx(expected, abs=1e-12)
    assert abs(s.t - expected) < 0.1


def test_convergence_and_fit():
    triple, _ = fixture_triple("a3_fixture")
    rep = pl.scattering_convergence(triple, 1.0, [0.125, 0.0625, 0.03125, 0.015625])
    assert rep["fitted"]
    assert rep["slope"] >= 0.45

    slope, intercept, residual = pl.fit_rate([(0.1, 1e-3), (0.05, 5e-4), (0.025, 2.5e-4)])
    assert slope == pytest.approx(1.0, abs=1e-12)
    assert residual < 1e-12


def test_invariants_and_states():
    triple, _ = fixture_triple("a1_fixture")
    inv = pl.invariants(triple)
    assert inv["zero_mean"]
    assert inv["kappa"][0] == pytest.approx(math.sqrt(15.0) / 3.0, abs=1e-12)
    hbs = pl.half_bound_states(triple)
    assert hbs["kind"] == "Double"
    assert len(hbs["states"]) == 2
    assert hbs["residual"] < 1e-8


def test_errors_are_raised():
    f = pl.Profile.bump_even()
    with pytest.raises(Exception):
        pl.Triple(f, f, pl.Profile.constant(0.0))


def test_package_wrapper_reexports():
    import pointlim

    triple, tag, _ = pointlim.fixture("a3_fixture")
    assert pointlim.classify(triple)["case"] == tag == "A3"
