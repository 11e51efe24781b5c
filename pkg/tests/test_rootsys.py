import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from weylrbm import rootsys
from weylrbm.rootsys import RootSystemError, RootSystemSpec

from conftest import FAMILIES
from oracles import WEDGE_ANGLES

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("text,expected", [
    ("A3", RootSystemSpec("A", 3)), ("b2", RootSystemSpec("B", 2)),
    ("I2(5)", RootSystemSpec("I2", 5)), ("dihedral(4)", RootSystemSpec("I2", 4)),
    ("orth4", RootSystemSpec("orth", 4)), ("Orthogonal(2)", RootSystemSpec("orth", 2)),
    ("A(2)", RootSystemSpec("A", 2)),
])
def test_parse(text, expected):
    assert RootSystemSpec.parse(text) == expected


@pytest.mark.parametrize("text", ["Z3", "", "I2(1)", "B1", "A0", "I2", "orth-1"])
def test_parse_rejects(text):
    with pytest.raises(RootSystemError):
        rootsys.build_root_system(text)


@pytest.mark.parametrize("name", FAMILIES)
def test_spec_string_round_trip(name):
    assert str(RootSystemSpec.parse(name)) == name


@pytest.mark.parametrize("name", FAMILIES)
def test_axioms(name, systems):
    rs, _, _ = systems(name)
    rep = rootsys.verify_root_system(rs)
    assert rep.ok, rep.failures
    assert len(rs.positives) * 2 == len(rs.roots)


@pytest.mark.parametrize("name,n_roots,ambient", [
    ("orth3", 6, 3), ("A2", 6, 3), ("A4", 20, 5), ("B3", 18, 3), ("I2(7)", 14, 2),
])
def test_sizes(name, n_roots, ambient, systems):
    rs, _, _ = systems(name)
    assert rs.roots.shape == (n_roots, ambient)


def test_span_basis_orthonormal(systems):
    rs, _, _ = systems("A4")
    np.testing.assert_allclose(rs.span_basis @ rs.span_basis.T, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(rs.from_span(rs.roots_span), rs.roots, atol=1e-12)


@given(arrays(float, 3, elements=finite), arrays(float, 3, elements=finite))
def test_reflection_involutive_isometric(a, v):
    if a @ a < 1e-6:
        return
    w = rootsys.reflect(a, v)
    np.testing.assert_allclose(rootsys.reflect(a, w), v, atol=1e-8)
    assert math.isclose(w @ w, v @ v, rel_tol=1e-9, abs_tol=1e-9)
    np.testing.assert_allclose(rootsys.reflection_matrix(a) @ v, w, atol=1e-8)


def test_reflect_errors():
    with pytest.raises(ValueError):
        rootsys.reflect(np.zeros(2), np.ones(2))
    with pytest.raises(ValueError):
        rootsys.reflect(np.ones(3), np.ones(2))


def test_reflect_batched():
    v = np.arange(12.0).reshape(4, 3)
    a = np.array([1.0, -1.0, 0.0])
    np.testing.assert_allclose(rootsys.reflect(a, v), [rootsys.reflect(a, r) for r in v])


@pytest.mark.parametrize("name", FAMILIES)
def test_dual_basis(name, systems):
    rs, gd, _ = systems(name)
    np.testing.assert_allclose(gd.lam @ gd.dual.T, np.eye(rs.rank), atol=1e-10)
    np.testing.assert_allclose(gd.gram @ gd.gram_inv, np.eye(rs.rank), atol=1e-10)


@pytest.mark.parametrize("name", FAMILIES)
def test_nonneg_lemma(name, systems):
    _, gd, _ = systems(name)
    ok, low = rootsys.lemma_nonneg_check(gd)
    assert ok and low >= -1e-10
    off = gd.gram[~np.eye(gd.rank, dtype=bool)]
    assert off.size == 0 or off.max() <= 1e-10


def test_nonneg_lemma_rank1(systems):
    _, gd, _ = systems("A1")
    assert rootsys.lemma_nonneg_check(gd) == (True, math.inf)


@pytest.mark.parametrize("name", ["orth3", "A2", "A3", "B2", "I2(3)"])
def test_integral_short_tail(name, systems):
    _, gd, _ = systems(name)
    ic = rootsys.lemma_integral_check(gd, 40.0, 4000)
    assert ic.deviation < 1e-6 and ic.positive


def test_integral_warns_on_long_tail(systems):
    _, gd, _ = systems("I2(8)")
    with pytest.warns(RuntimeWarning):
        ic = rootsys.lemma_integral_check(gd, 40.0, 4000)
    assert ic.tail_bound > 1e-6 and ic.deviation > 1e-6
    # the same integral converges once the horizon covers the slow mode
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        long = rootsys.lemma_integral_check(gd, 800.0, 80000)
    assert long.deviation < 1e-6


@pytest.mark.parametrize("name", sorted(WEDGE_ANGLES))
def test_wedge_angle(name, systems):
    _, gd, _ = systems(name)
    assert rootsys.wedge_angle(gd) == pytest.approx(WEDGE_ANGLES[name], abs=1e-12)


def test_simple_coefficients_integral(systems):
    rs, _, _ = systems("B3")
    c = rs.simple_coefficients(rs.positives_span)
    np.testing.assert_allclose(c, np.rint(c), atol=1e-10)
    assert np.all(c >= -1e-10)


@pytest.mark.parametrize("name", ["B3", "I2(6)", "A5"])
def test_integral_deviation_decreases_with_horizon(name, systems):
    _, gd, _ = systems(name)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        devs = [rootsys.lemma_integral_check(gd, t, int(100 * t)).deviation for t in (40.0, 80.0, 160.0)]
    assert devs[0] > devs[1] > devs[2]


def test_integral_identity_gram():
    gd = rootsys.gram_data(rootsys.build_root_system("orth3"))
    ic = rootsys.lemma_integral_check(gd, 20.0, 2000)
    assert ic.deviation == pytest.approx(math.exp(-20.0), rel=0.05)
