import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from weylrbm import rootsys, weyl

from conftest import FAMILIES
from oracles import GROUP_ORDERS, ORBIT_COUNTS, sorted_projection, union_indicator


@pytest.mark.parametrize("name", FAMILIES)
def test_group_order(name, systems):
    _, _, group = systems(name)
    assert group.order == GROUP_ORDERS[name]


@pytest.mark.parametrize("name", ["I2(3)", "orth3", "A3", "B2", "I2(8)"])
def test_group_closed_exhaustive(name, systems):
    _, _, group = systems(name)
    for a in group.matrices:
        assert group.contains(a.T)
        for b in group.matrices:
            assert group.contains(a @ b)


def test_words_reproduce_matrices(systems):
    rs, _, group = systems("B3")
    gens = weyl.simple_reflections(rs)
    for el in group:
        np.testing.assert_allclose(weyl.word_matrix(gens, el.word), el.matrix, atol=1e-12)


def test_dihedral3_elements(systems):
    rs, _, group = systems("I2(3)")
    dets = np.round(np.linalg.det(group.matrices)).astype(int)
    assert sorted(dets) == [-1, -1, -1, 1, 1, 1]


def test_group_cap():
    rs = rootsys.build_root_system("A5")
    with pytest.raises(weyl.GroupOrderError):
        weyl.enumerate_group(rs, cap=100)


@pytest.mark.parametrize("name", FAMILIES)
def test_orbit_table(name, systems):
    rs, _, group = systems(name)
    table = weyl.orbit_table(group, rs)
    assert sorted(o.simple_count for o in table) == ORBIT_COUNTS[name]
    assert sum(len(o.orbit_positives) for o in table) == len(rs.positives)


@pytest.mark.parametrize("name", [n for n in FAMILIES if not n.startswith("I2")])
def test_projection_matches_sorting(name, systems, rng):
    rs, _, _ = systems(name)
    x = rng.standard_normal((2000, rs.rank)) * 3
    np.testing.assert_allclose(weyl.project_points(rs, x), sorted_projection(rs, x), atol=1e-12)


@pytest.mark.parametrize("name", FAMILIES)
def test_descent_equals_enumeration(name, systems, rng):
    rs, _, group = systems(name)
    x = rng.standard_normal((1000, rs.rank))
    desc = weyl.project_points(rs, x)
    enum, which = weyl.project_points_enumerated(group, rs.simple_span, x)
    np.testing.assert_allclose(desc, enum, atol=1e-10)
    assert np.all(desc @ rs.simple_span.T >= -1e-10)
    np.testing.assert_allclose(np.einsum("kij,kj->ki", group.matrices[which], enum), x, atol=1e-10)


@given(st.sampled_from(["B2", "I2(5)", "A3"]),
       arrays(float, 3, elements=st.floats(-5, 5, allow_nan=False)))
def test_single_point_projection(name, x):
    rs = rootsys.build_root_system(name)
    x = x[:rs.rank]
    res = weyl.project_descent(rs, x)
    assert np.all(res.point @ rs.simple_span.T >= -1e-10)
    np.testing.assert_allclose(res.element.matrix @ res.point, x, atol=1e-9)
    np.testing.assert_allclose(weyl.project_points(rs, x[None])[0], res.point, atol=1e-12)
    # idempotent
    np.testing.assert_allclose(weyl.project_descent(rs, res.point).point, res.point, atol=1e-12)


def test_projection_on_walls_is_fixed(systems):
    rs, gd, _ = systems("B2")
    for xi in gd.dual:
        np.testing.assert_allclose(weyl.project_points(rs, xi[None])[0], xi, atol=1e-12)


@pytest.mark.parametrize("name", ["orth2", "B2", "I2(3)", "I2(4)", "A3", "B3"])
@pytest.mark.parametrize("eps", [0.05, 0.2])
def test_slab_identity_dichotomy(name, eps, systems):
    rs, _, group = systems(name)
    for i in range(rs.rank):
        orbit = weyl.orbit_of_simple(group, rs, i)
        c = weyl.proposition_set_check(group, rs, i, eps, samples=20_000, seed=i)
        assert c.lhs_only == 0
        if orbit.simple_count == 1:
            assert c.disagreements == 0 and c.both > 0
        else:
            assert c.rhs_only > 0


def test_union_indicator_oracle(systems, rng):
    rs, _, group = systems("I2(3)")
    x = rng.standard_normal((5000, 2))
    orbit = weyl.orbit_of_simple(group, rs, 0)
    proj = weyl.project_points(rs, x)
    lhs, rhs = weyl.proposition_indicators(rs, orbit, x, proj, 0.2)
    np.testing.assert_array_equal(rhs, union_indicator(rs, group, 0, x, 0.2))
    assert np.any(rhs & ~lhs)


@pytest.mark.parametrize("name", ["orth1", "orth4", "A3", "B2", "B4", "I2(5)", "I2(6)"])
def test_normal_decomposition(name, systems):
    rs, gd, _ = systems(name)
    for i in range(rs.rank):
        nd = weyl.normal_decomposition(gd, i)
        assert nd.ok
        np.testing.assert_allclose(nd.boundary_part + nd.origin_part, gd.dual[i], atol=1e-10)


def test_sampled_chamber_points_inside(systems, rng):
    rs, gd, _ = systems("A4")
    pts = weyl.sample_chamber_points(gd, 500, rng)
    assert np.all(pts @ rs.simple_span.T >= -1e-10)
