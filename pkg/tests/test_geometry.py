import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybrid_ep.geometry import (
    Box,
    DimensionMismatch,
    EmptyIntersection,
    EmptySet,
    HalfSpace,
    Polyhedron,
    as_point,
    halfspace_from_ball_comparison,
    project_box,
    project_halfspace,
    project_two_halfspaces,
)
from hybrid_ep.oracles import project_enumerate

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def vec(d):
    return st.lists(finite, min_size=d, max_size=d).map(np.array)


# -- value types -------------------------------------------------------------


def test_point_rejects_nan_and_inf():
    with pytest.raises(ValueError):
        as_point([1.0, np.nan])
    with pytest.raises(ValueError):
        as_point([np.inf, 0.0])


def test_point_dimension_check():
    with pytest.raises(DimensionMismatch):
        as_point([1.0, 2.0], 3)
    with pytest.raises(DimensionMismatch):
        as_point(np.zeros((2, 2)))


def test_degenerate_halfspace_flags():
    assert HalfSpace([0.0, 0.0], 1.0).is_whole_space
    assert HalfSpace([0.0, 0.0], -1.0).is_empty
    assert not HalfSpace([1.0, 0.0], -1.0).degenerate


def test_box_requires_ordered_bounds():
    with pytest.raises(ValueError):
        Box([0.0, 2.0], [1.0, 1.0])


def test_polyhedron_membership_and_stacking():
    poly = Polyhedron([[1.0, 1.0]], [1.0], Box([0.0, 0.0], [2.0, 2.0]))
    assert poly.contains([0.5, 0.5])
    assert not poly.contains([0.8, 0.8])
    assert not poly.contains([-0.1, 0.0])
    A, b = poly.stacked()
    assert A.shape == (5, 2) and b.tolist() == [1.0, 2.0, 2.0, 0.0, 0.0]


def test_polyhedron_length_mismatch():
    with pytest.raises(DimensionMismatch):
        Polyhedron([[1.0, 0.0], [0.0, 1.0]], [1.0])


def test_with_constraint_appends_row():
    poly = Polyhedron.from_box([0, 0], [1, 1]).with_constraint([1.0, 1.0], 1.5)
    assert poly.n_ineq == 1 and not poly.is_box


# -- project_halfspace -------------------------------------------------------


@pytest.mark.parametrize(
    "x, normal, offset, expected",
    [
        ((2, 0), (1, 0), 1, (1, 0)),
        ((0, 0), (1, 0), 1, (0, 0)),
        ((3, 3), (1, 1), 2, (1, 1)),
    ],
)
def test_project_halfspace_examples(x, normal, offset, expected):
    p = project_halfspace(x, HalfSpace(normal, offset))
    np.testing.assert_allclose(p, expected, atol=1e-14)
    np.testing.assert_allclose(p, project_enumerate(x, [normal], [offset]), atol=1e-12)


def test_project_halfspace_degenerate():
    x = np.array([1.0, 2.0])
    np.testing.assert_array_equal(project_halfspace(x, HalfSpace([0, 0], 0.0)), x)
    with pytest.raises(EmptySet):
        project_halfspace(x, HalfSpace([0, 0], -1.0))


def test_project_halfspace_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        project_halfspace([1.0, 2.0, 3.0], HalfSpace([1.0, 0.0], 0.0))


@given(vec(3), vec(3), finite)
def test_project_halfspace_feasible_result(x, a, b):
    h = HalfSpace(a, b)
    if h.degenerate:
        return
    p = project_halfspace(x, h)
    assert a @ p <= b + 1e-12 * (1 + abs(b)) + 1e-12 * np.linalg.norm(a) * np.linalg.norm(p)


# -- project_two_halfspaces --------------------------------------------------


def test_two_halfspaces_box_corner():
    p = project_two_halfspaces([2, 2], HalfSpace([1, 0], 1), HalfSpace([0, 1], 1))
    np.testing.assert_allclose(p, [1, 1])


def test_two_halfspaces_interior_identity():
    x = np.array([0.2, -0.3])
    np.testing.assert_array_equal(project_two_halfspaces(x, HalfSpace([1, 0], 1), HalfSpace([0, 1], 1)), x)


def test_two_halfspaces_single_active():
    # Projection onto the first boundary already satisfies the second.
    p = project_two_halfspaces([3, 0], HalfSpace([1, 0], 1), HalfSpace([0, 1], 1))
    np.testing.assert_allclose(p, [1, 0])


def test_two_halfspaces_parallel_same_direction_uses_tighter():
    p = project_two_halfspaces([5, 1], HalfSpace([1, 0], 3), HalfSpace([2, 0], 2))
    np.testing.assert_allclose(p, [1, 1])


def test_two_halfspaces_slab():
    p = project_two_halfspaces([5, 1], HalfSpace([1, 0], 1), HalfSpace([-1, 0], 1))
    np.testing.assert_allclose(p, [1, 1])
    p = project_two_halfspaces([-5, 1], HalfSpace([1, 0], 1), HalfSpace([-1, 0], 1))
    np.testing.assert_allclose(p, [-1, 1])


def test_two_halfspaces_empty_slab():
    with pytest.raises(EmptyIntersection):
        project_two_halfspaces([0, 0], HalfSpace([1, 0], -1), HalfSpace([-1, 0], -1))


def test_two_halfspaces_degenerate_members():
    h = HalfSpace([1, 0], 1)
    np.testing.assert_allclose(project_two_halfspaces([3, 3], h, HalfSpace([0, 0], 1)), [1, 3])
    with pytest.raises(EmptyIntersection):
        project_two_halfspaces([3, 3], h, HalfSpace([0, 0], -1))


def test_two_halfspaces_random_vs_enumeration():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        d = int(rng.integers(2, 11))
        a1, a2 = rng.standard_normal(d), rng.standard_normal(d)
        b = rng.standard_normal(2)
        x = 3 * rng.standard_normal(d)
        p = project_two_halfspaces(x, HalfSpace(a1, b[0]), HalfSpace(a2, b[1]))
        ref = project_enumerate(x, np.vstack([a1, a2]), b)
        assert np.linalg.norm(p - ref) <= 1e-8


# -- halfspace_from_ball_comparison ------------------------------------------


def test_ball_comparison_example():
    h = halfspace_from_ball_comparison([0, 0], [2, 0], 0.0)
    np.testing.assert_allclose(h.normal, [-4, 0])
    assert h.offset == -4.0
    assert h.contains([1.0, 7.0]) and not h.contains([0.99, 0.0])


def test_ball_comparison_degenerate():
    assert halfspace_from_ball_comparison([1, 2], [1, 2], 1.0).is_whole_space
    assert halfspace_from_ball_comparison([1, 2], [1, 2], -1.0).is_empty


@given(vec(3), vec(3), vec(3), st.floats(-5, 5))
def test_ball_comparison_matches_definition(far, near, z, slack):
    h = halfspace_from_ball_comparison(far, near, slack)
    lhs = np.sum((near - z) ** 2) - np.sum((far - z) ** 2) - slack
    assert np.isclose(h.value(z), lhs, atol=1e-9 * (1 + np.abs(z).max() ** 2 + np.abs(far).max() ** 2))


# -- project_box ---------------------------------------------------------------


def test_project_box_examples():
    box = Box([0, 0], [1, 1])
    np.testing.assert_array_equal(project_box([2, 5], box), [1, 1])
    np.testing.assert_array_equal(project_box([0.5, 0.5], box), [0.5, 0.5])
    with pytest.raises(DimensionMismatch):
        project_box([1, 2, 3], box)


def test_project_box_vs_enumeration():
    rng = np.random.default_rng(3)
    for _ in range(100):
        d = int(rng.integers(1, 5))
        lo = rng.uniform(-2, 0, d)
        hi = lo + rng.uniform(0, 3, d)
        x = 3 * rng.standard_normal(d)
        A = np.vstack([np.eye(d), -np.eye(d)])
        b = np.concatenate([hi, -lo])
        np.testing.assert_allclose(project_box(x, Box(lo, hi)), project_enumerate(x, A, b), atol=1e-10)


# -- projection properties ---------------------------------------------------

PROJECTIONS = {
    "halfspace": (lambda x: project_halfspace(x, HalfSpace([1.0, 2.0, -1.0], 0.5)), lambda y: y @ [1, 2, -1] <= 0.5),
    "two_halfspaces": (
        lambda x: project_two_halfspaces(x, HalfSpace([1.0, 2.0, -1.0], 0.5), HalfSpace([-1.0, 0.5, 1.0], 1.0)),
        lambda y: y @ [1, 2, -1] <= 0.5 and y @ [-1, 0.5, 1] <= 1.0,
    ),
    "box": (lambda x: project_box(x, Box([-1, 0, 0], [1, 2, 0.5])), None),
}


@pytest.mark.parametrize("name", sorted(PROJECTIONS))
@settings(max_examples=200)
@given(x=vec(3), y=vec(3))
def test_firm_nonexpansive(name, x, y):
    P, _ = PROJECTIONS[name]
    px, py = P(x), P(y)
    d = px - py
    assert d @ (x - y) >= d @ d - 1e-10 * (1 + np.abs(x).max() + np.abs(y).max()) ** 2


@pytest.mark.parametrize("name", sorted(PROJECTIONS))
@settings(max_examples=200)
@given(x=vec(3), w=vec(3))
def test_idempotent_and_variational(name, x, w):
    P, _ = PROJECTIONS[name]
    px = P(x)
    np.testing.assert_allclose(P(px), px, atol=1e-12 * (1 + np.abs(px).max()))
    y = P(w)  # a feasible point
    assert (x - px) @ (px - y) >= -1e-10 * (1 + np.abs(x).max() + np.abs(w).max()) ** 2
