import numpy as np
import pytest

from hybrid_ep.geometry import Box, Polyhedron
from hybrid_ep.oracles import enumerate_qp, project_enumerate
from hybrid_ep.problems import EXAMPLE2_STARTS, make_example1, make_example2, make_vi_bifunction, AffineOperator
from hybrid_ep.qp import (
    Infeasible,
    MaxInnerIterations,
    ModelUnavailable,
    NotStronglyConvex,
    QuadraticObjective,
    certify,
    project_polyhedron,
    prox_subproblem,
    solve_qp,
)


def random_instance(rng, d, m):
    A = rng.standard_normal((m, d))
    center = rng.standard_normal(d)
    b = A @ center + rng.uniform(0.1, 2.0, m)
    B = rng.standard_normal((d, d))
    H = B @ B.T + 0.5 * np.eye(d)
    return H, 3 * rng.standard_normal(d), A, b


# -- QuadraticObjective --------------------------------------------------------


def test_objective_rejects_asymmetric_and_indefinite():
    with pytest.raises(ValueError):
        QuadraticObjective([[1.0, 0.5], [0.0, 1.0]], [0, 0])
    with pytest.raises(ValueError):
        QuadraticObjective([[1.0, 0.0], [0.0, -1.0]], [0, 0])


def test_objective_value_and_gradient():
    q = QuadraticObjective([[2.0, 0.0], [0.0, 4.0]], [1.0, -1.0], 3.0)
    assert q([1.0, 1.0]) == pytest.approx(0.5 * 6 + 0 + 3)
    np.testing.assert_allclose(q.gradient([1.0, 1.0]), [3.0, 3.0])


# -- solve_qp ---------------------------------------------------------------


def test_clamp_example():
    obj = QuadraticObjective(np.eye(2), [-2.0, -5.0])
    y, cert = solve_qp(obj, Polyhedron.from_box([0, 0], [1, 1]))
    np.testing.assert_allclose(y, [1, 1])
    assert cert.accepted()


def test_symmetry_example():
    # min 1/2|y|^2 s.t. y1 + y2 >= 1
    y, cert = solve_qp(QuadraticObjective(np.eye(2), [0.0, 0.0]), Polyhedron([[-1.0, -1.0]], [-1.0]))
    np.testing.assert_allclose(y, [0.5, 0.5], atol=1e-14)
    np.testing.assert_allclose(cert.multipliers, [0.5], atol=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_random_vs_enumeration(seed):
    rng = np.random.default_rng(seed)
    for _ in range(60):
        d = int(rng.integers(1, 7))
        m = int(rng.integers(1, 10))
        H, c, A, b = random_instance(rng, d, m)
        obj = QuadraticObjective(H, c)
        y, cert = solve_qp(obj, Polyhedron(A, b))
        ref = enumerate_qp(H, c, A, b)
        assert np.linalg.norm(y - ref) <= 1e-8
        assert obj(y) <= obj(ref) + 1e-8
        assert np.all(A @ y - b <= 1e-9 * (1 + np.abs(b)))
        assert cert.accepted()


def test_random_with_bounds_vs_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(40):
        d = int(rng.integers(1, 4))
        H, c, A, b = random_instance(rng, d, 2)
        center = np.linalg.lstsq(A, b - 1.0, rcond=None)[0]
        poly = Polyhedron(A, b + np.maximum(A @ center - b + 1.0, 0), Box(center - 2, center + 2))
        y, _ = solve_qp(QuadraticObjective(H, c), poly)
        SA, Sb = poly.stacked()
        assert np.linalg.norm(y - enumerate_qp(H, c, SA, Sb)) <= 1e-8


def test_not_strongly_convex():
    with pytest.raises(NotStronglyConvex):
        solve_qp(QuadraticObjective(np.diag([1.0, 0.0]), [0, 0]), Polyhedron.whole_space(2))


def test_infeasible():
    poly = Polyhedron([[1.0, 0.0], [-1.0, 0.0]], [-1.0, -1.0])
    with pytest.raises(Infeasible):
        solve_qp(QuadraticObjective(np.eye(2), [0, 0]), poly)


def test_inner_iteration_cap():
    rng = np.random.default_rng(0)
    H, c, A, b = random_instance(rng, 4, 8)
    with pytest.raises(MaxInnerIterations):
        solve_qp(QuadraticObjective(H, 50 * c), Polyhedron(A, b), max_inner=0)


def test_certificate_rejects_bad_point():
    A, b = np.array([[1.0, 0.0]]), np.array([0.0])
    cert = certify(np.eye(2), np.zeros(2), A, b, np.array([1.0, 0.0]), np.zeros(1))
    assert cert.max_primal_violation > 0 and not cert.accepted()


def test_uniqueness_from_different_objectives_scaling():
    rng = np.random.default_rng(5)
    H, c, A, b = random_instance(rng, 4, 6)
    y1, _ = solve_qp(QuadraticObjective(H, c), Polyhedron(A, b))
    # Reordered constraints change the active-set path but not the minimizer.
    perm = rng.permutation(len(b))
    y2, _ = solve_qp(QuadraticObjective(H, c), Polyhedron(A[perm], b[perm]))
    assert np.linalg.norm(y1 - y2) <= 1e-8


# -- project_polyhedron ----------------------------------------------------------


def test_project_polyhedron_examples():
    C = Polyhedron.from_box([0, 0], [1, 1])
    np.testing.assert_array_equal(project_polyhedron([0.3, 0.4], C), [0.3, 0.4])
    np.testing.assert_allclose(project_polyhedron([2, 5], C), [1, 1])


@pytest.mark.parametrize("x0", EXAMPLE2_STARTS + ((-3.0, -3.0, -3.0, -3.0, -3.0),))
def test_project_polyhedron_example2_vs_enumeration(x0):
    C = make_example2().feasible
    A, b = C.stacked()
    np.testing.assert_allclose(project_polyhedron(x0, C), project_enumerate(x0, A, b), atol=1e-8)


# -- prox_subproblem --------------------------------------------------------------


def test_prox_vi_equals_projection():
    rng = np.random.default_rng(2)
    C = make_example2().feasible
    for _ in range(50):
        S, K = rng.standard_normal((5, 5)), rng.standard_normal((5, 5))
        op = AffineOperator(S @ S.T + K - K.T, rng.standard_normal(5))
        f = make_vi_bifunction(op)
        base, anchor = 4 * rng.standard_normal(5), 4 * rng.standard_normal(5)
        lam = rng.uniform(0.01, 1)
        np.testing.assert_allclose(
            prox_subproblem(f, base, anchor, lam, C), project_polyhedron(anchor - lam * op(base), C), atol=1e-10
        )


def test_prox_example1_stationary():
    p = make_example1()
    np.testing.assert_allclose(prox_subproblem(p.bifunction, [0.5, 0.5], [0.5, 0.5], 0.2, p.feasible), [0.5, 0.5])


def test_prox_example2_vs_enumeration():
    p = make_example2()
    lam = 1 / (5 * p.c1)
    x = np.array(EXAMPLE2_STARTS[0])
    model = p.bifunction.prox_model(x)
    A, b = p.feasible.stacked()
    ref = enumerate_qp(lam * model.hessian + np.eye(5), lam * model.linear - x, A, b)
    np.testing.assert_allclose(prox_subproblem(p.bifunction, x, x, lam, p.feasible), ref, atol=1e-8)


def test_prox_small_lambda_tends_to_projection():
    p = make_example2()
    x = np.array(EXAMPLE2_STARTS[2])
    proj = project_polyhedron(x, p.feasible)
    lams = (1e-2, 1e-3, 1e-4)
    errs = [np.linalg.norm(prox_subproblem(p.bifunction, x, x, lam, p.feasible) - proj) for lam in lams]
    # Error is O(lam): the ratio err/lam stays bounded.
    ratios = [e / lam for e, lam in zip(errs, lams)]
    assert max(ratios) <= 2 * ratios[0]


def test_prox_model_unavailable():
    class Plain:
        pass

    with pytest.raises(ModelUnavailable):
        prox_subproblem(Plain(), [0.0], [0.0], 0.1, Polyhedron.whole_space(1))
