import numpy as np
import pytest

from hybrid_ep.problems import (
    EXAMPLE2_P,
    EXAMPLE2_Q,
    EXAMPLE2_q,
    AffineOperator,
    ModelAssumptionViolated,
    example1_operator,
    make_example1,
    make_example2,
    make_nash_cournot,
    make_vi_bifunction,
    spectral_norm,
)

RNG_SEED = 1234


def sample_box(rng, lo, hi, n, d):
    return rng.uniform(lo, hi, size=(n, d))


def instances():
    return [(make_example1(), 0.0, 1.0), (make_example2(), -5.0, 5.0)]


# -- spectral norm ---------------------------------------------------------------


@pytest.mark.parametrize(
    "M, expected",
    [(np.eye(5), 1.0), (np.diag([2.0, -5.0]), 5.0), (EXAMPLE2_P - EXAMPLE2_Q, 3.0)],
)
def test_spectral_norm_examples(M, expected):
    assert spectral_norm(M) == pytest.approx(expected, rel=1e-10)


def test_spectral_norm_matches_svd():
    rng = np.random.default_rng(RNG_SEED)
    for _ in range(50):
        M = rng.standard_normal((int(rng.integers(1, 8)), int(rng.integers(1, 8))))
        assert spectral_norm(M) == pytest.approx(np.linalg.norm(M, 2), rel=1e-10)


def test_example2_block_eigenvalues():
    # P - Q splits into 2x2 blocks plus a scalar; the largest |eigenvalue| is 3.
    D = EXAMPLE2_P - EXAMPLE2_Q
    block1 = np.linalg.eigvalsh(D[:2, :2])
    assert block1.max() == pytest.approx((3.5 + np.sqrt(4.25)) / 2)
    assert np.abs(np.linalg.eigvalsh(D[2:4, 2:4])).max() == pytest.approx(3.0)
    assert abs(D[4, 4]) == pytest.approx(1.0)


# -- Example 1 ---------------------------------------------------------------


def test_example1_values():
    p = make_example1()
    f = p.bifunction
    assert f((0.5, 0.5), (1.0, 0.0)) == pytest.approx(0.0)
    assert f((1.0, 1.0), (0.0, 0.0)) == pytest.approx(-2.0)
    assert f.eval((1.0, 1.0), (0.0, 0.0)) == pytest.approx(-2.0)
    assert (p.c1, p.c2) == (1.0, 1.0)
    assert p.feasible.is_box and p.dim == 2


def test_example1_formula_matches_vi_bifunction():
    f = make_example1().bifunction
    rng = np.random.default_rng(RNG_SEED)
    for x, y in zip(sample_box(rng, -2, 2, 200, 2), sample_box(rng, -2, 2, 200, 2)):
        direct = (x[0] + x[1] - 1) * (y[0] - x[0]) + (x[0] + x[1] - 1) * (y[1] - x[1])
        assert f(x, y) == pytest.approx(direct, abs=1e-12)


def test_segment_projection():
    seg = make_example1().reference_solution
    for x0, ref in [((2, 5), (0, 1)), ((5, 5), (0.5, 0.5)), ((4, 4.5), (0.25, 0.75)), ((-0.75, 0), (0.125, 0.875))]:
        np.testing.assert_allclose(seg.project(x0), ref, atol=1e-15)
    pts = seg.sample(np.random.default_rng(0), 10)
    np.testing.assert_allclose(pts.sum(axis=1), 1.0)


def test_segment_points_solve_example1():
    p = make_example1()
    rng = np.random.default_rng(RNG_SEED)
    for x in p.reference_solution.sample(rng, 20):
        ys = sample_box(rng, 0, 1, 50, 2)
        assert all(p.bifunction(x, y) >= -1e-12 for y in ys)


# -- Nash-Cournot -------------------------------------------------------------


def test_example2_constants():
    p = make_example2()
    assert p.meta["norm"] == pytest.approx(3.0, rel=1e-10)
    assert p.c1 == pytest.approx(1.5) and p.c2 == pytest.approx(1.5)
    assert 1 / (5 * p.c1) == pytest.approx(2 / 15)
    fro = make_example2("frobenius")
    assert fro.c1 == pytest.approx(np.linalg.norm(EXAMPLE2_P - EXAMPLE2_Q, "fro") / 2)


def test_example2_feasible_set():
    C = make_example2().feasible
    assert C.contains(np.zeros(5))
    assert not C.contains([-1.0, -1.0, 0.0, 0.0, 0.0])
    assert not C.contains([6.0, 0.0, 0.0, 0.0, 0.0])


def test_example2_prox_model():
    p = make_example2()
    rng = np.random.default_rng(RNG_SEED)
    x = rng.uniform(-5, 5, 5)
    model = p.bifunction.prox_model(x)
    np.testing.assert_allclose(model.hessian, 2 * EXAMPLE2_Q)
    np.testing.assert_allclose(model.linear, EXAMPLE2_P @ x + EXAMPLE2_q - EXAMPLE2_Q @ x)


def test_nash_cournot_assumption_checks():
    with pytest.raises(ModelAssumptionViolated):
        make_nash_cournot(EXAMPLE2_P, -EXAMPLE2_Q, EXAMPLE2_q)
    with pytest.raises(ModelAssumptionViolated):
        make_nash_cournot(np.zeros((5, 5)), EXAMPLE2_Q, EXAMPLE2_q)  # Q - P is PSD, not NSD
    Q = EXAMPLE2_Q.copy()
    Q[0, 1] += 0.1
    with pytest.raises(ModelAssumptionViolated):
        make_nash_cournot(EXAMPLE2_P, Q, EXAMPLE2_q)
    with pytest.raises(ValueError):
        make_nash_cournot(EXAMPLE2_P, EXAMPLE2_Q, EXAMPLE2_q, norm_kind="max")


# -- VI bifunctions ---------------------------------------------------------------


def test_identity_operator_constants():
    f = make_vi_bifunction(AffineOperator(np.eye(3), np.zeros(3)))
    assert f.c1 == f.c2 == 0.5
    x, y = np.array([1.0, 2.0, 3.0]), np.array([0.0, 1.0, -1.0])
    assert f(x, y) == pytest.approx(x @ (y - x))


def test_vi_prox_model_is_linear():
    op = example1_operator()
    f = make_vi_bifunction(op)
    m = f.prox_model([0.3, 0.9])
    np.testing.assert_array_equal(m.hessian, np.zeros((2, 2)))
    np.testing.assert_allclose(m.linear, op([0.3, 0.9]))


def test_vi_bifunction_requires_constant():
    with pytest.raises(ValueError):
        make_vi_bifunction(lambda x: x)
    f = make_vi_bifunction(lambda x: 2 * x, lipschitz=2.0)
    assert f.c1 == 1.0


def test_affine_operator_lipschitz_guard():
    with pytest.raises(ModelAssumptionViolated):
        AffineOperator(np.diag([3.0, 1.0]), np.zeros(2), lipschitz=2.0)
    assert AffineOperator(np.diag([3.0, 1.0]), np.zeros(2)).lipschitz == pytest.approx(3.0)


# -- sampled properties on the shipped instances ---------------------------------


@pytest.mark.parametrize("idx", [0, 1])
def test_zero_diagonal_and_model_consistency(idx):
    p, lo, hi = instances()[idx]
    f = p.bifunction
    rng = np.random.default_rng(RNG_SEED)
    for x, y in zip(sample_box(rng, lo, hi, 200, p.dim), sample_box(rng, lo, hi, 200, p.dim)):
        assert abs(f(x, x)) <= 1e-10
        assert f.prox_model(x)(y) == pytest.approx(f(x, y), abs=1e-10 * (1 + abs(f(x, y))))


@pytest.mark.parametrize("idx", [0, 1])
def test_pseudomonotone_and_monotone(idx):
    p, lo, hi = instances()[idx]
    f = p.bifunction
    rng = np.random.default_rng(RNG_SEED)
    X, Y = sample_box(rng, lo, hi, 10_000, p.dim), sample_box(rng, lo, hi, 10_000, p.dim)
    for x, y in zip(X, Y):
        fxy, fyx = f(x, y), f(y, x)
        if fxy >= 0:
            assert fyx <= 1e-10
        assert fxy + fyx <= 1e-10


@pytest.mark.parametrize("idx", [0, 1])
def test_lipschitz_type_inequality(idx):
    p, lo, hi = instances()[idx]
    f = p.bifunction
    rng = np.random.default_rng(RNG_SEED)
    X, Y, Z = (sample_box(rng, lo, hi, 10_000, p.dim) for _ in range(3))
    for x, y, z in zip(X, Y, Z):
        rhs = f(x, z) - p.c1 * np.sum((x - y) ** 2) - p.c2 * np.sum((y - z) ** 2)
        assert f(x, y) + f(y, z) >= rhs - 1e-8


@pytest.mark.parametrize("idx", [0, 1])
def test_diag_gradient_finite_difference(idx):
    p, lo, hi = instances()[idx]
    f = p.bifunction
    rng = np.random.default_rng(RNG_SEED)
    h = 1e-5
    for x in sample_box(rng, lo, hi, 50, p.dim):
        fd = np.array([(f(x, x + h * e) - f(x, x - h * e)) / (2 * h) for e in np.eye(p.dim)])
        assert np.linalg.norm(f.diag_gradient(x) - fd) <= 1e-5
        np.testing.assert_array_equal(f.subgrad2(x), f.diag_gradient(x))


@pytest.mark.parametrize("idx", [0, 1])
def test_diag_gradient_lipschitz(idx):
    p, lo, hi = instances()[idx]
    f = p.bifunction
    L = f.diag_lipschitz
    rng = np.random.default_rng(RNG_SEED)
    for x, y in zip(sample_box(rng, lo, hi, 500, p.dim), sample_box(rng, lo, hi, 500, p.dim)):
        assert np.linalg.norm(f.diag_gradient(x) - f.diag_gradient(y)) <= L * np.linalg.norm(x - y) * (1 + 1e-12)
