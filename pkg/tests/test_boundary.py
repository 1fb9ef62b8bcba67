import io
import math

import numpy as np
import pytest

from slpde import boundary
from slpde.boundary import ConvexityCase, ImplicitSurface
from slpde.errors import DegenerateGradient, HypothesisViolated, InputError


def test_second_fundamental_form_examples():
    k, nu = boundary.second_fundamental_form(boundary.sphere(), [1.0, 0.0, 0.0])
    assert np.allclose(k, [1, 1], atol=1e-14) and np.allclose(nu, [-1, 0, 0])
    k, _ = boundary.second_fundamental_form(boundary.cylinder(), [0.6, 0.8, 5.0])
    assert np.allclose(k, [0, 1], atol=1e-14)
    k, _ = boundary.second_fundamental_form(boundary.torus(1.0, 3.0), [2.0, 0.0, 0.0])
    assert np.allclose(k, [-0.5, 1.0], atol=1e-14)


def test_finite_difference_fallbacks():
    S = ImplicitSurface(rho=lambda x: float(x @ x) - 1.0)
    k, _ = boundary.second_fundamental_form(S, np.array([0.0, 0.6, 0.8]))
    assert np.allclose(k, [1, 1], atol=1e-6)
    S = ImplicitSurface(rho=lambda x: float(x @ x) - 1.0, grad=lambda x: 2 * x)
    k, _ = boundary.second_fundamental_form(S, np.array([0.0, 0.6, 0.8]))
    assert np.allclose(k, [1, 1], atol=1e-8)


def test_surface_errors():
    with pytest.raises(HypothesisViolated):
        boundary.second_fundamental_form(boundary.sphere(), [0.5, 0.0, 0.0])
    flat = ImplicitSurface(rho=lambda x: float(x @ x) ** 2, grad=lambda x: 4 * float(x @ x) * x)
    with pytest.raises(DegenerateGradient):
        boundary.second_fundamental_form(flat, [0.0, 0.0, 0.0])


def test_householder_basis(rng):
    for _ in range(200):
        n = int(rng.integers(2, 7))
        nu = rng.normal(size=n)
        nu /= np.linalg.norm(nu)
        T = boundary.householder_tangent_basis(nu)
        assert np.allclose(T.T @ T, np.eye(n - 1), atol=1e-14)
        assert np.allclose(T.T @ nu, 0.0, atol=1e-14)


def test_defining_function_invariance(rng):
    def factor(x):
        return 1.5 + math.sin(x[0]) * 0.5 + 0.2 * x[1] ** 2

    base = boundary.torus(1.0, 3.0)
    scaled = ImplicitSurface(rho=lambda x: factor(x) * base.rho(x))
    for _ in range(30):
        x = boundary.torus_point(1.0, 3.0, *rng.uniform(0, 2 * math.pi, 2))
        k0, _ = boundary.second_fundamental_form(base, x)
        k1, _ = boundary.second_fundamental_form(scaled, x)
        assert np.max(np.abs(k1 - k0)) <= 1e-6 * max(1.0, np.abs(k0).max())


def test_tube_has_large_curvature():
    eps = 0.05
    curve = lambda s: np.array([math.cos(s), math.sin(s), 0.3 * math.sin(2 * s)])  # noqa: E731
    S = boundary.tube(curve, eps)
    for s in np.linspace(0, 2 * math.pi, 9)[:-1]:
        c = curve(s)
        d = np.array([-math.sin(s), math.cos(s), 0.6 * math.cos(2 * s)])
        normal = np.cross(d, [0.0, 0.0, 1.0])
        normal /= np.linalg.norm(normal)
        x = c + eps * normal
        k, _ = boundary.second_fundamental_form(S, x, surface_tol=1e-7)
        assert np.sum(k > 1 / (2 * eps)) >= 1


def test_classify_examples():
    for theta in (-2.0, 0.0, 1.0, math.pi / 2, 3.0):
        assert boundary.classify_convexity([1.0, 1.0], 3, theta).strict
    rep = boundary.classify_convexity([-1.0, 2.0], 3, math.pi / 2)
    assert rep.strict and rep.case is ConvexityCase.CASE2B
    assert boundary.classify_convexity([-0.5, 1.0], 3, math.pi / 2).strict
    # theta_{n-1} and the bottom interval carry no condition
    assert boundary.classify_convexity([-3.0, -2.0], 3, -math.pi / 2).case is ConvexityCase.CASE3
    assert boundary.classify_convexity([-3.0, -2.0], 3, -2.0).case is ConvexityCase.CASE3
    assert boundary.classify_convexity([0.0, 1.0], 3, 0.5).case is ConvexityCase.CASE1
    assert boundary.classify_convexity([0.0, 1.0], 3, math.pi / 2).case is ConvexityCase.CASE2A
    with pytest.raises(InputError):
        boundary.classify_convexity([1.0], 3, 0.0)


def test_sigma_n2_zero_is_flagged():
    # n = 4, kappas with sigma_2 = 0 but sigma_3 != 0 at theta_1
    rep = boundary.classify_convexity([-1.0, 2.0, 2.0], 4, math.pi)
    assert rep.case is ConvexityCase.CASE2B and rep.boundary and not rep.strict


def test_matrix_test_examples():
    assert boundary.matrix_convexity_test([-1.0, 2.0], 3, math.pi / 2)
    assert not boundary.matrix_convexity_test([-1.0, -2.0], 3, math.pi / 2)
    assert boundary.matrix_convexity_test([1.0], 2, 1.0)
    with pytest.raises(InputError):
        boundary.matrix_convexity_test([1.0], 3, 1.0)


def test_dirichlet_required_convexity():
    assert boundary.dirichlet_required_convexity(3, theta=-math.pi / 2) == pytest.approx(math.pi / 2)
    assert boundary.dirichlet_required_convexity(3, theta=0.0) == 0.0
    assert boundary.dirichlet_required_convexity(4, psi_range=(0.5, 2.5)) == 2
    assert boundary.dirichlet_required_convexity(4, psi_range=(3.5, 4.0)) == 1
    with pytest.raises(InputError):
        boundary.dirichlet_required_convexity(4, psi_range=(-0.5, 2.0))
    with pytest.raises(InputError):
        boundary.dirichlet_required_convexity(4)


def test_monotone_in_theta(rng):
    for _ in range(2000):
        n = int(rng.integers(3, 6))
        kap = np.sort(rng.uniform(-3, 3, n - 1))
        grid = np.sort(np.concatenate([np.linspace(-n * math.pi / 2 + 1e-3, n * math.pi / 2 - 1e-3, 41), [(n - 2 * k) * math.pi / 2 for k in range(1, n)]]))
        strict = [boundary.classify_convexity(kap, n, t).strict for t in grid]
        assert all(a or not b for a, b in zip(strict, strict[1:]))


def test_sweep_csv():
    S = boundary.torus(1.0, 3.0)
    pts = [boundary.torus_point(1.0, 3.0, u, v) for u in (0.0, 1.0) for v in (0.0, math.pi)]
    rows = boundary.sweep(S, pts, math.pi / 2)
    buf = io.StringIO()
    boundary.write_sweep_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x_1,x_2,x_3,kappa_1,kappa_2,theta,case,strict,boundary"
    assert len(lines) == 5
    assert all(line.split(",")[7] == "1" for line in lines[1:])
    assert float(lines[2].split(",")[3]) == pytest.approx(-0.5)
