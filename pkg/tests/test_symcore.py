import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from slpde import symcore
from slpde.errors import InputError

from conftest import random_sym


def test_eigenvalues_zero_matrix():
    s = symcore.eigenvalues(np.zeros((3, 3)))
    assert np.array_equal(s.eigenvalues, [0, 0, 0])
    assert np.array_equal(s.sigma, [1, 0, 0, 0])
    assert s.neg_count == 0


def test_eigenvalues_running_example():
    s = symcore.eigenvalues(np.diag([3.0, -1.0, 2.0]))
    assert np.array_equal(s.eigenvalues, [-1, 2, 3])
    assert np.allclose(s.sigma, [1, 4, 1, -6], atol=1e-14)
    assert s.neg_count == 1


def test_eigenvalues_two_by_two():
    s = symcore.eigenvalues([[2.0, 1.0], [1.0, 2.0]])
    assert np.allclose(s.eigenvalues, [1, 3], atol=1e-14)
    assert np.allclose(s.sigma, [1, 4, 3], atol=1e-13)


def test_sym_matrix_symmetrizes_and_rejects_bad_input():
    a = symcore.sym_matrix([[1.0, 2.0], [0.0, 1.0]])
    assert np.array_equal(a, [[1, 1], [1, 1]])
    with pytest.raises(InputError):
        symcore.sym_matrix([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(InputError):
        symcore.sym_matrix(np.ones((2, 3)))


def test_jacobi_matches_lapack(rng):
    for n in range(1, 13):
        A = random_sym(rng, n)
        assert np.allclose(symcore.jacobi_eigenvalues(A), np.linalg.eigvalsh(A), atol=1e-12 * max(1, np.abs(A).max()))


def test_jacobi_is_deterministic(rng):
    A = random_sym(rng, 6)
    assert np.array_equal(symcore.jacobi_eigenvalues(A), symcore.jacobi_eigenvalues(A.copy()))


@given(arrays(float, st.integers(1, 6), elements=st.floats(-50, 50)))
def test_exact_on_diagonal(d):
    assert np.array_equal(symcore.eigenvalues(np.diag(d)).eigenvalues, np.sort(d))


def test_sigma_matches_faddeev_leverrier(rng):
    worst = 0.0
    for _ in range(20000):
        n = int(rng.integers(2, 9))
        A = random_sym(rng, n)
        s = symcore.eigenvalues(A)
        fl = symcore.faddeev_leverrier(A)
        scale = symcore.elementary_symmetric(np.abs(s.eigenvalues))
        worst = max(worst, float(np.max(np.abs(s.sigma - fl) / scale)))
    assert worst <= 1e-8


def test_critical_points_examples():
    rc = symcore.roots_and_critical_points(np.diag([-1.0, 2.0]))
    assert np.allclose(rc.roots, [-2, 1])
    assert rc.critical_points == pytest.approx([-0.5], abs=1e-14)
    rc = symcore.roots_and_critical_points(np.diag([-1.0, 2.0, 3.0]))
    assert np.allclose(rc.roots, [-3, -2, 1])
    assert rc.critical_points == pytest.approx(np.sort(np.roots([3, 8, 1])), abs=1e-13)
    assert rc.critical_points == pytest.approx([-2.53518, -0.13148], abs=1e-5)
    rc = symcore.roots_and_critical_points(np.eye(3))
    assert np.array_equal(rc.critical_points, [-1, -1])


def test_critical_points_need_n_ge_2():
    with pytest.raises(InputError):
        symcore.roots_and_critical_points([[1.0]])


def test_interlacing_and_fact2(rng):
    for _ in range(2000):
        n = int(rng.integers(2, 8))
        A = random_sym(rng, n)
        if rng.random() < 0.3:  # plant repeated eigenvalues
            lam = np.round(rng.uniform(-3, 3, n))
            Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
            A = Q @ np.diag(lam) @ Q.T
        spec = symcore.eigenvalues(A)
        rc = symcore.roots_from_spectrum(spec.eigenvalues, spec.tol)
        r, c, tol = rc.roots, rc.critical_points, spec.tol
        for ell in range(n - 1):
            assert r[ell] - tol <= c[ell] <= r[ell + 1] + tol
            strict = r[ell] < c[ell] < r[ell + 1]
            pinned = abs(r[ell] - c[ell]) <= tol and abs(c[ell] - r[ell + 1]) <= tol
            assert strict or pinned


def test_fact3_sign_pattern(rng):
    checked = 0
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        A = random_sym(rng, n)
        rc = symcore.roots_and_critical_points(A)
        r, c = rc.roots, rc.critical_points
        for ell in range(n - 1):
            if not r[ell] < c[ell] < r[ell + 1] or min(c[ell] - r[ell], r[ell + 1] - c[ell]) < 1e-6:
                continue
            t1, t2 = 0.5 * (r[ell] + c[ell]), 0.5 * (c[ell] + r[ell + 1])
            assert symcore.poly_value(r, t1) * symcore.poly_derivative(r, t1) > 0
            assert symcore.poly_value(r, t2) * symcore.poly_derivative(r, t2) < 0
            checked += 1
    assert checked > 1000


def test_critical_points_are_zeros_of_derivative(rng):
    for _ in range(200):
        n = int(rng.integers(2, 7))
        spec = symcore.eigenvalues(random_sym(rng, n))
        r = -spec.eigenvalues[::-1]
        for c in spec.critical_points:
            scale = max(1.0, np.max(np.abs(r))) ** (n - 1)
            assert abs(symcore.poly_derivative(r, c)) <= 1e-10 * scale


@pytest.mark.parametrize(
    "seq, tol, expected",
    [((1, 4, 1, -6), 0.0, 1), ((1, 0, 0, 0), 0.0, 0), ((1, -1, 1, -1), 0.0, 3), ((1, 1e-12, -1), 1e-9, 1)],
)
def test_sign_variation(seq, tol, expected):
    assert symcore.sign_variation(seq, tol) == expected


def test_zero_tolerance_override(monkeypatch):
    monkeypatch.setenv("SLPDE_TOL", "1e-3")
    assert symcore.zero_tol(np.eye(2)) == pytest.approx(1e-3 * np.sqrt(2))
    monkeypatch.delenv("SLPDE_TOL")
    assert symcore.zero_rel() == symcore.ZERO_REL
