import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slpde import phase
from slpde.errors import HypothesisViolated, InputError, OutOfRange, PoleProximity, RootFindFailure

from conftest import random_psd, random_sym


def test_sl_value_examples():
    assert phase.sl_value(np.zeros((4, 4))) == 0.0
    assert phase.sl_value(np.eye(3)) == pytest.approx(3 * math.pi / 4, abs=1e-14)
    assert phase.sl_value(np.diag([-1.0, 2.0, 3.0])) == pytest.approx(math.pi / 2, abs=1e-12)


@pytest.mark.parametrize(
    "n, theta, kind, k",
    [(3, math.pi / 2, "Special", 1), (3, 0.0, "Interval", 2), (2, 0.0, "Special", 1), (3, 2.0, "Interval", 1), (3, -4.0, "Interval", 3)],
)
def test_classify_phase(n, theta, kind, k):
    pc = phase.classify_phase(n, theta)
    assert (pc.kind.value, pc.k) == (kind, k)


def test_classify_phase_band_and_range():
    assert phase.classify_phase(3, math.pi / 2 + 5e-10).is_special
    assert not phase.classify_phase(3, math.pi / 2 + 5e-9).is_special
    with pytest.raises(OutOfRange):
        phase.classify_phase(2, math.pi)


def test_phase_intervals_partition():
    for n in range(1, 7):
        for theta in np.linspace(-n * math.pi / 2 + 1e-6, n * math.pi / 2 - 1e-6, 2001):
            pc = phase.classify_phase(n, float(theta))
            if pc.is_special:
                assert 1 <= pc.k <= n - 1
                assert abs(theta - phase.special_value(n, pc.k)) <= phase.PHASE_TOL
            else:
                lo, hi = phase.interval_bounds(n, pc.k)
                assert lo < theta < hi


@pytest.mark.parametrize("theta, dual", [(math.pi / 2, -math.pi / 2), (0.0, 0.0), (-1.2, 1.2)])
def test_dual_phase(theta, dual):
    assert phase.dual_phase(theta) == dual


def test_expansion_examples():
    r = phase.asymptotic_expansion(np.diag([-1.0, 2.0, 3.0]))
    assert r.limit == pytest.approx(math.pi / 2)
    assert r.first_order_coeff == pytest.approx(-1 / 6, abs=1e-14)
    assert r.monotonicity is phase.Monotonicity.DECREASING
    r = phase.asymptotic_expansion(np.eye(2))
    assert r.limit == pytest.approx(math.pi)
    assert r.first_order_coeff == pytest.approx(2.0)
    assert r.monotonicity is phase.Monotonicity.INCREASING


def test_expansion_indeterminate_and_degenerate():
    assert phase.asymptotic_expansion(np.diag([-1.0, 1.0])).monotonicity is phase.Monotonicity.INDETERMINATE
    with pytest.raises(phase.Degenerate):
        phase.asymptotic_expansion(np.diag([0.0, 1.0]))


def test_tame_examples():
    assert phase.tame_value(np.zeros((3, 3))) == 0.0
    assert phase.tame_derivative(np.zeros((3, 3))) == pytest.approx(1.0)
    assert phase.tame_value(np.eye(2)) == pytest.approx(1.0)
    assert phase.tame_derivative(np.eye(2)) == pytest.approx(1.0)
    with pytest.raises(PoleProximity):
        phase.tame_value(np.diag([1e17, 1e17]))


@pytest.mark.parametrize("n, delta, expected", [(3, 0.1, 3.3223e-3), (1, math.pi / 2, 1.0), (2, math.pi / 4, 0.25)])
def test_tameness_bound(n, delta, expected):
    assert phase.tameness_bound(n, delta) == pytest.approx(expected, rel=1e-4)


def test_top_interval_eigenvalue_bound():
    chk = phase.top_interval_eigenvalue_bound(np.eye(3), math.pi / 2 + 0.1)
    assert chk.holds and chk.lambda_min == 1.0
    assert chk.lower_bound == pytest.approx(-9.9666, abs=1e-4)
    with pytest.raises(HypothesisViolated):
        phase.top_interval_eigenvalue_bound(-np.eye(3), math.pi / 2 + 0.1)
    with pytest.raises(InputError):
        phase.top_interval_eigenvalue_bound(np.eye(3), 0.0)


def test_eigenvalue_bound_on_members(rng):
    for n in (2, 3, 4):
        for delta in (0.05, 0.3, 1.0):
            theta = (n - 2) * math.pi / 2 + delta
            phis = rng.uniform(-math.pi / 2, math.pi / 2, (20000, n))
            phis = phis[phis.sum(axis=1) >= theta][:200]
            for ph in phis:
                phase.top_interval_eigenvalue_bound(np.diag(np.tan(ph)), theta)


def test_non_tamability_witness_examples():
    assert np.allclose(phase.non_tamability_witness(2, 1.0), np.diag([-1.0, 1.0]))
    assert phase.non_tamability_witness(2, 10.0)[0, 0] == pytest.approx(-10.0, rel=1e-14)
    A = phase.non_tamability_witness(3, 10.0)
    assert phase.sl_value(A) == pytest.approx(math.pi / 2, abs=1e-10)
    # f' at s = 10 is 0.0590 (computed), the s -> infinity decay is checked below
    assert phase.sl_derivative(A) == pytest.approx(0.0590138, abs=1e-7)
    with pytest.raises(RootFindFailure):
        phase.non_tamability_witness(5, 1.0)


def test_non_tamability_decreasing():
    for n in (2, 3, 4):
        d = [phase.sl_derivative(phase.non_tamability_witness(n, s)) for s in (1.0, 10.0, 1e2, 1e3)]
        assert all(a > b for a, b in zip(d, d[1:]))
        assert d[-1] < 1e-3


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_oddness(n, seed):
    A = random_sym(np.random.default_rng(seed), n)
    assert phase.sl_value(-A) == pytest.approx(-phase.sl_value(A), abs=1e-12)


def test_positivity(rng):
    for _ in range(2000):
        n = int(rng.integers(1, 7))
        A = random_sym(rng, n)
        P = random_psd(rng, n, scale=rng.choice([1e-3, 1.0, 10.0]))
        assert phase.sl_value(A + P) >= phase.sl_value(A) - 1e-12


def test_cor43_monotone_in_t(rng):
    ts = np.logspace(0, 6, 400)
    seen = {phase.Monotonicity.DECREASING: 0, phase.Monotonicity.INCREASING: 0}
    for _ in range(300):
        n = int(rng.integers(2, 6))
        lam = rng.uniform(-5, 5, n)
        lam = lam[np.abs(lam) > 1e-2] if np.all(np.abs(lam) > 1e-2) else None
        if lam is None:
            continue
        r = phase.asymptotic_expansion(np.diag(lam))
        if r.monotonicity is phase.Monotonicity.INDETERMINATE or abs(r.first_order_coeff) < 1e-3:
            continue
        vals = np.arctan(np.outer(ts, lam)).sum(axis=1)
        if r.monotonicity is phase.Monotonicity.DECREASING:
            # eventually strictly decreasing to the limit from above
            assert np.all(vals[-50:] > r.limit)
            assert np.all(np.diff(vals[-50:]) < 0)
        else:
            assert np.all(vals[-50:] < r.limit)
            assert np.all(np.diff(vals[-50:]) > 0)
        seen[r.monotonicity] += 1
    assert min(seen.values()) > 20
