"""The operator f(A) = tr arctan A and its phase bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from . import symcore
from .errors import Degenerate, HypothesisViolated, InputError, OutOfRange, PoleProximity, RootFindFailure

PHASE_TOL = 1e-9


def sl_value(A) -> float:
    lam = symcore.eigenvalues(A).eigenvalues
    return float(np.sum(np.arctan(lam)))


def sl_derivative(A) -> float:
    """d/dt f(A + tI) at t = 0, i.e. sum 1/(1 + lambda_j^2)."""
    lam = symcore.eigenvalues(A).eigenvalues
    return float(np.sum(1.0 / (1.0 + lam**2)))


def special_value(n: int, k: int) -> float:
    return (n - 2 * k) * math.pi / 2


def interval_bounds(n: int, k: int) -> tuple[float, float]:
    """Endpoints of the k-th phase interval (open)."""
    return (n - 2 * k) * math.pi / 2, (n - 2 * (k - 1)) * math.pi / 2


class PhaseKind(str, Enum):
    INTERVAL = "Interval"
    SPECIAL = "Special"


@dataclass(frozen=True)
class PhaseClass:
    n: int
    theta: float
    kind: PhaseKind
    k: int

    @property
    def is_special(self) -> bool:
        return self.kind is PhaseKind.SPECIAL


def classify_phase(n: int, theta: float, tol: float = PHASE_TOL) -> PhaseClass:
    if n < 1:
        raise InputError("dimension must be >= 1")
    half = n * math.pi / 2
    if not abs(theta) < half:
        raise OutOfRange(f"|theta| = {abs(theta)!r} must be < n*pi/2 = {half!r}")
    for k in range(1, n):
        if abs(theta - special_value(n, k)) <= tol:
            return PhaseClass(n, float(theta), PhaseKind.SPECIAL, k)
    # theta lies in ((n-2k)pi/2, (n-2k+2)pi/2)
    k = int(math.floor((n - 2 * theta / math.pi) / 2)) + 1
    k = min(max(k, 1), n)
    return PhaseClass(n, float(theta), PhaseKind.INTERVAL, k)


def dual_phase(theta: float) -> float:
    """Phase of the dual subequation: A is in the dual of F_theta iff f(A) >= -theta."""
    return -theta


class Monotonicity(str, Enum):
    DECREASING = "DecreasingTo"
    INCREASING = "IncreasingTo"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class ExpansionReport:
    limit: float
    first_order_coeff: float
    monotonicity: Monotonicity
    neg_count: int

    def predictor(self, t):
        """limit - coeff / t, the two-term large-t approximation of f(tA)."""
        return self.limit - self.first_order_coeff / np.asarray(t, dtype=float)


def expansion_from_spectrum(spec: symcore.Spectrum) -> ExpansionReport:
    n = spec.n
    s_n, s_n1 = spec.sigma[n], spec.sigma[n - 1]
    if abs(s_n) <= spec.sigma_tol(n):
        raise Degenerate("sigma_n(A) vanishes; f(tA) has no clean expansion")
    if abs(s_n1) <= spec.sigma_tol(n - 1):
        mono = Monotonicity.INDETERMINATE
    elif s_n1 * s_n < 0:
        mono = Monotonicity.DECREASING
    else:
        mono = Monotonicity.INCREASING
    # with sigma_n != 0 every eigenvalue is nonzero, so count signs exactly
    q = int(np.sum(spec.eigenvalues < 0))
    return ExpansionReport(
        limit=(n - 2 * q) * math.pi / 2,
        first_order_coeff=float(s_n1 / s_n),
        monotonicity=mono,
        neg_count=q,
    )


def asymptotic_expansion(A) -> ExpansionReport:
    return expansion_from_spectrum(symcore.eigenvalues(A))


def _check_pole(n: int, value: float, tol: float) -> None:
    if n * math.pi / 2 - abs(value) <= tol:
        raise PoleProximity(f"f(A) = {value!r} is within {tol} of +-n*pi/2")


def tame_value(A, tol: float = PHASE_TOL) -> float:
    a = symcore.sym_matrix(A)
    n = a.shape[0]
    f = sl_value(a)
    _check_pole(n, f, tol)
    return math.tan(f / n)


def tame_derivative(A, tol: float = PHASE_TOL) -> float:
    """chi'(f(A)) * f'(A) with chi(x) = tan(x/n)."""
    a = symcore.sym_matrix(A)
    n = a.shape[0]
    lam = symcore.eigenvalues(a).eigenvalues
    f = float(np.sum(np.arctan(lam)))
    _check_pole(n, f, tol)
    chi_prime = (1.0 + math.tan(f / n) ** 2) / n
    return chi_prime * float(np.sum(1.0 / (1.0 + lam**2)))


def tameness_bound(n: int, delta: float) -> float:
    if not 0 < delta < math.pi:
        raise InputError("delta must lie in (0, pi)")
    return 1.0 / (n * (1.0 + math.tan(math.pi / 2 - delta) ** 2))


@dataclass(frozen=True)
class EigenvalueBoundCheck:
    n: int
    delta: float
    positive_count: int
    lambda_min: float
    lower_bound: float

    @property
    def holds(self) -> bool:
        return self.positive_count >= self.n - 1 and self.lambda_min > self.lower_bound

    @property
    def margin(self) -> float:
        return self.lambda_min - self.lower_bound


def top_interval_eigenvalue_bound(A, theta: float) -> EigenvalueBoundCheck:
    """Check the eigenvalue consequences of f(A) >= theta for theta in I_1.

    At least n-1 eigenvalues are positive, and lambda_1 > -tan(pi/2 - delta)
    with delta = theta - (n-2)pi/2. Raises ``AssertionError`` if either fails.
    """
    a = symcore.sym_matrix(A)
    n = a.shape[0]
    lo, hi = interval_bounds(n, 1)
    if not lo < theta < hi:
        raise InputError(f"theta = {theta!r} is not in the top interval ({lo}, {hi})")
    lam = symcore.eigenvalues(a).eigenvalues
    f = float(np.sum(np.arctan(lam)))
    if f < theta:
        raise HypothesisViolated(f"f(A) = {f!r} < theta = {theta!r}")
    delta = theta - lo
    check = EigenvalueBoundCheck(
        n=n,
        delta=delta,
        positive_count=int(np.sum(lam > 0)),
        lambda_min=float(lam[0]),
        lower_bound=-math.tan(math.pi / 2 - delta),
    )
    assert check.holds, f"eigenvalue bound fails: {check}"
    return check


def non_tamability_witness(n: int, s: float) -> np.ndarray:
    """diag(lambda_1, s, ..., s) with f = (n-2)pi/2 exactly."""
    if n < 2 or s < 1:
        raise InputError("need n >= 2 and s >= 1")
    target = (n - 2) * math.pi / 2 - (n - 1) * math.atan(s)
    if not -math.pi / 2 < target < math.pi / 2:
        raise RootFindFailure(f"arctan(lambda_1) = {target!r} has no solution for n={n}, s={s}")
    lo, hi = -1.0, 1.0
    while math.atan(lo) > target:
        lo *= 2.0
    while math.atan(hi) < target:
        hi *= 2.0
    lam1 = brentq(lambda x: math.atan(x) - target, lo, hi, xtol=1e-15, rtol=1e-15)
    return np.diag([lam1] + [float(s)] * (n - 1))
