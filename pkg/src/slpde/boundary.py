"""Boundary convexity of implicitly defined hypersurfaces.

A domain is {rho < 0}. At a boundary point the second fundamental form with
respect to the interior normal is D^2 rho / |grad rho| restricted to the
tangent hyperplane; its eigenvalues kappa_1 <= ... <= kappa_{n-1} decide
strict convexity for the asymptotic subequation of F_theta.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable

import numpy as np
from scipy.optimize import minimize_scalar

from . import symcore
from .asymptotic import asymptotic_interior
from .errors import DegenerateGradient, HypothesisViolated, InputError
from .phase import PHASE_TOL, classify_phase, interval_bounds

SURFACE_TOL = 1e-8
GRAD_MIN = 1e-6
FD_REL = 1e-5
MATRIX_T = (1e2, 1e3, 1e4)


def _fd_step(x: np.ndarray) -> float:
    return FD_REL * (1.0 + float(np.linalg.norm(x)))


def fd_gradient(f: Callable, x: np.ndarray) -> np.ndarray:
    h = _fd_step(x)
    g = np.empty(len(x))
    for i in range(len(x)):
        e = np.zeros(len(x))
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def fd_jacobian(F: Callable, x: np.ndarray) -> np.ndarray:
    """Centered differences of a vector field, symmetrized (it is a Hessian here)."""
    h = _fd_step(x)
    n = len(x)
    J = np.empty((n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        J[:, i] = (np.asarray(F(x + e)) - np.asarray(F(x - e))) / (2 * h)
    return 0.5 * (J + J.T)


def fd_hessian(f: Callable, x: np.ndarray) -> np.ndarray:
    h = _fd_step(x)
    n = len(x)
    H = np.empty((n, n))
    f0 = f(x)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        H[i, i] = (f(x + ei) - 2 * f0 + f(x - ei)) / h**2
        for j in range(i):
            ej = np.zeros(n)
            ej[j] = h
            H[i, j] = H[j, i] = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4 * h * h)
    return H


@dataclass(frozen=True)
class ImplicitSurface:
    """{rho = 0}, bounding {rho < 0}. Missing derivatives fall back to finite differences."""

    rho: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray] | None = None
    hess: Callable[[np.ndarray], np.ndarray] | None = None

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.grad is not None:
            return np.asarray(self.grad(x), dtype=float)
        return fd_gradient(self.rho, x)

    def hessian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.hess is not None:
            return np.asarray(self.hess(x), dtype=float)
        if self.grad is not None:
            return fd_jacobian(self.grad, x)
        return fd_hessian(self.rho, x)


def householder_tangent_basis(nu: np.ndarray) -> np.ndarray:
    """Columns: an orthonormal basis of nu-perp, from the reflection sending nu to an axis."""
    n = len(nu)
    s = 1.0 if nu[-1] >= 0 else -1.0
    v = nu.copy()
    v[-1] += s  # reflect nu to -s e_n; adding with the sign of nu_n avoids cancellation
    H = np.eye(n) - 2.0 * np.outer(v, v) / float(v @ v)
    return H[:, : n - 1]


def second_fundamental_form(S: ImplicitSurface, x, surface_tol: float = SURFACE_TOL):
    """Principal curvatures (ascending) and the interior unit normal at x."""
    x = np.asarray(x, dtype=float)
    r = float(S.rho(x))
    if abs(r) > surface_tol * max(1.0, float(np.linalg.norm(x))):
        raise HypothesisViolated(f"x is not on the surface: rho(x) = {r!r}")
    g = S.gradient(x)
    gn = float(np.linalg.norm(g))
    if not gn >= GRAD_MIN:
        raise DegenerateGradient(f"|grad rho| = {gn!r} at x")
    nu = g / gn
    T = householder_tangent_basis(nu)
    II = T.T @ S.hessian(x) @ T / gn
    kappas = symcore.jacobi_eigenvalues(0.5 * (II + II.T))
    return kappas, -nu


class ConvexityCase(str, Enum):
    CASE1 = "Case1"
    CASE2A = "Case2a"
    CASE2B = "Case2b"
    CASE3 = "Case3"


@dataclass(frozen=True)
class BoundaryPointReport:
    kappas: np.ndarray
    sigma_values: np.ndarray  # sigma_1 .. sigma_{n-1} of the curvatures
    theta: float
    strict: bool
    case: ConvexityCase
    boundary: bool = False  # sigma_{n-2}(kappa) inside its zero band: undecided, reported non-strict


def classify_convexity(kappas, n: int, theta: float, phase_tol: float = PHASE_TOL) -> BoundaryPointReport:
    """Strict convexity from the curvatures alone (the case analysis of the boundary theorem)."""
    kap = np.sort(np.asarray(kappas, dtype=float))
    if n < 2 or kap.shape != (n - 1,):
        raise InputError(f"need n-1 = {n - 1} curvatures, got {kap.shape}")
    tol = symcore.zero_rel() * max(1.0, float(np.linalg.norm(kap)))
    spec = symcore.spectrum_from_eigenvalues(kap, tol)
    pc = classify_phase(n, theta, phase_tol)
    k = pc.k
    sig = spec.sigma[1:]

    def report(strict, case, boundary=False):
        return BoundaryPointReport(kap, sig, float(theta), bool(strict), case, boundary)

    if (not pc.is_special and k == n) or (pc.is_special and k == n - 1):
        return report(True, ConvexityCase.CASE3)
    if not pc.is_special:
        return report(kap[k - 1] > tol, ConvexityCase.CASE1)
    upper = kap[k] > tol
    if kap[k - 1] >= -tol:
        return report(upper, ConvexityCase.CASE2A)
    s1, s2 = spec.sigma[n - 1], spec.sigma[n - 2]
    if abs(s2) <= spec.sigma_tol(n - 2) or abs(s1) <= spec.sigma_tol(n - 1):
        return report(False, ConvexityCase.CASE2B, boundary=True)
    return report(upper and s1 * s2 < 0, ConvexityCase.CASE2B)


def matrix_convexity_test(kappas, n: int, theta: float, t_list: Iterable[float] = MATRIX_T) -> bool:
    """II + t P_n in the asymptotic interior for every t in t_list, with II = diag(kappa)."""
    kap = np.sort(np.asarray(kappas, dtype=float))
    if kap.shape != (n - 1,):
        raise InputError(f"need n-1 = {n - 1} curvatures, got {kap.shape}")
    return all(asymptotic_interior(np.diag(np.append(kap, t)), theta).member_interior for t in t_list)


def dirichlet_required_convexity(n: int, theta: float | None = None, psi_range=None):
    """Phase (or branch index) that the boundary must be strictly convex for.

    Constant theta: |theta|, since F_theta and its dual F_{-theta} are nested
    and the boundary must be convex for the smaller one. Inhomogeneous psi
    with range inside one interval I_k: the integer min(k, n-k+1).
    """
    if (theta is None) == (psi_range is None):
        raise InputError("give exactly one of theta, psi_range")
    if theta is not None:
        classify_phase(n, theta)
        return abs(float(theta))
    lo, hi = (float(v) for v in psi_range)
    pc = classify_phase(n, lo)
    if pc.is_special:
        raise InputError("psi range touches a special value")
    a, b = interval_bounds(n, pc.k)
    if not (a < lo <= hi < b):
        raise InputError(f"psi range [{lo}, {hi}] is not inside one phase interval")
    return min(pc.k, n - pc.k + 1)


# -- example surfaces --------------------------------------------------------


def sphere(R: float = 1.0, n: int = 3) -> ImplicitSurface:
    return ImplicitSurface(
        rho=lambda x: float(x @ x) - R * R,
        grad=lambda x: 2.0 * x,
        hess=lambda x: 2.0 * np.eye(n),
    )


def cylinder(R: float = 1.0) -> ImplicitSurface:
    """x_1^2 + x_2^2 = R^2 in R^3."""
    D = np.diag([2.0, 2.0, 0.0])
    return ImplicitSurface(
        rho=lambda x: x[0] ** 2 + x[1] ** 2 - R * R,
        grad=lambda x: np.array([2 * x[0], 2 * x[1], 0.0]),
        hess=lambda x: D,
    )


def torus(a: float, b: float) -> ImplicitSurface:
    """Tube of radius a around the circle of radius b in the (x_1, x_2)-plane."""

    def rho(x):
        s = math.hypot(x[0], x[1])
        return (s - b) ** 2 + x[2] ** 2 - a * a

    def grad(x):
        s = math.hypot(x[0], x[1])
        c = 2 * (s - b) / s
        return np.array([c * x[0], c * x[1], 2 * x[2]])

    def hess(x):
        s = math.hypot(x[0], x[1])
        u = np.array([x[0], x[1]]) / s
        H = np.zeros((3, 3))
        # d/dx of 2(s - b) x/s = 2 u u^T + 2 (s - b)/s (I - u u^T)
        H[:2, :2] = 2 * np.outer(u, u) + 2 * (s - b) / s * (np.eye(2) - np.outer(u, u))
        H[2, 2] = 2.0
        return H

    return ImplicitSurface(rho, grad, hess)


def torus_point(a: float, b: float, u: float, v: float) -> np.ndarray:
    w = b + a * math.cos(v)
    return np.array([w * math.cos(u), w * math.sin(u), a * math.sin(v)])


def tube(curve: Callable[[float], np.ndarray], eps: float, period: float = 2 * math.pi, n_seed: int = 720) -> ImplicitSurface:
    """{dist(x, curve) = eps} for a closed curve; derivatives by finite differences."""
    seeds = np.linspace(0.0, period, n_seed, endpoint=False)
    pts = np.array([curve(s) for s in seeds])
    ds = period / n_seed

    def dist(x):
        i = int(np.argmin(np.sum((pts - x) ** 2, axis=1)))
        res = minimize_scalar(
            lambda s: float(np.sum((curve(s) - x) ** 2)),
            bounds=(seeds[i] - ds, seeds[i] + ds),
            method="bounded",
            options={"xatol": 1e-13},
        )
        return math.sqrt(res.fun)

    return ImplicitSurface(rho=lambda x: dist(np.asarray(x, dtype=float)) - eps)


# -- sweeps -------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    x: np.ndarray
    report: BoundaryPointReport


def sweep(S: ImplicitSurface, points, theta: float, surface_tol: float = SURFACE_TOL) -> list[SweepRow]:
    rows = []
    for x in points:
        kap, _ = second_fundamental_form(S, x, surface_tol)
        rows.append(SweepRow(np.asarray(x, dtype=float), classify_convexity(kap, len(x), theta)))
    return rows


def write_sweep_csv(rows: list[SweepRow], fh) -> None:
    """Columns x_1..x_n, kappa_1..kappa_{n-1}, theta, case, strict, boundary."""
    if not rows:
        return
    n = len(rows[0].x)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow([f"x_{i + 1}" for i in range(n)] + [f"kappa_{i + 1}" for i in range(n - 1)] + ["theta", "case", "strict", "boundary"])
    for row in rows:
        rep = row.report
        w.writerow(
            [repr(float(v)) for v in row.x]
            + [repr(float(v)) for v in rep.kappas]
            + [repr(rep.theta), rep.case.value, int(rep.strict), int(rep.boundary)]
        )
