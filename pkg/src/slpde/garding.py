"""Garding-Dirichlet polynomials and the generalized SL operator.

A Garding polynomial g of degree m on Sym(R^n) is represented by two pure
callbacks: ``evaluate`` (the polynomial itself) and ``eigen`` (its m sorted
Garding eigenvalues). The two are never trusted to agree; ``verify`` checks
g(tI + A) = g(I) prod (t + lambda_k^g(A)) at probe values of t.

Also here: the curvature fibre transform of graphs and the radial first
integrals of the curvature and potential equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import symcore
from .asymptotic import AsymptoticVerdict, oracle_from_spectra, verdict_from_spectrum
from .branches import RegionVerdict, lambda_branch_spectrum, sigma_branch_critical_spectrum
from .errors import InputError, NumericalError, OddDimension
from .phase import PHASE_TOL, ExpansionReport, expansion_from_spectrum

PROBE_T = (-2.5, -0.7, 0.3, 1.9, 4.2)


@dataclass(frozen=True)
class GardingPolynomial:
    name: str
    n: int  # ambient dimension
    degree: int  # m
    evaluate: Callable[[np.ndarray], float]
    eigen: Callable[[np.ndarray], np.ndarray]

    def g_identity(self) -> float:
        return float(self.evaluate(np.eye(self.n)))

    def _check(self, A) -> np.ndarray:
        a = symcore.sym_matrix(A)
        if a.shape[0] != self.n:
            raise InputError(f"{self.name} acts on {self.n}x{self.n} matrices, got {a.shape}")
        return a

    def eigenvalues(self, A) -> np.ndarray:
        lam = np.sort(np.asarray(self.eigen(self._check(A)), dtype=float))
        if lam.shape != (self.degree,):
            raise NumericalError(f"{self.name}: expected {self.degree} eigenvalues, got {lam.shape}")
        return lam

    def spectrum(self, A) -> symcore.Spectrum:
        a = self._check(A)
        return symcore.spectrum_from_eigenvalues(self.eigenvalues(a), symcore.zero_tol(a))

    def derivative(self, A) -> float:
        """d/dt g(tI + A) at t = 0, i.e. g(I) sigma_{m-1}^g(A)."""
        return self.g_identity() * float(self.spectrum(A).sigma[self.degree - 1])

    def verify(self, A, rtol: float = 1e-6, probes=PROBE_T) -> "GardingCheck":
        """Probe the product identity and hyperbolicity at A."""
        a = self._check(A)
        lam = self.eigenvalues(a)
        g1 = self.g_identity()
        scale = max(1.0, float(np.max(np.abs(lam))))
        I = np.eye(self.n)
        prod_err = 0.0
        for t in probes:
            lhs = float(self.evaluate(t * I + a))
            rhs = g1 * float(np.prod(t + lam))
            denom = abs(g1) * float(np.prod(abs(t) + np.abs(lam))) + 1e-300
            prod_err = max(prod_err, abs(lhs - rhs) / denom)
        # the m roots t = -lambda_k^g must make g(tI + A) vanish
        root_err = 0.0
        for lk in lam:
            v = float(self.evaluate(-lk * I + a))
            root_err = max(root_err, abs(v) / (abs(g1) * (2.0 * scale) ** self.degree))
        return GardingCheck(prod_err, root_err, prod_err <= rtol and root_err <= rtol)


@dataclass(frozen=True)
class GardingCheck:
    product_rel_err: float
    root_rel_err: float
    ok: bool


def dirichlet_spot_check(g: GardingPolynomial, A, P) -> bool:
    """lambda_1^g(A + P) >= lambda_1^g(A) for P >= 0 (up to tolerance)."""
    a = symcore.sym_matrix(A)
    p = symcore.sym_matrix(P)
    if np.min(np.linalg.eigvalsh(p)) < -symcore.zero_tol(p):
        raise InputError("P must be positive semidefinite")
    tol = symcore.zero_tol(a + p)
    return g.eigenvalues(a + p)[0] >= g.eigenvalues(a)[0] - tol


def _jacobi(a: np.ndarray) -> np.ndarray:
    return symcore.jacobi_eigenvalues(a)


def det_instance(n: int) -> GardingPolynomial:
    """g = det on Sym(R^n); Garding eigenvalues are the ordinary ones."""
    if n < 1:
        raise InputError("n must be >= 1")
    return GardingPolynomial("det", n, n, lambda a: float(np.linalg.det(a)), _jacobi)


def complex_structure(m: int) -> np.ndarray:
    """J(x, y) = (-y, x) on R^{2m} = C^m, coordinates (x_1..x_m, y_1..y_m)."""
    z = np.zeros((m, m))
    return np.block([[z, -np.eye(m)], [np.eye(m), z]])


def complex_part(A, J: np.ndarray) -> np.ndarray:
    """(A - JAJ)/2, the J-invariant part of A."""
    a = np.asarray(A, dtype=float)
    return 0.5 * (a - J @ a @ J)


def _hermitian_block(ac: np.ndarray, m: int) -> np.ndarray:
    # ac = [[P, -Q], [Q, P]] is the real form of H = P + iQ
    return ac[:m, :m] + 1j * ac[m:, :m]


def _paired_eigenvalues(ac: np.ndarray, mult: int) -> np.ndarray:
    lam = symcore.jacobi_eigenvalues(ac)
    # every Hermitian eigenvalue appears mult times in the real form
    return lam.reshape(-1, mult).mean(axis=1)


def complex_sl_instance(m: int) -> GardingPolynomial:
    """g(A) = det_C(A_C) on Sym(R^{2m}), A_C = (A - JAJ)/2."""
    if m < 1:
        raise InputError("m must be >= 1")
    J = complex_structure(m)

    def evaluate(a):
        H = _hermitian_block(complex_part(a, J), m)
        return float(np.linalg.det(H).real)

    def eigen(a):
        return _paired_eigenvalues(complex_part(a, J), 2)

    return GardingPolynomial("complex_det", 2 * m, m, evaluate, eigen)


def complex_sl_for_dimension(n: int) -> GardingPolynomial:
    if n % 2:
        raise OddDimension(f"the complex instance needs even dimension, got n={n}")
    return complex_sl_instance(n // 2)


def quaternionic_structures(m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Right multiplication by i, j, k on H^m = R^{4m}, blocks (1, i, j, k)."""
    e = np.eye(m)
    z = np.zeros((m, m))
    Ri = np.block([[z, -e, z, z], [e, z, z, z], [z, z, z, e], [z, z, -e, z]])
    Rj = np.block([[z, z, -e, z], [z, z, z, -e], [e, z, z, z], [z, e, z, z]])
    return Ri, Rj, Ri @ Rj


def quaternionic_instance(m: int) -> GardingPolynomial:
    """Stretch instance: eigenvalues of (A - IAI - JAJ - KAK)/4, each of multiplicity 4.

    ``evaluate`` is the product of those eigenvalues, so ``verify`` only
    checks internal consistency here, not an independent determinant.
    """
    if m < 1:
        raise InputError("m must be >= 1")
    I, J, K = quaternionic_structures(m)

    def part(a):
        return 0.25 * (a - I @ a @ I - J @ a @ J - K @ a @ K)

    def eigen(a):
        return _paired_eigenvalues(part(a), 4)

    def evaluate(a):
        return float(np.prod(eigen(a)))

    return GardingPolynomial("quaternionic_det", 4 * m, m, evaluate, eigen)


def gsl_value(g: GardingPolynomial, A) -> float:
    """f^g(A) = sum arctan lambda_k^g(A)."""
    return float(np.sum(np.arctan(g.eigenvalues(A))))


def g_expansion(g: GardingPolynomial, A) -> ExpansionReport:
    """limit (m - 2q) pi/2 and coefficient g'(A)/g(A) of f^g(tA)."""
    return expansion_from_spectrum(g.spectrum(A))


def g_asymptotic_interior(g: GardingPolynomial, A, theta: float, phase_tol: float = PHASE_TOL) -> AsymptoticVerdict:
    return verdict_from_spectrum(g.spectrum(A), theta, phase_tol)


def g_definition_oracle(g: GardingPolynomial, A, theta: float, eps_grid=None, t_max: float = 1e6) -> bool:
    """The sampling oracle with g-eigenvalues of A - eps I recomputed from scratch (no shift shortcut)."""
    a = g._check(A)
    I = np.eye(g.n)
    return oracle_from_spectra(lambda eps: g.spectrum(a - eps * I), g.degree, theta, max(1.0, float(np.linalg.norm(a))), eps_grid, t_max)


def g_lambda_branch(g: GardingPolynomial, A, k: int) -> RegionVerdict:
    return lambda_branch_spectrum(g.spectrum(A), k)


def g_sigma_branch(g: GardingPolynomial, A, k: int) -> RegionVerdict:
    return sigma_branch_critical_spectrum(g.spectrum(A), k)


# -- curvature of graphs ---------------------------------------------------


@dataclass(frozen=True)
class CurvatureJet:
    p: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        a = symcore.sym_matrix(self.A)
        if p.shape != (a.shape[0],) or not np.all(np.isfinite(p)):
            raise InputError("jet gradient must be a finite vector matching A")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "A", a)


def e_matrix(p) -> np.ndarray:
    """E_p = P_{p-perp} + P_p / sqrt(1 + |p|^2)."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    w = math.sqrt(1.0 + float(p @ p))
    return np.eye(len(p)) - (1.0 - 1.0 / w) * _proj(p)


def _proj(p: np.ndarray) -> np.ndarray:
    pp = float(p @ p)
    if pp == 0.0:
        return np.zeros((len(p), len(p)))
    return np.outer(p, p) / pp


def curvature_fiber_matrix(jet: CurvatureJet) -> np.ndarray:
    """II = E_p A E_p / sqrt(1 + |p|^2); its eigenvalues are the principal curvatures."""
    E = e_matrix(jet.p)
    w = math.sqrt(1.0 + float(jet.p @ jet.p))
    II = E @ jet.A @ E / w
    return 0.5 * (II + II.T)


def fiber_inverse(p, II) -> np.ndarray:
    """The A with curvature_fiber_matrix((p, A)) = II, i.e. sqrt(1+|p|^2) E_p^-1 II E_p^-1."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    w = math.sqrt(1.0 + float(p @ p))
    # E_p^-1 = P_{p-perp} + w P_p
    Einv = np.eye(len(p)) + (w - 1.0) * _proj(p)
    A = w * Einv @ np.asarray(II, dtype=float) @ Einv
    return 0.5 * (A + A.T)


def principal_curvatures(jet: CurvatureJet) -> np.ndarray:
    return symcore.jacobi_eigenvalues(curvature_fiber_matrix(jet))


def sl_curvature_value(jet: CurvatureJet) -> float:
    return float(np.sum(np.arctan(principal_curvatures(jet))))


def in_curvature_subequation(jet: CurvatureJet, theta: float) -> bool:
    """(p, A) in F_theta^curv iff the fibre matrix II lies in F_theta."""
    return sl_curvature_value(jet) >= theta


# -- radial first integrals -------------------------------------------------


def radial_first_integral(theta: float, n: int, r, y):
    """Im(e^{-i theta} (r + i y / sqrt(1 + y^2))^n); constant on radial curvature solutions."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise InputError("r must be positive")
    y = np.asarray(y, dtype=float)
    z = r + 1j * y / np.sqrt(1.0 + y * y)
    return np.imag(np.exp(-1j * theta) * z**n)


def potential_radial_first_integral(theta: float, n: int, r, y):
    """Im(e^{-i theta} (r + i y)^n); constant on radial solutions of f(D^2 u) = theta."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise InputError("r must be positive")
    return np.imag(np.exp(-1j * theta) * (r + 1j * np.asarray(y, dtype=float)) ** n)


def curvature_radial_slope(theta: float, n: int, r: float, y: float) -> float:
    """y' for a radial graph with sum arctan kappa = theta.

    Curvatures are y/(r sqrt(1+y^2)) (n-1 times) and y'/(1+y^2)^{3/2}.
    """
    w = 1.0 + y * y
    return w**1.5 * math.tan(theta - (n - 1) * math.atan(y / (r * math.sqrt(w))))


def potential_radial_slope(theta: float, n: int, r: float, y: float) -> float:
    """y' for u = psi(|x|), y = psi', with f(D^2 u) = theta: eigenvalues y/r and y'."""
    return math.tan(theta - (n - 1) * math.atan(y / r))
