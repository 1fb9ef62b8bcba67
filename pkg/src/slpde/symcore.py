"""Small dense symmetric linear algebra.

Eigenvalues by cyclic Jacobi rotations, elementary symmetric functions of
the spectrum, and the roots / critical points of ``p(t) = det(tI + A)``.
Everything here is meant for n up to about a dozen.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateBracket, InputError, NonFinite

ZERO_REL = 1e-9
JACOBI_REL = 1e-13
MAX_SWEEPS = 60
ROOT_XTOL = 1e-15
_EPS = float(np.finfo(float).eps)


def zero_rel() -> float:
    """Relative zero band; ``SLPDE_TOL`` in the environment overrides it."""
    env = os.environ.get("SLPDE_TOL")
    if env:
        return float(env)
    return ZERO_REL


def sym_matrix(M) -> np.ndarray:
    """Validate and symmetrize ``M`` as ``(M + M^T) / 2``."""
    a = np.array(M, dtype=float)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InputError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError("matrix has non-finite entries")
    a = 0.5 * (a + a.T)
    a.flags.writeable = False
    return a


def zero_tol(A) -> float:
    """tau_zero = rel * max(1, ||A||_F)."""
    return zero_rel() * max(1.0, float(np.linalg.norm(np.asarray(A, dtype=float))))


def jacobi_eigenvalues(A, rel_tol: float = JACOBI_REL) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi, sorted ascending.

    Sweeps over all (p, q) pairs in row order until the off-diagonal
    Frobenius norm is at most ``rel_tol * ||A||_F``.
    """
    a = [list(map(float, row)) for row in np.asarray(A, dtype=float)]
    n = len(a)
    if n == 1:
        return np.array([a[0][0]])
    fro = math.sqrt(sum(x * x for row in a for x in row))
    target = rel_tol * fro
    for _ in range(MAX_SWEEPS):
        off = math.sqrt(2.0 * sum(a[p][q] ** 2 for p in range(n) for q in range(p + 1, n)))
        if off <= target or off == 0.0:
            break
        if not math.isfinite(off):
            raise NonFinite("Jacobi iteration produced non-finite values")
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                app, aqq = a[p][p], a[q][q]
                phi = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, phi) / (abs(phi) + math.sqrt(phi * phi + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                a[p][p] = app - t * apq
                a[q][q] = aqq + t * apq
                a[p][q] = a[q][p] = 0.0
                for r in range(n):
                    if r == p or r == q:
                        continue
                    arp, arq = a[r][p], a[r][q]
                    a[r][p] = a[p][r] = c * arp - s * arq
                    a[r][q] = a[q][r] = s * arp + c * arq
    else:
        raise NonFinite("Jacobi iteration did not reach the off-diagonal target")
    lam = np.array(sorted(a[i][i] for i in range(n)))
    if not np.all(np.isfinite(lam)):
        raise NonFinite("Jacobi iteration produced non-finite eigenvalues")
    return lam


def elementary_symmetric(values) -> np.ndarray:
    """(sigma_0, ..., sigma_n) of ``values`` via prod (1 + v x)."""
    e = [1.0] + [0.0] * len(values)
    for m, v in enumerate(values, start=1):
        for k in range(m, 0, -1):
            e[k] += v * e[k - 1]
    return np.array(e)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    sigma: np.ndarray
    neg_count: int
    tol: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.eigenvalues))))

    def sigma_tol(self, k: int) -> float:
        """Zero band for sigma_k.

        First-order change of sigma_k when every eigenvalue moves by ``tol``,
        i.e. tol * sigma_{k-1}(|lambda|), plus a rounding allowance.
        """
        if k < 1:
            return 0.0
        e = self.abs_sigma
        return self.tol * e[k - 1] + 16 * self.n * _EPS * e[k]

    @cached_property
    def abs_sigma(self) -> np.ndarray:
        return elementary_symmetric(np.abs(self.eigenvalues))

    @cached_property
    def critical_points(self) -> np.ndarray:
        """Critical points of det(tI + A), ascending."""
        return critical_points_from_roots(-self.eigenvalues[::-1], self.tol)


def spectrum_from_eigenvalues(lam, tol: float) -> Spectrum:
    lam = np.sort(np.asarray(lam, dtype=float))
    return Spectrum(
        eigenvalues=lam,
        sigma=elementary_symmetric(lam),
        neg_count=int(np.sum(lam < -tol)),
        tol=tol,
    )


def eigenvalues(A) -> Spectrum:
    a = sym_matrix(A)
    return spectrum_from_eigenvalues(jacobi_eigenvalues(a), zero_tol(a))


def faddeev_leverrier(A) -> np.ndarray:
    """sigma_k from traces of powers (Newton identities), as an independent route."""
    a = np.asarray(A, dtype=float)
    n = a.shape[0]
    coeffs = [1.0]
    M = np.zeros_like(a)
    AM = np.zeros_like(a)
    for k in range(1, n + 1):
        M = AM + coeffs[-1] * np.eye(n)
        AM = a @ M
        coeffs.append(-np.trace(AM) / k)
    # det(tI - A) = sum c_k t^{n-k}; sigma_k(A) = (-1)^k c_k
    return np.array([(-1) ** k * c for k, c in enumerate(coeffs)])


@dataclass(frozen=True)
class RootsAndCriticalPoints:
    roots: np.ndarray
    critical_points: np.ndarray


def poly_value(roots, t: float) -> float:
    return float(np.prod(t - np.asarray(roots)))


def poly_derivative(roots, t: float) -> float:
    r = np.asarray(roots)
    total = 0.0
    for i in range(len(r)):
        total += float(np.prod(t - np.delete(r, i)))
    return total


def _log_derivative(roots, t: float) -> float:
    return sum(1.0 / (t - r) for r in roots)


def critical_points_from_roots(roots, tol: float) -> np.ndarray:
    """Zeros of p' between consecutive roots of p = prod (t - r_j).

    Each zero is bracketed by a root gap; inside an open gap p'/p is strictly
    decreasing from +inf to -inf, so a bracketing root-finder is safe. Gaps no wider
    than ``tol`` are treated as a repeated root and return that root.
    """
    r = sorted(float(x) for x in roots)
    out = []
    for ell in range(len(r) - 1):
        lo, hi = r[ell], r[ell + 1]
        if hi - lo <= tol:
            out.append(lo)
            continue
        width = hi - lo
        a = lo + 1e-3 * width
        b = hi - 1e-3 * width
        # walk the probes toward the roots until the signs are right
        for _ in range(60):
            if _log_derivative(r, a) > 0:
                break
            a = lo + 0.5 * (a - lo)
        for _ in range(60):
            if _log_derivative(r, b) < 0:
                break
            b = hi - 0.5 * (hi - b)
        fa, fb = _log_derivative(r, a), _log_derivative(r, b)
        if not (fa > 0 > fb):
            raise DegenerateBracket(
                f"p' has inconsistent signs on [{lo!r}, {hi!r}]; roots nearly coincide"
            )
        # Brent's method keeps the bracket, so this is bisection-safe
        out.append(brentq(lambda t: _log_derivative(r, t), a, b, xtol=ROOT_XTOL * max(1.0, abs(a), abs(b)), rtol=4 * _EPS))
    return np.array(out)


def roots_and_critical_points(A, tol: float | None = None) -> RootsAndCriticalPoints:
    spec = eigenvalues(A)
    if spec.n < 2:
        raise InputError("critical points need n >= 2")
    return roots_from_spectrum(spec.eigenvalues, spec.tol if tol is None else tol)


def roots_from_spectrum(lam, tol: float) -> RootsAndCriticalPoints:
    roots = -np.asarray(lam, dtype=float)[::-1]
    return RootsAndCriticalPoints(roots=roots, critical_points=critical_points_from_roots(roots, tol))


def sign_variation(sequence, zero_tol: float = 0.0) -> int:
    """Number of strict sign changes after dropping entries with |x| <= zero_tol."""
    kept = [x for x in sequence if abs(x) > zero_tol]
    return sum(1 for x, y in zip(kept, kept[1:]) if (x > 0) != (y > 0))
