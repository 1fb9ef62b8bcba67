"""Asymptotic interior and asymptotic subequation of F_theta = {f(A) >= theta}.

``asymptotic_interior`` is the closed-form eigenvalue test. ``definition_oracle``
decides the same question directly from the definition (t(A - eps I) in
F_theta for all large t), sampling f along rays and certifying the tail with
the two-term expansion of f(tA).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import symcore
from .branches import sigma_branch_critical_spectrum
from .errors import Degenerate, Inconclusive
from .phase import PHASE_TOL, Monotonicity, classify_phase, expansion_from_spectrum, special_value


class CaseKind(str, Enum):
    INTERVAL = "IntervalCase"
    SPECIAL_A = "SpecialCaseA"
    SPECIAL_B = "SpecialCaseB"


@dataclass(frozen=True)
class AsymptoticVerdict:
    member_interior: bool
    member_closure: bool
    case: CaseKind
    k: int
    witnesses: dict = field(default_factory=dict)

    @property
    def branch_case(self) -> str:
        return f"{self.case.value}({self.k})"


def verdict_from_spectrum(spec: symcore.Spectrum, theta: float, phase_tol: float = PHASE_TOL) -> AsymptoticVerdict:
    """Case analysis shared by the real operator and its Garding generalizations.

    ``spec`` holds the (generalized) eigenvalues and their sigma's; n is the
    degree of the underlying polynomial.
    """
    n = spec.n
    pc = classify_phase(n, theta, phase_tol)
    lam, tol, k = spec.eigenvalues, spec.tol, pc.k
    if not pc.is_special:
        lam_k = float(lam[k - 1])
        return AsymptoticVerdict(
            member_interior=lam_k > tol,
            member_closure=lam_k >= -tol,
            case=CaseKind.INTERVAL,
            k=k,
            witnesses={"lambda_k": lam_k},
        )
    lam_k, lam_k1 = float(lam[k - 1]), float(lam[k])
    s_n, s_n1 = spec.sigma[n], spec.sigma[n - 1]
    product = float(s_n1 * s_n)
    opposite = abs(s_n) > spec.sigma_tol(n) and abs(s_n1) > spec.sigma_tol(n - 1) and product < 0
    closure = sigma_branch_critical_spectrum(spec, k)
    witnesses = {
        "lambda_k": lam_k,
        "lambda_k1": lam_k1,
        "sigma_product": product,
        "critical_point": -closure.margin,
    }
    if lam_k >= -tol:
        case, interior = CaseKind.SPECIAL_A, lam_k1 > tol
    else:
        case, interior = CaseKind.SPECIAL_B, lam_k1 > tol and opposite
    return AsymptoticVerdict(
        member_interior=interior,
        member_closure=interior or closure.member,
        case=case,
        k=k,
        witnesses=witnesses,
    )


def asymptotic_interior(A, theta: float) -> AsymptoticVerdict:
    return verdict_from_spectrum(symcore.eigenvalues(A), theta)


def asymptotic_closure(A, theta: float) -> bool:
    """Membership in the asymptotic subequation (Lambda_k or Lambda_k^{sigma_{n-1}})."""
    return asymptotic_interior(A, theta).member_closure


DEFAULT_EPS = (1e-2, 1e-3, 1e-4)


def _snap_theta(n: int, theta: float) -> float:
    pc = classify_phase(n, theta)
    return special_value(n, pc.k) if pc.is_special else float(theta)


def definition_oracle(
    A,
    theta: float,
    eps_grid=None,
    t_max: float = 1e6,
    n_t: int = 200,
    tail_decades: float = 1.0,
) -> bool:
    """Decide A in Int F->_theta from the definition.

    For each eps (largest first, scaled by max(1, ||A||_F) when ``eps_grid``
    is None), A_eps = A - eps I must satisfy f(t A_eps) >= theta at every
    sampled t in the last ``tail_decades`` of a log grid on [1, t_max], and the
    expansion of f(t A_eps) must certify the limit: either it exceeds theta,
    or it equals theta and is approached from above.
    """
    a = symcore.sym_matrix(A)
    n = a.shape[0]
    base = symcore.eigenvalues(a)
    # spectrum of A - eps I is the shifted spectrum of A
    return oracle_from_spectra(
        lambda eps: symcore.spectrum_from_eigenvalues(base.eigenvalues - eps, base.tol),
        n,
        theta,
        max(1.0, float(np.linalg.norm(a))),
        eps_grid,
        t_max,
        n_t,
        tail_decades,
    )


def oracle_from_spectra(shifted, n, theta, scale, eps_grid=None, t_max=1e6, n_t=200, tail_decades=1.0) -> bool:
    """Sampling-plus-certificate core of the oracle; ``shifted(eps)`` is the spectrum of A - eps I."""
    theta = _snap_theta(n, theta)
    if eps_grid is None:
        eps_grid = [e * scale for e in DEFAULT_EPS]
    ts = np.logspace(0.0, math.log10(t_max), n_t)
    tail = ts >= t_max / 10.0**tail_decades
    tried = False
    for eps in sorted(eps_grid, reverse=True):
        spec = shifted(eps)
        try:
            report = expansion_from_spectrum(spec)
        except Degenerate:
            continue
        tried = True
        values = np.arctan(np.outer(ts[tail], spec.eigenvalues)).sum(axis=1)
        if not np.all(values >= theta):
            continue
        if report.limit > theta + PHASE_TOL:
            return True
        if abs(report.limit - theta) <= PHASE_TOL and report.monotonicity is Monotonicity.DECREASING:
            return True
    if not tried:
        raise Inconclusive("A - eps I is degenerate for every eps in the grid")
    return False
