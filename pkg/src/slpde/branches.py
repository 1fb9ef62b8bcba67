"""Membership in the Monge-Ampere branches and the sigma_{n-1} branches.

Three independent routes are provided: sorted eigenvalues, critical points
of det(tI + A), and sign variation of the coefficient sequence. The last
one only sees closed sets, so its verdicts are ``MEMBER`` / ``EXTERIOR``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import symcore
from .errors import InputError


class Region(str, Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    EXTERIOR = "Exterior"
    MEMBER = "Member"  # interior or boundary, undistinguished


class Route(str, Enum):
    EIGENVALUE = "Eigenvalue"
    CRITICAL_POINT = "CriticalPoint"
    SIGN_VARIATION = "SignVariation"


@dataclass(frozen=True)
class RegionVerdict:
    region: Region
    margin: float
    route: Route

    @property
    def member(self) -> bool:
        return self.region is not Region.EXTERIOR

    @property
    def interior(self) -> bool:
        return self.region is Region.INTERIOR


def verdict_from_margin(margin: float, tol: float, route: Route) -> RegionVerdict:
    if margin > tol:
        region = Region.INTERIOR
    elif margin < -tol:
        region = Region.EXTERIOR
    else:
        region = Region.BOUNDARY
    return RegionVerdict(region, float(margin), route)


def _check_k(k: int, lo: int, hi: int) -> None:
    if not lo <= k <= hi:
        raise InputError(f"branch index k={k} outside [{lo}, {hi}]")


def lambda_branch_spectrum(spec: symcore.Spectrum, k: int) -> RegionVerdict:
    _check_k(k, 1, spec.n)
    v = verdict_from_margin(spec.eigenvalues[k - 1], spec.tol, Route.EIGENVALUE)
    # count test: A in Lambda_k iff q(A) <= k-1
    assert v.member == (spec.neg_count <= k - 1)
    return v


def lambda_branch(A, k: int) -> RegionVerdict:
    return lambda_branch_spectrum(symcore.eigenvalues(A), k)


def sigma_branch_critical_spectrum(spec: symcore.Spectrum, k: int) -> RegionVerdict:
    n = spec.n
    if n < 2:
        raise InputError("sigma_{n-1} branches need n >= 2")
    _check_k(k, 1, n - 1)
    cps = spec.critical_points
    # Lambda_k^{sigma_{n-1}} = {c_ell <= 0} with k + ell = n
    return verdict_from_margin(-cps[n - k - 1], spec.tol, Route.CRITICAL_POINT)


def sigma_branch_critical(A, k: int) -> RegionVerdict:
    return sigma_branch_critical_spectrum(symcore.eigenvalues(A), k)


def _banded_sigma(spec: symcore.Spectrum) -> list[float]:
    # entries inside their own zero band count as zero and are dropped
    return [1.0] + [
        float(spec.sigma[k]) if abs(spec.sigma[k]) > spec.sigma_tol(k) else 0.0
        for k in range(1, spec.n + 1)
    ]


def sigma_variation(spec: symcore.Spectrum) -> int:
    return symcore.sign_variation(_banded_sigma(spec))


def alpha_variation(spec: symcore.Spectrum) -> int:
    return symcore.sign_variation(_banded_sigma(spec)[:-1])


def sigma_branch_variation_spectrum(spec: symcore.Spectrum, k: int) -> RegionVerdict:
    _check_k(k, 1, spec.n - 1)
    var = alpha_variation(spec)
    region = Region.MEMBER if var <= k - 1 else Region.EXTERIOR
    return RegionVerdict(region, float(k - 1 - var), Route.SIGN_VARIATION)


def sigma_branch_variation(A, k: int) -> RegionVerdict:
    """Closed-set membership in Lambda_k^{sigma_{n-1}} via Var(alpha(A)) <= k-1."""
    return sigma_branch_variation_spectrum(symcore.eigenvalues(A), k)


def lambda_branch_variation_spectrum(spec: symcore.Spectrum, k: int) -> bool:
    _check_k(k, 1, spec.n)
    return sigma_variation(spec) <= k - 1


def lambda_branch_variation(A, k: int) -> bool:
    """Closed-set membership in Lambda_k via Var(sigma(A)) <= k-1."""
    return lambda_branch_variation_spectrum(symcore.eigenvalues(A), k)


class Part(str, Enum):
    IN_LAMBDA_K = "InLambdaK"
    EK_SET = "EkSet"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class DecompositionLabel:
    part: Part
    j_index: int | None = None


def decompose_spectrum(spec: symcore.Spectrum, k: int) -> DecompositionLabel:
    n = spec.n
    if not sigma_branch_critical_spectrum(spec, k).member:
        return DecompositionLabel(Part.OUTSIDE)
    if lambda_branch_spectrum(spec, k).member:
        return DecompositionLabel(Part.IN_LAMBDA_K)
    sig = spec.sigma
    assert abs(sig[n]) > spec.sigma_tol(n), "sigma_n vanishes on E_k"
    j = max(i for i in range(n) if i == 0 or abs(sig[i]) > spec.sigma_tol(i))
    return DecompositionLabel(Part.EK_SET, j)


def decompose_sigma_branch(A, k: int) -> DecompositionLabel:
    """Split Lambda_k^{sigma_{n-1}} into its Lambda_k part and the set E_k."""
    return decompose_spectrum(symcore.eigenvalues(A), k)
