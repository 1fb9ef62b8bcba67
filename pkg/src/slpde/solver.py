"""Monotone wide-stencil solver for f(D^2 u) = psi(x) on planar grid domains.

The discrete operator takes centered second differences along a fixed set
of integer directions e,

    Delta_e u(x) = (u(x + h e) - 2 u(x) + u(x - h e)) / (h |e|)^2,

and uses lambda_min ~ min_e Delta_e, lambda_max ~ max_e Delta_e in place of
the Hessian eigenvalues, S[u] = arctan(lambda_min) + arctan(lambda_max).
S is nondecreasing in every neighbour value and nonincreasing in the centre
value, which is what viscosity-solution convergence needs. A least-squares
Hessian assembly is available for comparison but is not monotone.

Also here: exact radial profiles (first integral Im(e^{-i theta}(r + iy)^n) = c)
and the Lagrangian-graph identity grad(theta) = -J H.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.sparse.linalg import spsolve

from .errors import InputError, NoBracket, NotConverged, PhaseOutOfRange
from .phase import PHASE_TOL, interval_bounds, special_value

N_DIM = 2
EXTERIOR, INTERIOR, BOUNDARY = 0, 1, 2
DEFAULT_STENCIL = ((1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2))


@dataclass(frozen=True)
class SolveProblem:
    x0: tuple[float, float]  # coordinates of node (0, 0)
    h: float
    mask: np.ndarray  # int8, shape (N1, N2); axis 0 is x_1
    psi: np.ndarray  # meaningful on interior nodes
    phi: np.ndarray  # meaningful on boundary nodes
    stencil: tuple = DEFAULT_STENCIL
    residual_tol: float = 1e-10
    max_iters: int = 100
    damping: float = 0.2
    method: str = "newton"

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=np.int8)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "psi", np.broadcast_to(np.asarray(self.psi, dtype=float), mask.shape).copy())
        object.__setattr__(self, "phi", np.broadcast_to(np.asarray(self.phi, dtype=float), mask.shape).copy())
        object.__setattr__(self, "stencil", tuple(tuple(int(c) for c in e) for e in self.stencil))
        if self.h <= 0:
            raise InputError("h must be positive")
        if self.method not in ("newton", "explicit"):
            raise InputError(f"unknown method {self.method!r}")
        if not 0 < self.damping <= 1.0 / (2 * N_DIM):
            raise InputError(f"damping must lie in (0, {1 / (2 * N_DIM)}]")
        inner = mask == INTERIOR
        if not inner.any():
            raise InputError("no interior nodes")
        half = N_DIM * math.pi / 2
        psi_in = self.psi[inner]
        if not np.all(np.isfinite(psi_in)) or np.any(np.abs(psi_in) >= half - PHASE_TOL):
            raise PhaseOutOfRange("psi must lie in (-n pi/2, n pi/2) on interior nodes")
        if not np.all(np.isfinite(self.phi[mask == BOUNDARY])):
            raise InputError("phi must be finite on boundary nodes")
        reach = max(max(abs(a), abs(b)) for a, b in self.stencil)
        I, J = np.nonzero(inner)
        if I.min() < reach or J.min() < reach or I.max() >= mask.shape[0] - reach or J.max() >= mask.shape[1] - reach:
            raise InputError("interior nodes too close to the grid edge for the stencil")
        for a, b in self.stencil:
            for s in (1, -1):
                if np.any(mask[I + s * a, J + s * b] == EXTERIOR):
                    raise InputError(f"an interior node reaches an exterior node along {(a, b)}")

    @property
    def shape(self):
        return self.mask.shape

    def coordinates(self):
        i = np.arange(self.shape[0])
        j = np.arange(self.shape[1])
        X1, X2 = np.meshgrid(self.x0[0] + self.h * i, self.x0[1] + self.h * j, indexing="ij")
        return X1, X2

    def special_phase(self) -> bool:
        """True if psi touches a special value, where convergence is best effort only."""
        psi_in = self.psi[self.mask == INTERIOR]
        return any(np.any(np.abs(psi_in - special_value(N_DIM, k)) <= 1e-6) for k in range(1, N_DIM))


@dataclass
class SolveResult:
    u: np.ndarray
    residual: np.ndarray
    residual_sup: float
    iterations: int
    converged: bool
    method: str
    special_phase: bool = False
    history: list = field(default_factory=list)


# -- discrete operator ----------------------------------------------------------


def _shift(u: np.ndarray, a: int, b: int) -> np.ndarray:
    """v[i, j] = u[i + a, j + b]; wraps at the edges, which interior nodes never see."""
    return np.roll(u, (-a, -b), axis=(0, 1))


def directional_differences(u: np.ndarray, h: float, stencil) -> np.ndarray:
    out = np.empty((len(stencil),) + u.shape)
    for m, (a, b) in enumerate(stencil):
        out[m] = (_shift(u, a, b) - 2.0 * u + _shift(u, -a, -b)) / (h * h * (a * a + b * b))
    return out


def _lsq_weights(stencil) -> np.ndarray:
    # Delta_e = e^T H e / |e|^2 is linear in (H11, H12, H22); least-squares inverse
    rows = np.array([[a * a, 2 * a * b, b * b] for a, b in stencil], dtype=float)
    rows /= np.array([a * a + b * b for a, b in stencil], dtype=float)[:, None]
    return np.linalg.pinv(rows)


def hessian_eigen_estimates(u: np.ndarray, h: float, stencil, assembly: str = "minmax"):
    """(lambda_min, lambda_max) fields and, for minmax, the argmin/argmax direction indices."""
    D = directional_differences(u, h, stencil)
    if assembly == "minmax":
        imin, imax = np.argmin(D, axis=0), np.argmax(D, axis=0)
        lo = np.take_along_axis(D, imin[None], 0)[0]
        hi = np.take_along_axis(D, imax[None], 0)[0]
        return lo, hi, imin, imax
    if assembly == "lsq":
        W = _lsq_weights(stencil)
        H11, H12, H22 = np.tensordot(W, D, axes=1)
        mean, dev = 0.5 * (H11 + H22), np.hypot(0.5 * (H11 - H22), H12)
        return mean - dev, mean + dev, None, None
    raise InputError(f"unknown assembly {assembly!r}")


def sl_operator_field(u: np.ndarray, problem: SolveProblem, assembly: str = "minmax") -> np.ndarray:
    lo, hi, _, _ = hessian_eigen_estimates(u, problem.h, problem.stencil, assembly)
    S = np.arctan(lo) + np.arctan(hi)
    return np.where(problem.mask == INTERIOR, S, 0.0)


def discrete_sl_operator(u: np.ndarray, node, problem: SolveProblem, assembly: str = "minmax") -> float:
    i, j = node
    if problem.mask[i, j] != INTERIOR:
        raise InputError(f"node {node} is not interior")
    return float(sl_operator_field(u, problem, assembly)[i, j])


# -- iteration ---------------------------------------------------------------


def _index(problem: SolveProblem):
    inner = problem.mask == INTERIOR
    idx = -np.ones(problem.shape, dtype=np.int64)
    idx[inner] = np.arange(int(inner.sum()))
    return inner, idx


def _jacobian(u, problem, inner, idx, chi_prime=None):
    """dS/du on interior unknowns (boundary columns dropped: they are pinned)."""
    h, st = problem.h, problem.stencil
    lo, hi, imin, imax = hessian_eigen_estimates(u, h, st)
    I, J = np.nonzero(inner)
    p = idx[I, J]
    norms = np.array([a * a + b * b for a, b in st], dtype=float)
    rows, cols, vals = [p], [p], []
    diag = np.zeros(len(p))
    extra_r, extra_c, extra_v = [], [], []
    for lam, which in ((lo, imin), (hi, imax)):
        w = 1.0 / (1.0 + lam[I, J] ** 2) / (h * h * norms[which[I, J]])
        if chi_prime is not None:
            w = w * chi_prime[I, J]
        diag -= 2.0 * w
        sa = np.array([e[0] for e in st])[which[I, J]]
        sb = np.array([e[1] for e in st])[which[I, J]]
        for s in (1, -1):
            q = idx[I + s * sa, J + s * sb]
            keep = q >= 0
            extra_r.append(p[keep])
            extra_c.append(q[keep])
            extra_v.append(w[keep])
    vals.append(diag)
    rows += extra_r
    cols += extra_c
    vals += extra_v
    n = len(p)
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))


def _laplace_guess(problem: SolveProblem, inner, idx) -> np.ndarray:
    """Five-point harmonic extension of phi, a cheap starting iterate."""
    u = np.where(problem.mask == BOUNDARY, problem.phi, 0.0)
    I, J = np.nonzero(inner)
    p = idx[I, J]
    rows, cols, vals = [p], [p], [np.full(len(p), -4.0)]
    rhs = np.zeros(len(p))
    for a, b in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        q = idx[I + a, J + b]
        keep = q >= 0
        rows.append(p[keep])
        cols.append(q[keep])
        vals.append(np.ones(int(keep.sum())))
        rhs -= np.where(keep, 0.0, u[I + a, J + b])
    A = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(len(p), len(p)))
    u[I, J] = spsolve(A.tocsc(), rhs)
    return u


def _residual(u, problem):
    S = sl_operator_field(u, problem)
    return np.where(problem.mask == INTERIOR, S - problem.psi, 0.0)


def _finish(problem, u, res, it, history, raise_on_failure):
    u = np.where(problem.mask == EXTERIOR, np.nan, u)
    rs = float(np.max(np.abs(res)))
    result = SolveResult(u, res, rs, it, rs <= problem.residual_tol, problem.method, problem.special_phase(), history)
    if not result.converged and raise_on_failure:
        raise NotConverged(f"residual {rs:.3e} > {problem.residual_tol:.1e} after {it} iterations", result)
    return result


def _newton(problem, u, tame: bool):
    inner, idx = _index(problem)
    I, J = np.nonzero(inner)

    def G(v):
        S = sl_operator_field(v, problem)
        if tame:
            return np.where(inner, np.tan(S / N_DIM) - np.tan(problem.psi / N_DIM), 0.0), S
        return np.where(inner, S - problem.psi, 0.0), S

    g, S = G(u)
    history = []
    it = 0
    for it in range(1, problem.max_iters + 1):
        res = np.where(inner, S - problem.psi, 0.0)
        history.append(float(np.max(np.abs(res))))
        if history[-1] <= problem.residual_tol:
            return u, res, it - 1, history
        chi = (1.0 + np.tan(S / N_DIM) ** 2) / N_DIM if tame else None
        Jm = _jacobian(u, problem, inner, idx, chi)
        du = spsolve(Jm.tocsc(), -g[I, J])
        gn = float(np.max(np.abs(g)))
        step = 1.0
        while True:
            trial = u.copy()
            trial[I, J] += step * du
            g_t, S_t = G(trial)
            if float(np.max(np.abs(g_t))) < (1.0 - 1e-4 * step) * gn or step < 1e-6:
                break
            step *= 0.5
        u, g, S = trial, g_t, S_t
    res = np.where(inner, S - problem.psi, 0.0)
    history.append(float(np.max(np.abs(res))))
    return u, res, it, history


def _explicit(problem, u, tame: bool):
    """Jacobi-style damped iteration u <- u + omega h^2 (S[u] - psi), monotone for omega <= 1/(2n)."""
    inner = problem.mask == INTERIOR
    tau = problem.damping * problem.h**2
    history = []
    it = 0
    for it in range(1, problem.max_iters + 1):
        S = sl_operator_field(u, problem)
        res = np.where(inner, S - problem.psi, 0.0)
        rs = float(np.max(np.abs(res)))
        if it % 100 == 1:
            history.append(rs)
        if rs <= problem.residual_tol:
            return u, res, it - 1, history
        if tame:
            # tan(S/n) - tan(psi/n), rescaled by the largest chi' so the step stays monotone
            chi = (1.0 + np.tan(S / N_DIM) ** 2) / N_DIM
            upd = (np.tan(S / N_DIM) - np.tan(problem.psi / N_DIM)) / float(np.max(chi[inner]))
        else:
            upd = res
        u = u + tau * np.where(inner, upd, 0.0)
    res = _residual(u, problem)
    return u, res, it, history


def solve(problem: SolveProblem, u0=None, raise_on_failure: bool = True) -> SolveResult:
    """Solve S[u] = psi on interior nodes with u = phi on boundary nodes.

    Raises NotConverged (carrying the best iterate in ``.result``) unless
    ``raise_on_failure`` is False.
    """
    return _run(problem, u0, raise_on_failure, tame=False)


def tame_solve(problem: SolveProblem, u0=None, raise_on_failure: bool = True) -> SolveResult:
    """Same problem through tan(S[u]/n) = tan(psi/n); psi must stay in the top interval."""
    lo, hi = interval_bounds(N_DIM, 1)
    psi_in = problem.psi[problem.mask == INTERIOR]
    if np.any(psi_in <= lo + PHASE_TOL) or np.any(psi_in >= hi - PHASE_TOL):
        raise PhaseOutOfRange(f"tame_solve needs psi in ({lo}, {hi})")
    return _run(problem, u0, raise_on_failure, tame=True)


def tameness_constant(problem: SolveProblem) -> float:
    """c(delta) with delta = min psi - (n-2) pi/2, the lower bound on the tame operator's slope."""
    from .phase import tameness_bound

    lo, _ = interval_bounds(N_DIM, 1)
    delta = float(np.min(problem.psi[problem.mask == INTERIOR])) - lo
    return min(1.0 / N_DIM, tameness_bound(N_DIM, delta))


def _run(problem, u0, raise_on_failure, tame):
    inner, idx = _index(problem)
    if u0 is None:
        u = _laplace_guess(problem, inner, idx)
    else:
        u = np.where(problem.mask == BOUNDARY, problem.phi, np.nan_to_num(np.asarray(u0, dtype=float)))
    u = np.where(problem.mask == EXTERIOR, 0.0, u)
    if problem.method == "newton":
        u, res, it, hist = _newton(problem, u, tame)
    else:
        u, res, it, hist = _explicit(problem, u, tame)
    return _finish(problem, u, res, it, hist, raise_on_failure)


# -- problem builders ---------------------------------------------------------


def _as_field(value, X1, X2):
    if callable(value):
        # off-domain nodes may be singular for the data (log r at 0); they are masked out
        with np.errstate(all="ignore"):
            return np.asarray(value(X1, X2), dtype=float) * np.ones_like(X1)
    return np.full(X1.shape, float(value))


def grid_problem(
    inside: Callable,
    box,
    h: float,
    psi,
    phi,
    stencil=DEFAULT_STENCIL,
    project: Callable | None = None,
    **options,
) -> SolveProblem:
    """Build a problem on {inside(x1, x2)} within box = (a1, b1, a2, b2).

    Nodes outside the domain that an interior node reaches through the
    stencil become boundary nodes. phi is evaluated at the node itself
    (``project=None``: phi must extend past the boundary) or at
    ``project(x1, x2)``, a nearest boundary point.
    """
    reach = max(max(abs(a), abs(b)) for a, b in stencil)
    a1, b1, a2, b2 = box
    pad = (reach + 1) * h
    n1 = int(math.ceil((b1 - a1 + 2 * pad) / h)) + 1
    n2 = int(math.ceil((b2 - a2 + 2 * pad) / h)) + 1
    x0 = (a1 - pad, a2 - pad)
    X1, X2 = np.meshgrid(x0[0] + h * np.arange(n1), x0[1] + h * np.arange(n2), indexing="ij")
    ins = np.asarray(inside(X1, X2), dtype=bool)
    ins[:reach, :] = ins[-reach:, :] = False
    ins[:, :reach] = ins[:, -reach:] = False
    mask = np.where(ins, INTERIOR, EXTERIOR).astype(np.int8)
    for a, b in stencil:
        for s in (1, -1):
            reached = _shift(ins, -s * a, -s * b)  # node y = x + s h e with x interior
            mask[(mask == EXTERIOR) & reached] = BOUNDARY
    if project is None:
        phi_f = _as_field(phi, X1, X2)
    else:
        P1, P2 = project(X1, X2)
        phi_f = _as_field(phi, P1, P2)
    phi_f = np.where(mask == BOUNDARY, phi_f, 0.0)
    psi_f = np.where(mask == INTERIOR, _as_field(psi, X1, X2), 0.0)
    return SolveProblem(x0=x0, h=h, mask=mask, psi=psi_f, phi=phi_f, stencil=tuple(stencil), **options)


def annulus_problem(h, psi, phi, r_in=0.5, r_out=1.5, **kw) -> SolveProblem:
    def inside(X1, X2):
        r = np.hypot(X1, X2)
        return (r > r_in) & (r < r_out)

    def project(X1, X2):
        r = np.maximum(np.hypot(X1, X2), 1e-300)
        target = np.where(np.abs(r - r_in) < np.abs(r - r_out), r_in, r_out)
        return X1 * target / r, X2 * target / r

    if kw.pop("boundary", "extend") == "project":
        kw["project"] = project
    return grid_problem(inside, (-r_out, r_out, -r_out, r_out), h, psi, phi, **kw)


def disk_problem(h, psi, phi, R=1.0, **kw) -> SolveProblem:
    def project(X1, X2):
        r = np.maximum(np.hypot(X1, X2), 1e-300)
        return X1 * R / r, X2 * R / r

    if kw.pop("boundary", "extend") == "project":
        kw["project"] = project
    return grid_problem(lambda X1, X2: np.hypot(X1, X2) < R, (-R, R, -R, R), h, psi, phi, **kw)


def sup_error(result: SolveResult, problem: SolveProblem, exact: Callable) -> float:
    X1, X2 = problem.coordinates()
    inner = problem.mask == INTERIOR
    return float(np.max(np.abs(result.u[inner] - exact(X1, X2)[inner])))


# -- JSON / CSV --------------------------------------------------------------

_EXPR_NAMES = {
    name: getattr(np, name)
    for name in ("sin", "cos", "tan", "arctan", "arctan2", "exp", "log", "sqrt", "abs", "hypot", "sinh", "cosh", "tanh", "minimum", "maximum")
}
_EXPR_NAMES.update(pi=math.pi, e=math.e)


def compile_expression(text: str) -> Callable:
    """x1, x2 (and r = |x|) -> value, evaluated with numpy functions only."""
    code = compile(str(text), "<expr>", "eval")
    for name in code.co_names:
        if name not in _EXPR_NAMES and name not in ("x1", "x2", "r"):
            raise InputError(f"unknown name {name!r} in expression {text!r}")

    def f(X1, X2):
        env = dict(_EXPR_NAMES, x1=X1, x2=X2, r=np.hypot(X1, X2))
        return eval(code, {"__builtins__": {}}, env)

    return f


def _value(spec):
    if isinstance(spec, (int, float)):
        return float(spec)
    if isinstance(spec, str):
        return compile_expression(spec)
    raise InputError(f"expected a number or an expression string, got {spec!r}")


SOLVE_OPTIONS = ("residual_tol", "max_iters", "damping", "method")


def problem_from_dict(d: dict) -> SolveProblem:
    """Problem from a JSON-like dict, see README for the schema."""
    try:
        h = float(d["grid"]["h"])
        dom = d["domain"]
        psi, phi = _value(d["psi"]), _value(d["phi"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed problem: missing {exc}") from exc
    opts = {k: d[k] for k in SOLVE_OPTIONS if k in d}
    if "stencil" in d:
        opts["stencil"] = tuple(tuple(e) for e in d["stencil"])
    boundary = d.get("boundary", "extend")
    kind = dom.get("type")
    if kind == "annulus":
        return annulus_problem(h, psi, phi, float(dom.get("r_in", 0.5)), float(dom.get("r_out", 1.5)), boundary=boundary, **opts)
    if kind == "disk":
        return disk_problem(h, psi, phi, float(dom.get("R", 1.0)), boundary=boundary, **opts)
    if kind == "expression":
        if boundary != "extend":
            raise InputError("expression domains support boundary='extend' only")
        rho = compile_expression(dom["rho"])
        box = d["grid"].get("box")
        if box is None:
            raise InputError("expression domains need grid.box = [a1, b1, a2, b2]")
        return grid_problem(lambda X1, X2: rho(X1, X2) < 0, box, h, psi, phi, **opts)
    raise InputError(f"unknown domain type {kind!r}")


def load_problem(path) -> SolveProblem:
    with open(path) as fh:
        return problem_from_dict(json.load(fh))


def write_field_csv(result: SolveResult, problem: SolveProblem, fh) -> None:
    """Rows i, j, x1, x2, u, residual for interior and boundary nodes."""
    X1, X2 = problem.coordinates()
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["i", "j", "x1", "x2", "u", "residual"])
    for i, j in zip(*np.nonzero(problem.mask != EXTERIOR)):
        w.writerow([i, j, repr(float(X1[i, j])), repr(float(X2[i, j])), repr(float(result.u[i, j])), repr(float(result.residual[i, j]))])


def summary(result: SolveResult, problem: SolveProblem) -> dict:
    return {
        "converged": bool(result.converged),
        "iterations": int(result.iterations),
        "residual_sup": float(result.residual_sup),
        "method": result.method,
        "special_phase": bool(result.special_phase),
        "h": float(problem.h),
        "interior_nodes": int(np.sum(problem.mask == INTERIOR)),
        "boundary_nodes": int(np.sum(problem.mask == BOUNDARY)),
    }


# -- radial reference solutions -------------------------------------------------


@dataclass(frozen=True)
class RadialProfile:
    theta: float
    c: float
    n: int
    r: np.ndarray
    y: np.ndarray  # psi'(r)
    dy: np.ndarray  # psi''(r), by implicit differentiation of the first integral
    u: np.ndarray  # psi(r) with psi(r[0]) = u0
    residual: np.ndarray  # (n-1) arctan(y/r) + arctan(y') - theta

    def __call__(self, rr):
        return np.interp(rr, self.r, self.u)


def radial_window(theta: float, n: int) -> tuple[float, float]:
    """Admissible alpha = arctan(y/r): |(n-1) alpha - theta| < pi/2, |alpha| < pi/2."""
    lo = max(-math.pi / 2, (theta - math.pi / 2) / (n - 1))
    hi = min(math.pi / 2, (theta + math.pi / 2) / (n - 1))
    return lo, hi


def radial_slope(theta: float, c: float, n: int, r: float, bracket=None) -> float:
    """y(r) with Im(e^{-i theta}(r + i y)^n) = c.

    With r + iy = (r / cos a) e^{ia} the integral is (r / cos a)^n sin(n a - theta),
    strictly increasing in a on the admissible window, so the root is unique.
    """
    if n < 2:
        raise InputError("radial profiles need n >= 2")
    if r <= 0:
        raise InputError("r must be positive")
    lo, hi = bracket if bracket is not None else radial_window(theta, n)
    shrink = 1e-12 * (hi - lo)
    a, b = lo + shrink, hi - shrink

    def F(al):
        return (r / math.cos(al)) ** n * math.sin(n * al - theta) - c

    fa, fb = F(a), F(b)
    if not fa * fb < 0:
        raise NoBracket(f"no sign change for theta={theta}, c={c}, n={n} at r={r}")
    al = brentq(F, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return r * math.tan(al)


def radial_reference(theta: float, c: float, n: int, r_range, num: int = 201, u0: float = 0.0, bracket=None) -> RadialProfile:
    r0, r1 = (float(v) for v in r_range)
    if not 0 < r0 < r1:
        raise InputError("r_range must satisfy 0 < r0 < r1")
    r = np.linspace(r0, r1, num)
    y = np.array([radial_slope(theta, c, n, ri, bracket) for ri in r])
    # implicit differentiation of Im(e^{-i theta}(r + iy)^n) = c
    w = np.exp(-1j * theta) * (r + 1j * y) ** (n - 1)
    dy = -w.imag / w.real
    residual = (n - 1) * np.arctan(y / r) + np.arctan(dy) - theta
    u = np.empty(num)
    u[0] = u0
    for i in range(1, num):
        seg, _ = quad(lambda s: radial_slope(theta, c, n, s, bracket), r[i - 1], r[i], epsabs=1e-13, epsrel=1e-12)
        u[i] = u[i - 1] + seg
    return RadialProfile(theta, c, n, r, y, dy, u, residual)


# -- Lagrangian graphs ------------------------------------------------------------


@dataclass(frozen=True)
class LagrangianSample:
    u: Callable[[np.ndarray], float]
    points: np.ndarray
    grad: Callable | None = None
    hess: Callable | None = None
    h_fd: float = 1e-4


def _hess_fn(s: LagrangianSample) -> Callable:
    if s.hess is not None:
        return lambda x: np.asarray(s.hess(x), dtype=float)
    h = s.h_fd
    if s.grad is not None:
        def H(x):
            cols = [(np.asarray(s.grad(x + h * e)) - np.asarray(s.grad(x - h * e))) / (2 * h) for e in np.eye(2)]
            M = np.array(cols).T
            return 0.5 * (M + M.T)
        return H

    def H(x):
        f0 = s.u(x)
        M = np.empty((2, 2))
        e = np.eye(2) * h
        for i in range(2):
            M[i, i] = (s.u(x + e[i]) - 2 * f0 + s.u(x - e[i])) / h**2
        M[0, 1] = M[1, 0] = (s.u(x + e[0] + e[1]) - s.u(x + e[0] - e[1]) - s.u(x - e[0] + e[1]) + s.u(x - e[0] - e[1])) / (4 * h * h)
        return M

    return H


COMPLEX_J = np.array([[0.0, 0.0, -1.0, 0.0], [0.0, 0.0, 0.0, -1.0], [1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])


@dataclass(frozen=True)
class LagrangianReport:
    max_deviation: float
    deviations: np.ndarray
    max_mean_curvature: float


def lagrangian_graph_check(sample: LagrangianSample) -> LagrangianReport:
    """max over samples of |grad theta + J H| on L = graph(grad u) in C^2.

    theta = sum arctan lambda_i(D^2 u) is the Lagrangian angle, H the mean
    curvature vector of L in R^4 = C^2 (coordinates (x, y), J(x, y) = (-y, x)).
    Tangent frame F_i = (e_i, D^2u e_i); H = g^{ij} (d_i d_j F)^normal with
    d_i d_j F = (0, d_i d_j grad u); third derivatives by centered differences.
    """
    H = _hess_fn(sample)
    h = sample.h_fd
    devs, hmax = [], 0.0
    for x in np.atleast_2d(np.asarray(sample.points, dtype=float)):
        A = H(x)
        DF = np.vstack([np.eye(2), A])  # 4x2, columns F_1, F_2
        g = DF.T @ DF
        ginv = np.linalg.inv(g)
        T = np.empty((2, 2, 2))  # T[i, j, :] = d_i d_j grad u
        dtheta = np.empty(2)
        for i, e in enumerate(np.eye(2) * h):
            Ap, Am = H(x + e), H(x - e)
            T[i] = (Ap - Am) / (2 * h)
            dtheta[i] = (np.sum(np.arctan(np.linalg.eigvalsh(Ap))) - np.sum(np.arctan(np.linalg.eigvalsh(Am)))) / (2 * h)
        T = 0.5 * (T + T.transpose(1, 0, 2))
        N = np.eye(4) - DF @ ginv @ DF.T  # projection onto the normal plane
        Hvec = np.zeros(4)
        for i in range(2):
            for j in range(2):
                Hvec += ginv[i, j] * (N @ np.concatenate([np.zeros(2), T[i, j]]))
        grad_theta = DF @ ginv @ dtheta  # tangential gradient, as a vector in R^4
        devs.append(float(np.linalg.norm(grad_theta + COMPLEX_J @ Hvec)))
        hmax = max(hmax, float(np.linalg.norm(Hvec)))
    devs = np.array(devs)
    return LagrangianReport(float(devs.max()), devs, hmax)
