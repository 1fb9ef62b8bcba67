"""Command-line front end.

    slpde classify --n 3 --theta 1.5707963268
    slpde branch --matrix '[[-1,0,0],[0,2,0],[0,0,3]]' --k 1
    slpde asym --matrix '[[-1,0,0],[0,2,0],[0,0,3]]' --theta theta_k:1 [--oracle]
    slpde boundary --kappas '[-1,2]' --theta theta_k:1
    slpde boundary --surface torus --params '{"a":1,"b":3}' --samples 200 --theta theta_k:1
    slpde solve --problem annulus.json --output field.csv --summary summary.json
    slpde radial --theta 0 --c 2 --n 2 --r0 0.5 --r1 1.5
    slpde verify-appendix-a --u 'x1**2/2 + x2**2/2 + 0.1*x1**3'

Exit codes: 0 success, 2 bad input, 3 numerical failure. Data goes to
--output (default stdout), diagnostics to stderr. Theta accepts a number or
the token theta_k:K, which resolves to (n - 2K) pi/2 exactly.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import asymptotic, boundary, branches, phase, solver, symcore
from .errors import InputError, NotConverged, NumericalError

ASYM_REL = 1e-12


# -- serialization ------------------------------------------------------------


def _plain(obj):
    """Convert results to JSON-ready builtins."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if hasattr(obj, "value") and isinstance(obj.value, str):  # enums
        return obj.value
    return obj


def _dump(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format(obj, ".17g")
        # keep floats distinguishable from ints on re-parse
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, list):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_dump(v)}" for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj)}")


def report(result, fmt: str = "json") -> str:
    """Serialize a result dict (json, 17 significant digits) or a CSV string passthrough."""
    if fmt == "json":
        return _dump(_plain(result)) + "\n"
    if fmt == "csv":
        if isinstance(result, str):
            return result
        rows = result if isinstance(result, list) else [result]
        rows = [_plain(r) for r in rows]
        keys = list(rows[0])
        buf = io.StringIO()
        buf.write(",".join(keys) + "\n")
        for r in rows:
            buf.write(",".join(_dump(r[k]) if not isinstance(r[k], str) else r[k] for k in keys) + "\n")
        return buf.getvalue()
    raise InputError(f"unknown format {fmt!r}")


def verdict_dict(v: asymptotic.AsymptoticVerdict) -> dict:
    return {
        "member_interior": v.member_interior,
        "member_closure": v.member_closure,
        "branch_case": v.branch_case,
        "case": v.case.value,
        "k": v.k,
        "witnesses": v.witnesses,
    }


def region_dict(v: branches.RegionVerdict) -> dict:
    return {"region": v.region.value, "margin": v.margin, "route": v.route.value, "member": v.member}


# -- input parsing -------------------------------------------------------------


def parse_matrix(text: str) -> np.ndarray:
    try:
        m = np.array(json.loads(text), dtype=float)
    except (json.JSONDecodeError, ValueError, TypeError) as exc:
        raise InputError(f"matrix must be a JSON array of rows: {exc}") from exc
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix has non-finite entries")
    asym = float(np.linalg.norm(m - m.T))
    if asym > ASYM_REL * max(1.0, float(np.linalg.norm(m))):
        print(f"warning: matrix asymmetric (||M - M^T|| = {asym:.3e}); using (M + M^T)/2", file=sys.stderr)
    return symcore.sym_matrix(m)


def parse_theta(text: str, n: int) -> float:
    text = text.strip()
    if text.startswith("theta_k:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError as exc:
            raise InputError(f"bad special-value token {text!r}") from exc
        if not 1 <= k <= n - 1:
            raise InputError(f"special value index k={k} outside 1..{n - 1}")
        return phase.special_value(n, k)
    try:
        return float(text)
    except ValueError as exc:
        raise InputError(f"theta must be a number or theta_k:K, got {text!r}") from exc


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} must be JSON: {exc}") from exc


# -- subcommands -------------------------------------------------------------------


def cmd_classify(args):
    theta = parse_theta(args.theta, args.n)
    pc = phase.classify_phase(args.n, theta)
    return {"n": pc.n, "theta": pc.theta, "kind": pc.kind.value, "k": pc.k}


def cmd_branch(args):
    A = parse_matrix(args.matrix)
    spec = symcore.eigenvalues(A)
    n = spec.n
    ks = [args.k] if args.k is not None else list(range(1, n + 1))
    out = []
    for k in ks:
        row = {
            "k": k,
            "lambda_branch": region_dict(branches.lambda_branch_spectrum(spec, k)),
            "lambda_branch_variation": {"member": branches.lambda_branch_variation_spectrum(spec, k)},
        }
        if k <= n - 1:
            row["sigma_branch"] = region_dict(branches.sigma_branch_critical_spectrum(spec, k))
            row["sigma_branch_variation"] = region_dict(branches.sigma_branch_variation_spectrum(spec, k))
            lab = branches.decompose_spectrum(spec, k)
            row["decomposition"] = {"part": lab.part.value, "j_index": lab.j_index}
        out.append(row)
    return {"eigenvalues": spec.eigenvalues, "sigma": spec.sigma, "neg_count": spec.neg_count, "branches": out}


def cmd_asym(args):
    A = parse_matrix(args.matrix)
    theta = parse_theta(args.theta, A.shape[0])
    out = verdict_dict(asymptotic.asymptotic_interior(A, theta))
    if args.oracle:
        out["oracle"] = asymptotic.definition_oracle(A, theta, t_max=args.t_max)
    return out


SURFACES = {
    "sphere": lambda p: (boundary.sphere(p.get("R", 1.0)), _sphere_points),
    "torus": lambda p: (boundary.torus(p.get("a", 1.0), p.get("b", 3.0)), _torus_points),
    "cylinder": lambda p: (boundary.cylinder(p.get("R", 1.0)), _cylinder_points),
}


def _sphere_points(p, rng, m):
    v = rng.normal(size=(m, 3))
    return p.get("R", 1.0) * v / np.linalg.norm(v, axis=1, keepdims=True)


def _torus_points(p, rng, m):
    a, b = p.get("a", 1.0), p.get("b", 3.0)
    return [boundary.torus_point(a, b, u, v) for u, v in rng.uniform(0, 2 * math.pi, (m, 2))]


def _cylinder_points(p, rng, m):
    R = p.get("R", 1.0)
    t, z = rng.uniform(0, 2 * math.pi, m), rng.uniform(-1, 1, m)
    return np.column_stack([R * np.cos(t), R * np.sin(t), z])


def cmd_boundary(args):
    if (args.kappas is None) == (args.surface is None):
        raise InputError("give exactly one of --kappas, --surface")
    if args.kappas is not None:
        kap = np.array(_json_arg(args.kappas, "--kappas"), dtype=float).ravel()
        n = len(kap) + 1
        theta = parse_theta(args.theta, n)
        rep = boundary.classify_convexity(kap, n, theta)
        t_list = [float(t) for t in _json_arg(args.t_list, "--t-list")] if args.t_list else boundary.MATRIX_T
        return {
            "n": n,
            "theta": theta,
            "kappas": rep.kappas,
            "sigma_values": rep.sigma_values,
            "strict": rep.strict,
            "case": rep.case.value,
            "boundary": rep.boundary,
            "matrix_test": boundary.matrix_convexity_test(kap, n, theta, t_list),
        }
    params = _json_arg(args.params, "--params") if args.params else {}
    if args.surface not in SURFACES:
        raise InputError(f"unknown surface {args.surface!r}")
    S, sampler = SURFACES[args.surface](params)
    theta = parse_theta(args.theta, 3)
    rows = boundary.sweep(S, sampler(params, np.random.default_rng(args.seed), args.samples), theta)
    buf = io.StringIO()
    boundary.write_sweep_csv(rows, buf)
    print(f"{sum(r.report.strict for r in rows)}/{len(rows)} points strict", file=sys.stderr)
    return buf.getvalue()


def cmd_solve(args):
    problem = solver.load_problem(args.problem)
    run = solver.tame_solve if args.tame else solver.solve
    failure = None
    try:
        result = run(problem)
    except NotConverged as exc:
        result, failure = exc.result, exc
    summ = solver.summary(result, problem)
    if args.summary:
        with open(args.summary, "w") as fh:
            fh.write(report(summ))
    else:
        print(report(summ), end="", file=sys.stderr)
    buf = io.StringIO()
    solver.write_field_csv(result, problem, buf)
    _emit(buf.getvalue(), args.output)
    if failure is not None:
        raise failure
    return None


def cmd_radial(args):
    prof = solver.radial_reference(args.theta, args.c, args.n, (args.r0, args.r1), num=args.num)
    rows = [
        {"r": r, "y": y, "dy": dy, "u": u, "residual": res}
        for r, y, dy, u, res in zip(prof.r, prof.y, prof.dy, prof.u, prof.residual)
    ]
    return rows if args.format == "csv" else {"theta": prof.theta, "c": prof.c, "n": prof.n, "profile": rows}


def cmd_appendix_a(args):
    f = solver.compile_expression(args.u)
    u = lambda x: float(f(x[0], x[1]))
    hess = None
    if args.hess:
        H = [[solver.compile_expression(e) for e in row] for row in _json_arg(args.hess, "--hess")]
        hess = lambda x: np.array([[float(h(x[0], x[1])) for h in row] for row in H])
    pts = np.random.default_rng(args.seed).uniform(-args.radius, args.radius, (args.points, 2))
    rep = solver.lagrangian_graph_check(solver.LagrangianSample(u, pts, hess=hess, h_fd=args.h_fd))
    return {"max_deviation": rep.max_deviation, "max_mean_curvature": rep.max_mean_curvature, "points": args.points}


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write data here instead of stdout")
    p = argparse.ArgumentParser(prog="slpde", description="Special Lagrangian potential equation toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="phase interval / special value of theta")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--theta", required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("branch", parents=[common], help="branch memberships of a matrix")
    s.add_argument("--matrix", required=True)
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_branch)

    s = sub.add_parser("asym", parents=[common], help="asymptotic interior membership")
    s.add_argument("--matrix", required=True)
    s.add_argument("--theta", required=True)
    s.add_argument("--oracle", action="store_true", help="also run the sampling oracle")
    s.add_argument("--t-max", type=float, default=1e6)
    s.set_defaults(func=cmd_asym)

    s = sub.add_parser("boundary", parents=[common], help="strict boundary convexity")
    s.add_argument("--kappas")
    s.add_argument("--surface", choices=sorted(SURFACES))
    s.add_argument("--params")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--theta", required=True)
    s.add_argument("--t-list")
    s.set_defaults(func=cmd_boundary)

    s = sub.add_parser("solve", parents=[common], help="Dirichlet problem on a grid (CSV field out)")
    s.add_argument("--problem", required=True)
    s.add_argument("--summary", help="summary JSON path (default: stderr)")
    s.add_argument("--tame", action="store_true")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("radial", parents=[common], help="exact radial profile")
    s.add_argument("--theta", type=float, required=True)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r0", type=float, required=True)
    s.add_argument("--r1", type=float, required=True)
    s.add_argument("--num", type=int, default=101)
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.set_defaults(func=cmd_radial)

    s = sub.add_parser("verify-appendix-a", parents=[common], help="check grad(theta) = -J H on a Lagrangian graph")
    s.add_argument("--u", required=True, help="expression in x1, x2")
    s.add_argument("--hess", help="JSON 2x2 array of expressions (optional)")
    s.add_argument("--points", type=int, default=20)
    s.add_argument("--radius", type=float, default=0.5)
    s.add_argument("--h-fd", type=float, default=1e-4)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_appendix_a)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad usage
        return int(exc.code or 0)
    try:
        result = args.func(args)
        if result is not None:
            fmt = "csv" if isinstance(result, str) or getattr(args, "format", "json") == "csv" else "json"
            _emit(report(result, fmt), args.output)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, AssertionError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())
