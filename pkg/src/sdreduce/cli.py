"""Command-line front end.

Commands: verify, lift-check, reconstruct, evolve, ode.  Reports are
deterministic JSON (same arguments + seed give byte-identical output); data
series are CSV with a one-line header.

Exit codes: 0 pass, 1 tolerance failure, 2 usage, 3 paper-variant mismatch
detected, 4 numerical-domain failure, 5 guard violation.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys

import numpy as np

from . import __version__
from .alphachain import (
    beta_from_alpha,
    hodograph_reconstruct,
    w_from_beta,
)
from .catalog import build_family, equation_info, numeric_twin, residual_fn
from .errors import DomainError, GuardError, UsageError
from .evolve import EvolutionConfig, convergence_study, evolve
from .families import (
    first_integral,
    integrate_poly_ansatz,
    poly_alpha_residual_max,
    select_poly_sign,
    weierstrass_trajectory,
)
from .numcore import Grid1, Grid2
from .plebanski import LIFT_CONSTANT, fit_lift_constant
from .report import Discrepancy, ResidualReport, dumps, sweep, write_csv, write_json
from .sdym import LIFT_PREFACTOR, fit_lift_constants

GAUGE_DISCREPANCY = Discrepancy(
    name="gauge-constraint",
    paper_value="B' + A = 0",
    derived_value="B' + 6A = 0",
)
SS_DISCREPANCY = Discrepancy(
    name="reduced-commutator-coefficient",
    paper_value="kappa = 1/(2i r)",
    derived_value="kappa = i/r (factor -2)",
)
TABLE_DISCREPANCY = Discrepancy(
    name="second-derivative-table",
    paper_value="M_yyb = (y/4) (m_r/r)_r",
    derived_value="M_yyb = (y/(4r)) (m_r/r)_r",
)
SIGN12_DISCREPANCY = Discrepancy(
    name="b-equation-forcing-sign",
    paper_value="B'' + 6AB = -12A",
    derived_value="B'' + 6AB = +12A",
)


def _parse_grid(text, default_name=None):
    name = default_name
    body = text
    if "=" in text:
        name, body = text.split("=", 1)
    parts = body.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid spec must be [name=]lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        return name, Grid1(lo, hi, n)
    except ValueError as exc:
        raise UsageError(f"bad grid spec {text!r}: {exc}") from exc


def _grids_by_name(specs, axis_names):
    named = {}
    for k, text in enumerate(specs or []):
        default = axis_names[k] if k < len(axis_names) else None
        name, grid = _parse_grid(text, default)
        named[name] = grid
    missing = [a for a in axis_names if a not in named]
    if missing:
        raise UsageError(f"missing --grid for axes {missing}")
    return named


def _family_params(args):
    params = {}
    for key in ("a", "b", "c", "c1", "c2", "v", "lam"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    if getattr(args, "branch", None) is not None:
        params["branch"] = args.branch
    return params


def _emit(args, payload, filename="report.json"):
    text = dumps(payload)
    sys.stdout.write(text)
    if args.out:
        path = args.out
        if os.path.splitext(path)[1] != ".json":
            os.makedirs(path, exist_ok=True)
            path = os.path.join(path, filename)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        return os.path.dirname(path) or "."
    return None


def _validate_out(out):
    if out is None:
        return
    base = out if os.path.splitext(out)[1] == "" else os.path.dirname(out) or "."
    parent = os.path.dirname(os.path.abspath(base))
    if not os.path.isdir(parent):
        raise UsageError(f"output location {out!r}: parent directory does not exist")


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args):
    eq, (surface, axis_names) = equation_info(args.equation)
    entry = build_family(args.family, _family_params(args), args.mode_variant)
    if args.mode == "numeric" and entry.alpha is not None:
        entry = numeric_twin(entry)
    grids = _grids_by_name(args.grid, axis_names)
    fn = residual_fn(eq, entry)
    axes = [grids[a].points() for a in axis_names]
    max_abs, rms, worst = sweep(fn, itertools.product(*axes))
    grid_desc = ";".join(f"{a}={grids[a].describe()}" for a in axis_names)
    report = ResidualReport(
        equation=eq, family=entry.describe(), grid=grid_desc,
        max_abs=max_abs, rms=rms, worst_point=worst, mode=args.mode,
        discrepancies=[d.__dict__ for d in entry.discrepancies],
    )
    _emit(args, report.to_dict())
    if max_abs <= args.tol:
        return 0
    return 3 if (args.mode_variant == "paper" and entry.discrepancies) else 1


# ---------------------------------------------------------------------------
# lift-check

def cmd_lift_check(args):
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.which == "plebanski":
        fitted, samples = fit_lift_constant(args.trials, args.seed)
        err = abs(fitted - LIFT_CONSTANT)
        payload = {
            "which": "plebanski",
            "trials": args.trials,
            "seed": args.seed,
            "samples": samples,
            "fitted_constant": [fitted.real, fitted.imag],
            "asserted_constant": LIFT_CONSTANT,
            "abs_error": err,
            "model": "plebanski_residual(lift(p)) = k * ybar^-2 * reduced_residual(p)",
            "discrepancies": [],
        }
        _emit(args, payload)
        return 0 if err <= args.tol else 1
    if args.which == "sdym":
        prefac, kappa_scale = fit_lift_constants(args.trials, args.seed)
        err = max(abs(prefac - LIFT_PREFACTOR), abs(kappa_scale - 1j))
        payload = {
            "which": "sdym",
            "trials": args.trials,
            "seed": args.seed,
            "fitted_prefactor": [prefac.real, prefac.imag],
            "asserted_prefactor": LIFT_PREFACTOR,
            "fitted_kappa_scale": [kappa_scale.real, kappa_scale.imag],
            "canonical_kappa_scale": [0.0, 1.0],
            "paper_kappa_scale": [0.0, -0.5],
            "abs_error": err,
            "model": ("ybar * sdym_residual(lift(m)) = "
                      "a*(m_rr + m_tt) + b*[m_t, m_r]/r, kappa_scale = -b/a"),
            "discrepancies": [SS_DISCREPANCY.__dict__, TABLE_DISCREPANCY.__dict__],
        }
        _emit(args, payload)
        return 0 if err <= args.tol else 1
    raise UsageError(f"--which must be plebanski or sdym, got {args.which!r}")


# ---------------------------------------------------------------------------
# reconstruct

def cmd_reconstruct(args):
    entry = build_family(args.family, _family_params(args), "corrected")
    if entry.alpha is None:
        raise UsageError(f"family {entry.id!r} has no alpha(y,t) surface")
    if args.mode == "numeric":
        entry = numeric_twin(entry)
    grids = _grids_by_name(args.grid, ("x", "t"))
    grid = Grid2(grids["x"], grids["t"])
    blo, bhi = (float(s) for s in args.bracket.split(":"))
    y0 = args.y0 if args.y0 is not None else blo
    check_y = Grid1(blo, bhi, 9)
    check_t = Grid1(grid.axis2.lo, grid.axis2.hi, min(9, grid.axis2.n))
    beta, A_t = beta_from_alpha(entry.alpha, y0, check_t, check_y,
                                tol=args.gauge_tol)
    W, gauge = w_from_beta(beta, A_t, A0=args.a0, B0=args.b0,
                           t_ref=grid.axis2.lo, gauge_variant=args.mode_variant)
    result = hodograph_reconstruct(entry.alpha, W, grid, (blo, bhi))
    discrepancies = [d.__dict__ for d in entry.discrepancies]
    if args.mode_variant == "paper":
        discrepancies.append(GAUGE_DISCREPANCY.__dict__)
    payload = {
        "family": entry.describe(),
        "grid": grid.describe(),
        "bracket": [blo, bhi],
        "y0": y0,
        "gauge_variant": args.mode_variant,
        "A0": args.a0,
        "B0": args.b0,
        "mode": args.mode,
        "compat_defect": result.compat_defect,
        "monge_ampere_max_resid": result.ma_resid,
        "monge_ampere_worst_point": list(result.ma_worst_point),
        "discrepancies": discrepancies,
    }
    out_dir = _emit(args, payload, filename="diagnostics.json")
    if out_dir:
        rows = []
        for i, x in enumerate(result.xs):
            for j, t in enumerate(result.ts):
                rows.append((x, t, result.p[i, j], result.p_x[i, j], result.p_t[i, j]))
        write_csv(os.path.join(out_dir, "p.csv"), ("x", "t", "p", "p_x", "p_t"), rows)
    return 0 if result.ma_resid <= args.tol else 1


# ---------------------------------------------------------------------------
# evolve

def cmd_evolve(args):
    entry = build_family(args.family, _family_params(args), "corrected")
    if entry.alpha is None:
        raise UsageError(f"family {entry.id!r} has no alpha(y,t) surface")
    grids = _grids_by_name(args.grid, ("y",))
    ygrid = grids["y"]
    if args.resolutions:
        resolutions = [int(s) for s in args.resolutions.split(",")]
        errors, orders = convergence_study(
            lambda: entry.alpha, ygrid.lo, ygrid.hi, args.t0, args.t1,
            resolutions, cfl_target=args.cfl)
        payload = {
            "family": entry.describe(),
            "resolutions": resolutions,
            "t_span": [args.t0, args.t1],
            "cfl_target": args.cfl,
            "errors": errors,
            "observed_orders": orders,
        }
        _emit(args, payload, filename="convergence.json")
        return 0
    cfg = EvolutionConfig(y_grid=ygrid, t0=args.t0, t1=args.t1,
                          family=entry.alpha, dt=args.dt, cfl_target=args.cfl,
                          strict_cfl=not args.allow_unstable,
                          initial_noise=args.noise, noise_seed=args.seed)
    result = evolve(cfg, snapshot_every=args.snapshot_every)
    payload = {
        "family": entry.describe(),
        "grid": ygrid.describe(),
        "t_span": [args.t0, args.t1],
        "dt": cfg.dt,
        "cfl_target": args.cfl,
        "snapshots": len(result.snapshots),
        "final_error_vs_exact": result.error_vs_exact[-1],
        "max_error_vs_exact": max(result.error_vs_exact),
        "truncated": result.truncated,
        "blowup_t": result.blowup_t,
        "hyperbolicity_lost_at": result.hyperbolicity_lost_at,
    }
    out_dir = _emit(args, payload, filename="summary.json")
    if out_dir:
        ys = ygrid.points()
        rows = []
        for t, row in zip(result.times, result.snapshots):
            for y, val in zip(ys, row):
                rows.append((t, y, val))
        write_csv(os.path.join(out_dir, "snapshots.csv"), ("t", "y", "alpha"), rows)
    return 5 if result.truncated else 0


# ---------------------------------------------------------------------------
# ode

def cmd_ode(args):
    if args.system == "poly-ansatz":
        if args.sign12 == "oracle":
            sign = select_poly_sign()
        elif args.sign12 in ("plus", "+"):
            sign = +1
        elif args.sign12 in ("minus", "-"):
            sign = -1
        else:
            raise UsageError(f"--sign12 must be oracle|plus|minus, got {args.sign12!r}")
        state0 = np.array([float(s) for s in args.state.split(",")])
        if state0.shape != (6,):
            raise UsageError("--state must be A,Adot,B,Bdot,C,Cdot")
        traj = integrate_poly_ansatz(state0, args.t0, args.t1, args.steps, sign12=sign)
        E0 = first_integral(state0[0], state0[1])
        drift = max(abs(first_integral(s[0], s[1]) - E0) for _, s in traj)
        resid = poly_alpha_residual_max(traj, 0.0, 1.0)
        payload = {
            "system": "poly-ansatz",
            "selected_sign": "+" if sign > 0 else "-",
            "sign_source": args.sign12,
            "t_span": [args.t0, args.t1],
            "steps": args.steps,
            "first_integral": E0,
            "invariant_drift": drift,
            "alpha_residual_max": resid,
            "discrepancies": [SIGN12_DISCREPANCY.__dict__],
        }
        out_dir = _emit(args, payload, filename="ode.json")
        if out_dir:
            rows = [(t, *s) for t, s in traj]
            write_csv(os.path.join(out_dir, "trajectory.csv"),
                      ("t", "A", "Adot", "B", "Bdot", "C", "Cdot"), rows)
        return 0 if drift <= args.tol else 1
    if args.system == "weierstrass":
        traj = weierstrass_trajectory(args.t1, args.E, args.A0, args.Adot0,
                                      steps=args.steps, t0=args.t0)
        drift = max(abs(first_integral(s[0], s[1]) - args.E) for _, s in traj)
        payload = {
            "system": "weierstrass",
            "t_span": [args.t0, args.t1],
            "steps": args.steps,
            "E": args.E,
            "A_final": traj[-1][1][0],
            "invariant_drift": drift,
        }
        out_dir = _emit(args, payload, filename="ode.json")
        if out_dir:
            rows = [(t, s[0], s[1]) for t, s in traj]
            write_csv(os.path.join(out_dir, "trajectory.csv"), ("t", "A", "Adot"), rows)
        return 0 if drift <= args.tol else 1
    raise UsageError(f"--system must be poly-ansatz or weierstrass, got {args.system!r}")


# ---------------------------------------------------------------------------
# parser plumbing

def _add_family_flags(p):
    p.add_argument("--family", required=True)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--c1", type=float, default=None)
    p.add_argument("--c2", type=float, default=None)
    p.add_argument("--v", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--branch", choices=("+", "-"), default=None)


def _add_common(p):
    p.add_argument("--out", default=None, help="JSON report path or output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", default=None, help="key = value file, # comments")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sdreduce",
        description="Verify, reconstruct and evolve the spherically reduced "
                    "self-dual equations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="sweep a residual over a grid")
    p.add_argument("--equation", required=True)
    _add_family_flags(p)
    p.add_argument("--grid", action="append",
                   help="[axis=]lo:hi:n; repeat for 2-D equations")
    p.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    p.add_argument("--mode-variant", choices=("corrected", "paper"),
                   default="corrected")
    p.add_argument("--tol", type=float, default=1e-8)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lift-check", help="fit the 4-D/2-D lift constants")
    p.add_argument("--which", required=True, choices=("plebanski", "sdym"))
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    _add_common(p)
    p.set_defaults(func=cmd_lift_check)

    p = sub.add_parser("reconstruct", help="alpha -> beta -> W -> p pipeline")
    _add_family_flags(p)
    p.add_argument("--grid", action="append", help="x=lo:hi:n and t=lo:hi:n")
    p.add_argument("--bracket", required=True, help="lo:hi for the hodograph root")
    p.add_argument("--y0", type=float, default=None)
    p.add_argument("--a0", type=float, default=0.0)
    p.add_argument("--b0", type=float, default=0.0)
    p.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    p.add_argument("--mode-variant", choices=("corrected", "paper"),
                   default="corrected")
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--gauge-tol", type=float, default=1e-6)
    _add_common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("evolve", help="leapfrog evolution of the alpha equation")
    _add_family_flags(p)
    p.add_argument("--grid", action="append", help="y=lo:hi:n")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--cfl", type=float, default=0.5)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--resolutions", default=None,
                   help="comma list; runs a convergence study instead")
    p.add_argument("--snapshot-every", type=int, default=None)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--allow-unstable", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("ode", help="coefficient-system and first-integral runs")
    p.add_argument("--system", required=True)
    p.add_argument("--sign12", default="oracle")
    p.add_argument("--state", default="-1,-2,2,0,0,0")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--E", type=float, default=0.0)
    p.add_argument("--A0", type=float, default=-1.0)
    p.add_argument("--Adot0", type=float, default=-2.0)
    p.add_argument("--tol", type=float, default=1e-8)
    _add_common(p)
    p.set_defaults(func=cmd_ode)
    return parser


def _inject_config(argv):
    """Expand --config key=value files into flags (CLI flags still win)."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise UsageError("--config needs a path")
    path = argv[idx + 1]
    if not os.path.isfile(path):
        raise UsageError(f"config file {path!r} not found")
    tokens = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{line_no}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            tokens.extend([f"--{key}", value])
    head = argv[:1]  # the subcommand
    tail = [a for k, a in enumerate(argv) if k > 0 and k not in (idx, idx + 1)]
    return head + tokens + tail


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and not argv[0].startswith("-"):
            argv = _inject_config(argv)
        args = build_parser().parse_args(argv)
        _validate_out(getattr(args, "out", None))
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain failure: {exc}", file=sys.stderr)
        return 4
    except GuardError as exc:
        print(f"guard violation: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
