"""Command-line interface: roots, synthesize, simulate, verify, sweep.

Exit codes: 0 success, 2 configuration or usage error, 3 numerical failure
(degenerate roots, singular moment system, horizon overflow), 4 verification
failure.  All delimited output uses fixed documented headers; --figures DIR
additionally renders matplotlib summaries of the same data as PNG files.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .charroots import find_roots, residue_identity
from .config import RunConfig, parse_config
from .errors import (
    BracketFailure,
    ConfigError,
    DegenerateRoots,
    HorizonOverflow,
    MemwaveError,
    SingularSystem,
)
from .serialize import read_plan, write_csv, write_json, write_plan
from .simulate import invariant_drift, simulate_mode
from .synthesis import find_time_for_bound, synthesize
from .verify import report_to_dict, verify_plan

NUMERICAL_ERRORS = (DegenerateRoots, SingularSystem, HorizonOverflow, BracketFailure)


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _figdir(args) -> str | None:
    d = getattr(args, "figures", None)
    if d:
        os.makedirs(d, exist_ok=True)
    return d


def cmd_roots(args) -> int:
    cfg = parse_config(args.config)
    k, basis = cfg.kernel, cfg.basis
    n_q = k.n_terms - 1
    header = ["n", "alpha", "mu", "nu"] + [f"q_{i + 1}" for i in range(n_q)] + [
        "paper_residue_sum",
        "corrected_residue_sum",
    ]
    all_roots = [find_roots(k, basis.alphas[i], n=i + 1) for i in range(basis.n_modes)]
    rows = []
    for r in all_roots:
        paper, corrected = residue_identity(r)
        rows.append(
            [r.n, r.alpha, r.mu if r.mu is not None else float("nan"),
             r.nu if r.nu is not None else float("nan")]
            + list(r.q)
            + [paper.real, abs(corrected)]
        )
    stream, close = _open_output(args.output)
    try:
        write_csv(stream, header, rows)
    finally:
        if close:
            stream.close()
    figdir = _figdir(args)
    if figdir:
        from .figures import save_roots_figure

        save_roots_figure(all_roots, os.path.join(figdir, "roots.png"))
    return 0


def _synthesize_from_config(cfg: RunConfig, T: float):
    return synthesize(
        cfg.kernel, cfg.basis, cfg.initial, T, cfg.scheme, tail_beta=cfg.random_beta
    )


def cmd_synthesize(args) -> int:
    cfg = parse_config(args.config)
    if args.horizon is not None:
        plan = _synthesize_from_config(cfg, args.horizon)
    else:
        _, plan, _ = find_time_for_bound(
            cfg.kernel, cfg.basis, cfg.initial, args.bound, cfg.scheme,
            tail_beta=cfg.random_beta,
        )
    write_plan(args.output, plan)
    print(
        f"plan written to {args.output}: scheme={plan.scheme} T={plan.T:g} "
        f"modes={plan.n_max} bound={plan.global_bound:.6g}",
        file=sys.stderr,
    )
    return 0


def cmd_simulate(args) -> int:
    cfg = parse_config(args.config)
    plan = read_plan(args.plan)
    _check_plan(cfg, plan)
    T = plan.T
    dt = cfg.dt if cfg.dt is not None else T / 20000.0
    t_end = T if args.t_end is None else args.t_end
    sample_every = max(1, round((t_end / dt) / args.samples))
    k = cfg.kernel
    header = (
        ["t", "n", "theta", "dtheta", "u", "invariant_drift"]
        + [f"w_{i + 1}" for i in range(k.n_terms)]
    )
    rows = []
    traces = []
    for i in range(cfg.basis.n_modes):
        mc = plan.modal[i]
        tr = simulate_mode(
            k, cfg.basis.alphas[i], cfg.initial.phi0[i], cfg.initial.phi1[i],
            mc, t_end, dt, mode=i + 1, sample_every=sample_every,
        )
        drift = invariant_drift(tr, k, cfg.basis.alphas[i], mc)
        traces.append(tr)
        for j, t in enumerate(tr.times):
            rows.append(
                [float(t), tr.mode, float(tr.theta[j]), float(tr.dtheta[j]),
                 float(tr.u[j]), drift] + [float(v) for v in tr.w[j]]
            )
    stream, close = _open_output(args.output)
    try:
        write_csv(stream, header, rows)
    finally:
        if close:
            stream.close()
    figdir = _figdir(args)
    if figdir:
        from .figures import save_trace_figure

        shown = traces[: min(6, len(traces))]
        save_trace_figure(shown, os.path.join(figdir, "trace.png"))
    return 0


def _check_plan(cfg: RunConfig, plan) -> None:
    from .serialize import basis_fingerprint, kernel_fingerprint

    if plan.kernel_fp != kernel_fingerprint(cfg.kernel):
        raise ConfigError("plan kernel fingerprint does not match the config")
    if plan.basis_fp != basis_fingerprint(cfg.basis):
        raise ConfigError("plan basis fingerprint does not match the config")
    if plan.n_max != cfg.modes:
        raise ConfigError("plan mode count does not match the config")
    if plan.scheme != cfg.scheme:
        raise ConfigError("plan scheme does not match the config")


def cmd_verify(args) -> int:
    cfg = parse_config(args.config)
    plan = read_plan(args.plan)
    _check_plan(cfg, plan)
    report = verify_plan(
        cfg.kernel, cfg.basis, cfg.initial, plan,
        dt=cfg.dt, post_horizon_factor=cfg.post_horizon_factor,
    )
    write_json(args.output, report_to_dict(report))
    print(
        f"report written to {args.output}: passed={report.passed} "
        f"field_max={report.sampled_field_max:.6g} bound={report.global_bound:.6g}",
        file=sys.stderr,
    )
    figdir = _figdir(args)
    if figdir:
        from .figures import save_field_figure, save_verify_figure
        from .synthesis import sample_control_field

        save_verify_figure(report, os.path.join(figdir, "verify_residuals.png"))
        if cfg.basis.kind == "interval":
            ts = np.linspace(0.0, plan.T, 256)
            xs = np.linspace(0.0, np.pi, 256)
            field = sample_control_field(plan, cfg.basis, ts, xs)
            save_field_figure(field, plan.T, os.path.join(figdir, "verify_field.png"))
    return 0 if report.passed else 4


def cmd_sweep(args) -> int:
    cfg = parse_config(args.config)
    horizons = [float(v) for v in args.horizons.split(",") if v.strip()]
    if not horizons:
        raise ConfigError("--horizons: expected a comma-separated list of times")
    rows = []
    for T in horizons:
        plan = _synthesize_from_config(cfg, T)
        report = verify_plan(
            cfg.kernel, cfg.basis, cfg.initial, plan,
            dt=cfg.dt, post_horizon_factor=cfg.post_horizon_factor,
        )
        resid = max(
            max(abs(m.terminal_theta), abs(m.terminal_dtheta)) for m in report.modes
        )
        rows.append([T, plan.global_bound, resid])
    stream, close = _open_output(args.output)
    try:
        write_csv(stream, ["T", "global_bound", "max_terminal_residual"], rows)
    finally:
        if close:
            stream.close()
    figdir = _figdir(args)
    if figdir:
        from .figures import save_sweep_figure

        save_sweep_figure(rows, os.path.join(figdir, "sweep_bound.png"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memwave",
        description="bounded null controls for the wave equation with exponential memory",
    )
    parser.add_argument("--version", action="version", version=f"memwave {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="per-mode characteristic roots as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--output", default=None, help="CSV path (default stdout)")
    p.add_argument("--figures", default=None, help="directory for PNG figures")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("synthesize", help="solve the moment problems and write a plan")
    p.add_argument("--config", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--horizon", type=float, help="fixed horizon T")
    group.add_argument("--bound", type=float, help="search the horizon meeting this bound")
    p.add_argument("--output", default="plan.json")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("simulate", help="integrate the plan and emit the trace CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--output", default=None, help="CSV path (default stdout)")
    p.add_argument("--t-end", type=float, default=None, dest="t_end")
    p.add_argument("--samples", type=int, default=2000, help="approx samples per mode")
    p.add_argument("--figures", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="certify a plan against the time-domain oracle")
    p.add_argument("--config", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--output", default="report.json")
    p.add_argument("--figures", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="bound and terminal residual across horizons")
    p.add_argument("--config", required=True)
    p.add_argument("--horizons", required=True, help="comma-separated horizon list")
    p.add_argument("--output", default=None, help="CSV path (default stdout)")
    p.add_argument("--figures", default=None)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"memwave: config error: {exc}", file=sys.stderr)
        return 2
    except NUMERICAL_ERRORS as exc:
        print(f"memwave: numerical failure: {exc}", file=sys.stderr)
        return 3
    except MemwaveError as exc:
        print(f"memwave: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
