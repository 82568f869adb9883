"""Command-line front end.

Commands: profile, synth, feasibility, simulate, raytrace. Each takes
--config FILE or --preset NAME, plus repeatable --set KEY=VALUE overrides
("--set synthesis.theta_dc_over_pi=-0.44") and --out DIR to redirect the
output directory.

Exit codes: 0 success, 1 configuration error, 2 synthesis infeasible,
3 hot-cell budget exceeded, 4 simulation or verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, load_raw_config, validate_config
from .csvio import write_csv, write_json
from .metrics import (
    AlcubierreParams,
    KerrExtremeParams,
    ProfileDomainError,
    ProfileEvaluationError,
    alcubierre_profile,
    kerr_extreme_profile,
)
from .synthesis import (
    ArccosInfeasible,
    HotCellBudgetExceeded,
    NegativeSpeedSquared,
    Status,
    SynthesisFailed,
    WindowViolation,
    dc_feasibility_boundary,
    feasibility_scan,
    godel_max_radius,
    kerr_forbidden_band,
    synthesize_program,
)
from .wavelab import (
    CflViolation,
    FrontNotFound,
    SingularInductance,
    StabilityViolation,
    trace_null_geodesic,
    verify_program,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_HOT_BUDGET = 3
EXIT_SIMULATION = 4

PROGRAM_COLUMNS = (
    "cell_index",
    "time_index",
    "r",
    "t",
    "theta_dc",
    "theta_ac",
    "theta_total",
    "ctilde_sq",
    "status",
)


def _outdir(run: RunConfig) -> Path:
    return Path(run.output.directory)


def cmd_profile(run: RunConfig) -> int:
    if run.sampling is None:
        raise ConfigError("sampling", "required block for the profile command")
    profile = run.profile()
    rows = []
    for t in run.sampling.t:
        s = np.asarray(profile.speed_sq(run.sampling.r, float(t)), dtype=float)
        rows.extend((float(r), float(t), float(v)) for r, v in zip(run.sampling.r, s))
    path = write_csv(_outdir(run) / "profile.csv", ("r", "t", "ctilde_sq"), rows, run.hash)
    print(f"wrote {path}")
    return EXIT_OK


def _program_rows(program):
    for i in range(program.n_cells):
        for j, t in enumerate(program.times):
            yield (
                i,
                j,
                float(program.cell_coords[i]),
                float(t),
                program.theta_dc,
                float(program.theta_ac[i, j]),
                float(program.theta_total[i, j]),
                float(program.speed_sq[i, j]),
                int(program.annotations[i, j]),
            )


def _synthesize_from_config(run: RunConfig, time_samples=None):
    s = run.synthesis
    if s.coord_window is None:
        raise ConfigError("synthesis.coord_window", "required for this command")
    profile = run.profile()
    times = s.time_samples if time_samples is None else time_samples
    program = synthesize_program(profile, s.theta_dc, s.array, s.coord_window, times)
    return profile, program


def cmd_synth(run: RunConfig) -> int:
    out = _outdir(run)
    try:
        _, program = _synthesize_from_config(run)
    except (SynthesisFailed, HotCellBudgetExceeded) as exc:
        payload = {"feasible": False, "reason": str(exc)}
        if isinstance(exc, SynthesisFailed):
            payload.update(cell=exc.cell, time_index=exc.time_index, status=exc.status.name.lower())
            code = EXIT_INFEASIBLE
        else:
            payload.update(time_index=exc.time_index, hot_cells=exc.count, budget=exc.budget)
            code = EXIT_HOT_BUDGET
        path = write_json(out / "synth_failure.json", payload, run.hash)
        print(f"synthesis failed ({payload['reason']}); wrote {path}")
        return code
    counts = {status.name.lower(): int(np.count_nonzero(program.annotations == int(status))) for status in Status}
    summary = {
        "feasible": True,
        "n_cells": program.n_cells,
        "n_times": len(program.times),
        "theta_dc": program.theta_dc,
        "background_c": program.background_c,
        "c0": program.c0,
        "coord_window": list(program.coord_window),
        "hot_cells_per_time": [int(x) for x in program.hot_cell_counts()],
        "status_counts": counts,
    }
    csv_path = write_csv(out / "program.csv", PROGRAM_COLUMNS, _program_rows(program), run.hash)
    json_path = write_json(out / "synth_summary.json", summary, run.hash)
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    return EXIT_OK


def _fig_profiles(run: RunConfig):
    """Profile family, grids and analytic boundary rows for one scan."""
    fz = run.feasibility
    if fz is None:
        raise ConfigError("feasibility", "required block for the feasibility command")
    metric = run.metric
    dc = fz.theta_dc_values
    r = fz.r_values
    if fz.figure == "fig1":
        if metric["kind"] != "alcubierre":
            raise ConfigError("metric.kind", "fig1 needs an alcubierre metric")
        vs_values = fz.vs_values if fz.vs_values is not None else np.array([0.5, 1.0, 1.5])
        if dc is None:
            dc = np.linspace(-0.4999 * math.pi, 0.0, 512)
        if r is None:
            r = np.array([float(metric.get("x_s0", 0.0))])
        base = run.profile().params
        profiles = [
            (float(v), alcubierre_profile(replace(base, vs_over_c=float(v))))
            for v in vs_values
        ]
        boundary = (
            ("vs_over_c", "theta_dc_min"),
            [(float(v), dc_feasibility_boundary((1.0 + float(v)) ** 2)) for v in vs_values],
        )
        return "vs_over_c", profiles, dc, r, boundary
    if fz.figure == "fig2":
        if metric["kind"] != "godel":
            raise ConfigError("metric.kind", "fig2 needs a godel metric")
        if dc is None:
            dc = np.array([0.1, 0.2, 0.3, 1.0 / 3.0, 0.4, 0.45]) * math.pi
        if r is None:
            r = np.linspace(0.0, 6.0, 301)
        a = float(metric["a"])
        profiles = [(a, run.profile())]
        dense = np.linspace(0.005 * math.pi, 0.4999 * math.pi, 400)
        boundary = (
            ("theta_dc", "r_max_over_2a"),
            [(float(d), godel_max_radius(float(d))) for d in dense],
        )
        return "a", profiles, dc, r, boundary
    if fz.figure == "fig3":
        if metric["kind"] != "kerr_extreme":
            raise ConfigError("metric.kind", "fig3 needs a kerr_extreme metric")
        thetas = fz.theta_values if fz.theta_values is not None else np.array([0.0, 0.25, 0.5]) * math.pi
        if dc is None:
            dc = np.array([0.0])
        if r is None:
            r = np.linspace(0.01, 4.0, 400)
        M = float(metric["mass_M"])
        profiles = [
            (float(th), kerr_extreme_profile(KerrExtremeParams(mass_M=M, theta=float(th))))
            for th in thetas
        ]
        rows = []
        for th in thetas:
            band = kerr_forbidden_band(float(th), M)
            lo, hi = band if band is not None else (math.nan, math.nan)
            rows.append((float(th), lo, hi))
        boundary = (("theta", "r_forbidden_low", "r_forbidden_high"), rows)
        return "theta", profiles, dc, r, boundary
    # custom scan over the configured metric
    profiles = [(0.0, run.profile())]
    return "metric", profiles, dc, r, None


def cmd_feasibility(run: RunConfig) -> int:
    out = _outdir(run)
    param_name, profiles, dc, r, boundary = _fig_profiles(run)
    report = feasibility_scan(profiles, dc, r, run.array_config(), param_name=param_name)
    path = write_csv(
        out / "feasibility.csv",
        ("param_1", "param_2", "r", "status_code", "theta_total_or_nan"),
        report.rows(),
        run.hash,
    )
    print(f"wrote {path}")
    if boundary is not None:
        columns, rows = boundary
        bpath = write_csv(out / "boundary.csv", columns, rows, run.hash)
        print(f"wrote {bpath}")
    return EXIT_OK


def cmd_simulate(run: RunConfig) -> int:
    if run.simulation is None:
        raise ConfigError("simulation", "required block for the simulate command")
    out = _outdir(run)
    spec = run.simulation
    profile = run.profile()
    # feasibility must hold over the whole run for a moving profile
    times = run.synthesis.time_samples
    if profile.time_dependent:
        times = np.linspace(0.0, spec.t_end, 17)
    try:
        profile, program = _synthesize_from_config(run, time_samples=times)
    except (SynthesisFailed, HotCellBudgetExceeded) as exc:
        payload = {"feasible": False, "reason": str(exc)}
        path = write_json(out / "synth_failure.json", payload, run.hash)
        print(f"refusing to simulate: {exc}; wrote {path}")
        return EXIT_HOT_BUDGET if isinstance(exc, HotCellBudgetExceeded) else EXIT_INFEASIBLE
    report = verify_program(program, profile, run.array_config(), spec)
    for solver, snaps in report.snapshots.items():
        rows = (
            (float(s.time), float(rr), float(v))
            for s in snaps
            for rr, v in zip(s.r, s.values)
        )
        path = write_csv(out / f"snapshots_{solver}.csv", ("t", "r", "value"), rows, run.hash)
        print(f"wrote {path}")
    jpath = write_json(out / "verification.json", report.to_dict(), run.hash)
    print(f"wrote {jpath}")
    worst = max((res.max_rel_deviation for res in report.solvers.values()), default=math.nan)
    verdict = "PASS" if report.passed else "FAIL"
    print(f"verification: {verdict} (max relative deviation {worst:.4f}, tolerance {report.tolerance})")
    return EXIT_OK if report.passed else EXIT_SIMULATION


def cmd_raytrace(run: RunConfig) -> int:
    if run.rays is None:
        raise ConfigError("rays", "required block for the raytrace command")
    profile = run.profile()
    rows = []
    for idx, launch in enumerate(run.rays):
        path = trace_null_geodesic(
            profile,
            launch.background_c,
            r0=launch.r0,
            t0=launch.t0,
            direction=launch.direction,
            t_end=launch.t_end,
            dt=launch.dt,
        )
        rows.extend(
            (idx, launch.direction, float(t), float(r), path.status)
            for t, r in zip(path.t, path.r)
        )
    out = write_csv(
        _outdir(run) / "rays.csv",
        ("launch_index", "direction", "t", "r", "status"),
        rows,
        run.hash,
    )
    print(f"wrote {out}")
    return EXIT_OK


COMMANDS = {
    "profile": (cmd_profile, "sample the speed profile over an (r, t) grid"),
    "synth": (cmd_synth, "synthesize the flux program for the configured window"),
    "feasibility": (cmd_feasibility, "scan feasibility over a parameter grid"),
    "simulate": (cmd_simulate, "synthesize, simulate and verify against the ray oracle"),
    "raytrace": (cmd_raytrace, "integrate null characteristics"),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxline",
        description="Flux programs for a SQUID-array transmission line mimicking curved-section light propagation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (fn, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--preset", help="named built-in configuration")
        p.add_argument("--out", help="override output directory")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config field by dotted path (repeatable)",
        )
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = list(args.set)
    if args.out is not None:
        overrides.append(f"output.directory={args.out}")
    try:
        raw = load_raw_config(args.config, args.preset, overrides)
        run = validate_config(raw)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(run)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HotCellBudgetExceeded as exc:
        print(f"hot-cell budget exceeded: {exc}", file=sys.stderr)
        return EXIT_HOT_BUDGET
    except (SynthesisFailed, NegativeSpeedSquared, ArccosInfeasible, WindowViolation) as exc:
        print(f"synthesis infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (CflViolation, StabilityViolation, SingularInductance, FrontNotFound) as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    except (ProfileDomainError, ProfileEvaluationError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
