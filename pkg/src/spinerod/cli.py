"""Command-line front end:  solve | sweep | converge | elongate.

Every command reads an optional scenario file (defaults apply when omitted),
applies the override flags, runs, and writes CSV next to a deterministic
structured-text report on stdout.  Output goes to --out, else the
SPINEROD_OUTDIR environment variable, else the working directory.  Exit
status is 0 only when every requested solve converged; scenario or solver
errors exit with status 2.

All numbers are serialized with repr(), so repeated runs on the same inputs
produce byte-identical files -- no timestamps, no machine-dependent text.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

from .errors import SpineRodError
from .scenario import (
    DEFAULT_GROUP,
    ResultRecord,
    Scenario,
    parse_scenario,
    solve_scenario,
)
from .solver import IntegrationConfig
from .studies import (
    CONVERGENCE_GRIDS,
    ELONGATION_PRESSURES,
    SPINE_LENGTHS,
    SWEEP_PRESSURES,
    convergence_study,
    elongation_study,
    sweep_records,
)

OUTDIR_ENV = "SPINEROD_OUTDIR"
CENTERLINE_HEADER = "s,px,py,pz,nx,ny,nz,mx,my,mz"
SWEEP_HEADER = "spine_length,pressure,tip_x,tip_y,tip_z,converged"


def _fmt(value: float) -> str:
    return repr(float(value))


def _float_list(raw: str) -> list[float]:
    try:
        return [float(tok) for tok in raw.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {raw!r}")


def _int_list(raw: str) -> list[int]:
    try:
        return [int(tok) for tok in raw.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}")


def _load_scenario(args) -> Scenario:
    if args.scenario is None:
        scenario = parse_scenario("")
    else:
        scenario = parse_scenario(Path(args.scenario).read_text())
    if args.no_gravity:
        scenario = dataclasses.replace(scenario, gravity_enabled=False)
    if args.tol is not None:
        scenario = dataclasses.replace(scenario, tol=args.tol)
    if args.max_iter is not None:
        scenario = dataclasses.replace(scenario, max_iter=args.max_iter)
    if args.grid_n is not None:
        cfg = IntegrationConfig(
            n_points=args.grid_n,
            reorthonormalize_every=scenario.integration.reorthonormalize_every,
        )
        scenario = dataclasses.replace(scenario, integration=cfg)
    return scenario


def _out_dir(args) -> Path:
    if args.out is not None:
        target = Path(args.out)
    elif os.environ.get(OUTDIR_ENV):
        target = Path(os.environ[OUTDIR_ENV])
    else:
        target = Path.cwd()
    target.mkdir(parents=True, exist_ok=True)
    return target


def _stem(args) -> str:
    return Path(args.scenario).stem if args.scenario is not None else "scenario"


def _write(path: Path, lines: list[str]) -> None:
    path.write_text("\n".join(lines) + "\n")


def _summary_lines(record: ResultRecord) -> list[str]:
    return [
        f"spine_length = {_fmt(record.spine_length)}",
        f"pressure = {_fmt(record.pressure)}",
        f"grid_n = {record.grid_n}",
        f"tip_x = {_fmt(record.tip_x)}",
        f"tip_y = {_fmt(record.tip_y)}",
        f"tip_z = {_fmt(record.tip_z)}",
        f"residual_norm = {_fmt(record.residual_norm)}",
        f"iterations = {record.iterations}",
        f"converged = {'yes' if record.converged else 'no'}",
        f"centerline = {record.centerline_path}",
    ]


def cmd_solve(args) -> int:
    scenario = _load_scenario(args)
    result = solve_scenario(scenario)
    out = _out_dir(args)
    centerline_path = out / f"{_stem(args)}_centerline.csv"
    rows = [CENTERLINE_HEADER]
    for st in result.centerline:
        rows.append(
            ",".join(
                _fmt(v)
                for v in (st.s, st.p[0], st.p[1], st.p[2],
                          st.n[0], st.n[1], st.n[2], st.m[0], st.m[1], st.m[2])
            )
        )
    _write(centerline_path, rows)
    record = ResultRecord.from_solve(scenario, result, centerline_path=centerline_path.name)
    summary = _summary_lines(record)
    _write(out / f"{_stem(args)}_summary.txt", summary)
    print("\n".join(summary))
    return 0 if result.converged else 1


def cmd_sweep(args) -> int:
    scenario = _load_scenario(args)
    records = sweep_records(
        scenario, pressures=args.pressures, spine_lengths=args.spines, group=args.group
    )
    out = _out_dir(args)
    rows = [SWEEP_HEADER]
    for r in records:
        rows.append(
            ",".join(
                (
                    _fmt(r.spine_length),
                    _fmt(r.pressure),
                    _fmt(r.tip_x),
                    _fmt(r.tip_y),
                    _fmt(r.tip_z),
                    "yes" if r.converged else "no",
                )
            )
        )
    path = out / f"{_stem(args)}_sweep.csv"
    _write(path, rows)
    converged = sum(r.converged for r in records)
    print(f"cells = {len(records)}")
    print(f"converged = {converged}")
    print(f"table = {path.name}")
    return 0 if converged == len(records) else 1


def cmd_converge(args) -> int:
    scenario = _load_scenario(args)
    study = convergence_study(scenario, grid_sizes=args.grid)
    out = _out_dir(args)
    rows = ["n,step,error,ratio"]
    print("n      step          error         ratio")
    for i, (n, h, e) in enumerate(zip(study.grid_sizes, study.step_sizes, study.errors)):
        ratio = study.ratios[i] if i < len(study.ratios) else float("nan")
        rows.append(f"{n},{_fmt(h)},{_fmt(e)},{_fmt(ratio)}")
        print(f"{n:<6d} {h:<13.6e} {e:<13.6e} {ratio:.4f}")
    print(f"estimated order = {_fmt(study.order)}")
    path = out / f"{_stem(args)}_convergence.csv"
    _write(path, rows)
    print(f"table = {path.name}")
    return 0


def cmd_elongate(args) -> int:
    scenario = _load_scenario(args)
    study = elongation_study(scenario, spine_lengths=args.spines, pressures=args.pressures)
    out = _out_dir(args)
    rows = ["spine_length,pressure,elongation"]
    for i, length in enumerate(study.spine_lengths):
        for j, pressure in enumerate(study.pressures):
            rows.append(f"{_fmt(length)},{_fmt(pressure)},{_fmt(study.elongation[i, j])}")
    path = out / f"{_stem(args)}_elongation.csv"
    _write(path, rows)
    for length, r2 in zip(study.spine_lengths, study.r_squared):
        print(f"r_squared[{_fmt(length)}] = {_fmt(r2)}")
    print(f"max_transverse = {_fmt(study.max_transverse)}")
    print(f"table = {path.name}")
    return 0 if study.all_converged else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinerod",
        description="Static rod solver for a pneumatic continuum robot with a stiffening spine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, scenario_required):
        if scenario_required:
            p.add_argument("scenario", help="scenario file (key = value text)")
        else:
            p.add_argument("scenario", nargs="?", default=None,
                           help="scenario file (key = value text); defaults when omitted")
        p.add_argument("--out", default=None,
                       help=f"output directory (default: ${OUTDIR_ENV} or the working directory)")
        p.add_argument("--no-gravity", action="store_true", help="disable distributed gravity")
        p.add_argument("--tol", type=float, default=None, help="shooting residual tolerance")
        p.add_argument("--max-iter", type=int, default=None, help="Newton iteration cap")
        p.add_argument("--grid-n", type=int, default=None, help="grid points along the rod")

    p_solve = sub.add_parser("solve", help="solve one scenario and write its centerline")
    add_common(p_solve, scenario_required=True)
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="tip deflection over a spine-length x pressure grid")
    add_common(p_sweep, scenario_required=False)
    p_sweep.add_argument("--pressures", type=_float_list, default=list(SWEEP_PRESSURES),
                         help="comma-separated chamber pressures in Pa, ascending")
    p_sweep.add_argument("--spines", type=_float_list, default=list(SPINE_LENGTHS),
                         help="comma-separated spine lengths in m")
    p_sweep.add_argument("--group", type=int, default=DEFAULT_GROUP,
                         help="chamber triplet to pressurize (0, 1, or 2)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_conv = sub.add_parser("converge", help="tip error versus grid refinement")
    add_common(p_conv, scenario_required=False)
    p_conv.add_argument("--grid", type=_int_list, default=list(CONVERGENCE_GRIDS),
                        help="comma-separated grid sizes, ascending, at least 3")
    p_conv.set_defaults(func=cmd_converge)

    p_elon = sub.add_parser("elongate", help="uniform-pressure elongation study")
    add_common(p_elon, scenario_required=False)
    p_elon.add_argument("--pressures", type=_float_list, default=list(ELONGATION_PRESSURES),
                        help="comma-separated uniform pressures in Pa")
    p_elon.add_argument("--spines", type=_float_list, default=list(SPINE_LENGTHS),
                        help="comma-separated spine lengths in m")
    p_elon.set_defaults(func=cmd_elongate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpineRodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
