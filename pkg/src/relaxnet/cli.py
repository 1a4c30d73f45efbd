"""Command line interface: ``run``, ``converge`` and ``presets``.

Exit codes: 0 success, 2 configuration error, 3 solver abort.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .diagnostics import convergence_study
from .driver import CANAL_SPEEDS, GLOBAL_SPEED, simulate
from .junction import JunctionError
from .models import ConfigurationError
from .network import CLASSICAL, ENERGY, PRESSURE, RELAXATION
from .output import plot_snapshot, write_convergence, write_run
from .presets import PRESETS, get_preset
from .relaxation import SolverAbort
from .riemann import RegimeError, VacuumError
from .scenario import build_network, load_scenario

OUTPUT_ENV = "RELAXNET_OUTPUT_DIR"
EXIT_OK, EXIT_CONFIG, EXIT_ABORT = 0, 2, 3

log = logging.getLogger("relaxnet")


def resolve_scenario(name: str):
    """A preset name or a path to a scenario file."""
    if name in PRESETS:
        return get_preset(name)
    if Path(name).exists():
        return load_scenario(name)
    raise ConfigurationError(f"{name!r} is neither a preset nor a scenario file")


def output_dir(arg, scenario_name: str) -> Path:
    if arg:
        return Path(arg)
    base = os.environ.get(OUTPUT_ENV)
    return Path(base) / scenario_name if base else Path("relaxnet-output") / scenario_name


def _dx_list(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dx list {text!r}") from None
    if not vals or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("dx values must be positive")
    return vals


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relaxnet", description="Relaxation finite-volume solver on canal networks.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a scenario and write CSV snapshots")
    run.add_argument("scenario", help="preset name or scenario file")
    run.add_argument("--dx", type=float)
    run.add_argument("--T", type=float)
    run.add_argument("--cfl", type=float)
    run.add_argument("--out")
    run.add_argument("--junction", choices=(RELAXATION, CLASSICAL))
    run.add_argument("--condition", choices=(PRESSURE, ENERGY))
    run.add_argument("--threads", type=_positive_int, default=None,
                     help="accepted for compatibility; the engine is vectorised and single-threaded")
    run.add_argument("--speeds", choices=(CANAL_SPEEDS, GLOBAL_SPEED), default=CANAL_SPEEDS)
    run.add_argument("--plot", action="store_true", help="also write SVG plots")

    conv = sub.add_parser("converge", help="L1 convergence study against the exact junction Riemann solution")
    conv.add_argument("scenario")
    conv.add_argument("--dx-list", type=_dx_list, required=True)
    conv.add_argument("--T", type=float)
    conv.add_argument("--cfl", type=float)
    conv.add_argument("--out")

    pre = sub.add_parser("presets", help="list built-in scenarios")
    pre.add_argument("--show", metavar="NAME", help="print one preset's details")
    return p


def cmd_run(args) -> int:
    cfg = resolve_scenario(args.scenario).with_overrides(
        dx=args.dx, T=args.T, cfl=args.cfl, strategy=args.junction, mode=args.condition)
    net = build_network(cfg)
    out = output_dir(args.out, cfg.name)
    report = simulate(net, cfg.T, cfg.cfl, cfg.output_times, speed_mode=args.speeds, scenario=cfg.name)
    write_run(report, net, out)
    if args.plot:
        for k, snap in enumerate(report.snapshots):
            plot_snapshot(snap, net.model, out, k)
    print(f"{cfg.name}: {report.steps} steps, t = {report.final_time:.6g}, "
          f"mass {report.monitor[0]['mass']:.12g} -> {report.monitor[-1]['mass']:.12g}; output in {out}")
    return EXIT_OK


def cmd_converge(args) -> int:
    cfg = resolve_scenario(args.scenario)
    report = convergence_study(cfg, args.dx_list, T=args.T, cfl=args.cfl)
    out = output_dir(args.out, cfg.name + "-convergence")
    out.mkdir(parents=True, exist_ok=True)
    write_convergence(report, out)
    keys = list(report.convergence[0].errors)
    print("dx        " + "  ".join(f"{name}[{cid}] err   order " for cid, name in keys))
    for row in report.convergence:
        cells = []
        for k in keys:
            o = row.orders[k]
            cells.append(f"{row.errors[k]:.4e} {'   -  ' if o is None else f'{o:6.3f}'}")
        print(f"{row.dx:<9.5g} " + "  ".join(cells))
    print(f"written {out / 'convergence.csv'}")
    return EXIT_OK


def cmd_presets(args) -> int:
    if args.show:
        cfg = get_preset(args.show)
        print(f"{cfg.name}: {cfg.description}")
        print(f"  model {cfg.model} {cfg.model_params}; T = {cfg.T}, dx = {cfg.dx}, cfl = {cfg.cfl}")
        for c in cfg.canals:
            print(f"  canal {c.id}: length {c.length}, width {c.width}, offset {c.x_offset}, ends {c.boundary}")
        for j in cfg.junctions:
            print(f"  junction {j.id}: in {j.incoming} out {j.outgoing} ({j.mode}, {j.strategy})")
        if cfg.notes:
            print(f"  notes: {cfg.notes}")
        return EXIT_OK
    for name, factory in PRESETS.items():
        print(f"{name:26s} {factory().description}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": cmd_run, "converge": cmd_converge, "presets": cmd_presets}[args.command]
    try:
        return handler(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverAbort, JunctionError, RegimeError, VacuumError) as exc:
        print(f"solver abort: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
