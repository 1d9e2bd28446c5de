"""Command-line entry point: ``socioclimate <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 input parse / IO error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import serialize as sio
from .config import ConfigError, ModelParams, default_params, dump_config, load_config
from .coupled_tipping import (BracketError, beta_threshold, strong_norm_params,
                              monotonicity_violations, social_trigger_experiment)
from .emissions import EmissionDataError, ingest_historical, load_bundled
from .metrics import DEFAULT_THRESHOLD, compare
from .simulation import IntegrationError, run_pair, simulate
from .social import equilibria, psi, warming_cost
from .sweeps import (AxisSpec, apply_preset, run_sweep, sensitivity_tornado,
                     sensitivity_whitelist)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

# Interpretive choices surfaced next to the affected sensitivity rows.
SENSITIVITY_NOTES = {
    "climate.T0_abs": "initial temperature read as the absolute pre-industrial reference",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _d_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse d values {text!r}") from None
    if not values or any(not d > 1 for d in values):
        raise argparse.ArgumentTypeError("every d must be > 1")
    return values


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _add_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat section.field = value file")
    p.add_argument("--emissions", type=Path,
                   help="historical emission CSV (year,emission_gtc_per_year); bundled record if omitted")


def _load_inputs(args) -> tuple[ModelParams, object]:
    params = default_params()
    if args.config is not None:
        params = load_config(args.config.read_text(encoding="utf-8"))
    sch, proj = params.schedule, params.emission
    if args.emissions is not None:
        series = ingest_historical(args.emissions.read_text(encoding="utf-8"), sch.t_start, proj.t_pivot)
    else:
        series = load_bundled(sch.t_start, proj.t_pivot)
    return params, series


def cmd_simulate(args) -> int:
    params, series = _load_inputs(args)
    traj = simulate(params, series, args.variant)
    text = sio.trajectory_to_csv(traj) if args.format == "csv" else sio.trajectory_to_jsonl(traj)
    sio.write_text(args.out, text)
    return EXIT_OK


def cmd_compare(args) -> int:
    params, series = _load_inputs(args)
    params = apply_preset(params, args.preset)
    base, mod = run_pair(params, series)
    record = compare(base, mod, args.d, args.threshold, params.schedule.t_social_on)
    sio.write_text(args.out, json.dumps(sio.clean(record.to_dict()), indent=2) + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    params, series = _load_inputs(args)
    try:
        x_axis, y_axis = AxisSpec.parse(args.x), AxisSpec.parse(args.y)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if x_axis.path == y_axis.path:
        raise UsageError("--x and --y must name different parameters")
    params = apply_preset(params, args.preset)
    started = time.perf_counter()
    records = run_sweep(params, series, x_axis, y_axis, args.d, args.threshold,
                        args.preset or "custom", args.workers)
    wall = time.perf_counter() - started
    rows = [r.to_dict(args.d) for r in records]
    out = Path(args.out)
    sio.write_text(out, sio.encode_records(rows, args.format))
    failed = [(r.i, r.j, r.error) for r in records if r.error]
    manifest = {
        "command": "sweep",
        "x_axis": x_axis.to_dict(),
        "y_axis": y_axis.to_dict(),
        "preset": args.preset,
        "d_values": list(args.d),
        "threshold": args.threshold,
        "params_fingerprint": params.fingerprint(),
        "params": dump_config(params),
        "emissions": str(args.emissions) if args.emissions else "bundled",
        "workers": args.workers,
        "records": len(records),
        "failed": failed,
        "wall_time_s": wall,
        "output": str(out),
        "format": args.format,
    }
    sio.write_text(out.with_name(out.name + ".manifest.json"), json.dumps(manifest, indent=2) + "\n")
    if failed:
        print(f"{len(failed)} of {len(records)} grid points failed", file=sys.stderr)
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    if args.list_params:
        sio.write_text(args.out, "\n".join(sensitivity_whitelist()) + "\n")
        return EXIT_OK
    if not 0 < args.fraction < 1:
        raise UsageError("--fraction must lie in (0, 1)")
    params, series = _load_inputs(args)
    params = apply_preset(params, args.preset)
    records = sensitivity_tornado(params, series, args.fraction, args.sort_by, workers=args.workers)
    rows = [{**r.to_dict(), "fraction": args.fraction, "note": SENSITIVITY_NOTES.get(r.path, "")}
            for r in records]
    sio.write_text(args.out, sio.encode_records(rows, args.format))
    return EXIT_OK


def cmd_equilibria(args) -> int:
    if args.delta < 0:
        raise UsageError("--delta must be >= 0")
    params = default_params()
    if args.config is not None:
        params = load_config(args.config.read_text(encoding="utf-8"))
    value = psi(args.beta, args.temperature, params.social)
    report = equilibria(value, args.delta).to_dict()
    report.update({"beta": args.beta, "temperature": args.temperature,
                   "warming_cost": warming_cost(args.temperature, params.social)})
    sio.write_text(args.out, json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def cmd_trigger(args) -> int:
    params, series = _load_inputs(args)
    params = strong_norm_params(params).with_values({"social.delta": args.delta, "tipping.R_max": args.r_max})
    params = apply_preset(params, args.preset)
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    step = (args.beta_hi - args.beta_lo) / (args.n - 1)
    betas = [args.beta_lo + k * step for k in range(args.n)]
    records = social_trigger_experiment(params, series, betas, args.workers)
    result = {"records": [r.to_dict() for r in records],
              "monotonicity_violations": monotonicity_violations(records),
              "params_fingerprint": params.fingerprint(),
              "delta": args.delta, "R_max": args.r_max, "preset": args.preset}
    flips = [(a, b) for a, b in zip(records, records[1:]) if a.tipped_social != b.tipped_social]
    if flips:
        a, b = flips[0]
        result["threshold"] = beta_threshold(params, series, a.beta, b.beta, args.tol).to_dict()
    sio.write_text(args.out, json.dumps(sio.clean(result), indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="socioclimate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="integrate one variant and write its trajectory")
    _add_inputs(p)
    p.add_argument("--variant", choices=("baseline", "modified"), default="modified")
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="baseline vs modified metrics as one JSON record")
    _add_inputs(p)
    p.add_argument("--preset", choices=("high_risk", "low_risk"))
    p.add_argument("--d", type=_d_list, default=(1.1, 1.25, 1.5))
    p.add_argument("--threshold", type=_positive, default=DEFAULT_THRESHOLD)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="two-parameter grid of comparison metrics")
    _add_inputs(p)
    p.add_argument("--x", required=True, help="path:lo:hi:n")
    p.add_argument("--y", required=True, help="path:lo:hi:n")
    p.add_argument("--preset", choices=("high_risk", "low_risk"))
    p.add_argument("--d", type=_d_list, default=(1.1, 1.25, 1.5))
    p.add_argument("--threshold", type=_positive, default=DEFAULT_THRESHOLD)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("sensitivity", help="one-at-a-time +/- perturbation tornado")
    _add_inputs(p)
    p.add_argument("--fraction", type=float, default=0.05)
    p.add_argument("--preset", choices=("high_risk", "low_risk"))
    p.add_argument("--sort-by", choices=("peak_T", "auc_diff"), default="peak_T")
    p.add_argument("--list-params", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("equilibria", help="fixed points of the social model")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--temperature", type=float, required=True)
    p.add_argument("--config", type=Path)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_equilibria)

    p = sub.add_parser("trigger", help="beta scan for climate-triggered social tipping")
    _add_inputs(p)
    p.add_argument("--delta", type=float, default=3.0)
    p.add_argument("--r-max", type=float, default=5.0)
    p.add_argument("--preset", choices=("high_risk", "low_risk"), default="high_risk")
    p.add_argument("--beta-lo", type=float, default=0.0)
    p.add_argument("--beta-hi", type=float, default=5.0)
    p.add_argument("--n", type=int, default=21)
    p.add_argument("--tol", type=_positive, default=1e-3)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_trigger)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse: --help or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"socioclimate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # downstream reader closed early (e.g. `| head`); not an error
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except IntegrationError as exc:
        print(f"socioclimate: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, EmissionDataError, BracketError, OSError, ValueError) as exc:
        print(f"socioclimate: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
