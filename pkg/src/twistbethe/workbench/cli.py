"""Command-line entry point.

    twistbethe <experiment> --eta 2 --n 8..18:2 --boundary anti [--out DIR]
    twistbethe verify --level fast|full
    twistbethe fit --kind power-offset --input scan.csv --y e_b_over_cosh

Experiments write per-point JSON caches plus aggregated CSV/JSON (and SVG
for scans) into the output directory.  A JSON config file can supply any
field of the experiment configuration; explicit flags override it.

Exit codes: 0 success, 1 verification or solver failure, 2 bad config.
"""

from __future__ import annotations

import argparse
import json
import sys

from ..scaling import FitError, extrapolate, fit, fit_with_window
from .config import EXPERIMENTS, ConfigError, ExperimentConfig, load_config_file
from .emit import emit, parse_csv
from .runner import run
from .verify import verify

_PLOT_FIELDS = {
    "EdSpectrum": ("N", "e0"),
    "SolveHom": ("N", "energy"),
    "SolveInhom": ("N", "abs_defect"),
    "EinhScan": ("N", "e_inh_over_cosh"),
    "BoundaryEnergyScan": ("N", "e_b_over_cosh"),
    "GapScan": ("N", "gap_over_cosh"),
    "ChargeScan": ("N", "h2_inh"),
    "Thermo": ("eta", "e_b_over_cosh"),
    "Fit": ("N", "a"),
}


def _parse_n_list(text: str) -> list[int]:
    """Accept '4,6,8' or '8..18' or '8..18:2'."""
    text = text.strip()
    if ".." in text:
        span, _, step_s = text.partition(":")
        lo_s, _, hi_s = span.partition("..")
        try:
            lo, hi = int(lo_s), int(hi_s)
            step = int(step_s) if step_s else 1
        except ValueError:
            raise ConfigError(f"bad N range: {text!r}") from None
        if step <= 0 or hi < lo:
            raise ConfigError(f"bad N range: {text!r}")
        return list(range(lo, hi + 1, step))
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"bad N list: {text!r}") from None


def _parse_eta(text: str):
    try:
        vals = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"bad eta value: {text!r}") from None
    if not vals:
        raise ConfigError("empty eta list")
    return vals if len(vals) > 1 else vals[0]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistbethe",
        description="Bethe-ansatz workbench for the twisted XXZ chain")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in EXPERIMENTS:
        if name == "Fit":
            continue
        p = sub.add_parser(name, aliases=[name.lower()],
                           help=f"run the {name} experiment")
        p.add_argument("--eta", type=str, default=None,
                       help="crossing parameter, single value or comma list")
        p.add_argument("--n", type=str, default=None, metavar="LIST|RANGE",
                       help="chain sizes: '4,6,8' or '8..18:2'")
        p.add_argument("--boundary", type=str, default=None,
                       choices=["anti", "per", "antiperiodic", "periodic"])
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--force", action="store_true",
                       help="recompute cached points")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--config", type=str, default=None,
                       help="JSON config file; flags override its values")
        p.add_argument("--formats", type=str, default="csv,json,svg",
                       help="comma list out of csv,json,svg")
        p.set_defaults(experiment=name)

    pv = sub.add_parser("verify", help="run the self-check suite")
    pv.add_argument("--level", choices=["fast", "full"], default="fast")

    pf = sub.add_parser("fit", aliases=["Fit"], help="fit a scaling law to a CSV")
    pf.add_argument("--kind", required=True,
                    choices=["power", "power-offset", "exp", "exp-offset"])
    pf.add_argument("--input", required=True, help="CSV produced by a scan")
    pf.add_argument("--x", default="N", help="size column (default N)")
    pf.add_argument("--y", required=True, help="value column")
    pf.add_argument("--window", action="store_true",
                    help="drop small sizes outside the law before fitting")
    return parser


def _cmd_experiment(args) -> int:
    file_data = load_config_file(args.config) if args.config else {}
    overrides = {
        "experiment": args.experiment,
        "eta": _parse_eta(args.eta) if args.eta else None,
        "N_list": _parse_n_list(args.n) if args.n else None,
        "boundary": args.boundary,
        "output_dir": args.out,
        "seed": args.seed,
    }
    config = ExperimentConfig.from_dict(file_data, overrides)

    records = run(config, force=args.force, workers=args.workers)

    formats = [f.strip().lower() for f in args.formats.split(",") if f.strip()]
    x_field, y_field = _PLOT_FIELDS[config.experiment]
    written = []
    for fmt in formats:
        if fmt == "svg" and all(r.status != "ok" for r in records):
            continue
        written += emit(records, fmt, config.output_dir,
                        x_field=x_field, y_field=y_field)

    n_err = sum(r.status != "ok" for r in records)
    for rec in records:
        label = ", ".join(f"{k}={v}" for k, v in rec.params.items())
        if rec.status == "ok":
            body = ", ".join(f"{k}={v}" for k, v in rec.outputs.items())
            print(f"ok    {label}: {body}")
        else:
            print(f"error {label}: {rec.error}")
    for path in written:
        print(f"wrote {path}")
    if n_err:
        print(f"{n_err}/{len(records)} points failed", file=sys.stderr)
        return 1
    return 0


def _cmd_verify(args) -> int:
    report = verify(args.level)
    print(report.summary())
    return 0 if report.ok else 1


def _cmd_fit(args) -> int:
    try:
        rows = parse_csv(args.input)
    except FileNotFoundError:
        print(f"input not found: {args.input}", file=sys.stderr)
        return 2
    samples = []
    for row in rows:
        if str(row.get("status", "ok")) not in ("ok", ""):
            continue
        if args.y not in row or args.x not in row or row[args.y] == "":
            continue
        samples.append((int(float(row[args.x])), float(row[args.y])))
    if not samples:
        print(f"no usable rows with columns {args.x!r}, {args.y!r}",
              file=sys.stderr)
        return 2
    try:
        if args.window:
            result, used = fit_with_window(args.kind, samples)
        else:
            result, used = fit(args.kind, samples), samples
    except (FitError, ValueError) as exc:
        print(f"fit failed: {exc}", file=sys.stderr)
        return 1
    payload = {
        "kind": result.kind,
        "a": result.a,
        "b": result.b,
        "c": result.c,
        "rms_residual": result.rms_residual,
        "n_points": result.n_points,
    }
    if result.b < 0:
        payload["asymptote"] = extrapolate(result)
    print(json.dumps(payload, indent=2))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command in ("fit", "Fit"):
            return _cmd_fit(args)
        return _cmd_experiment(args)
    except ConfigError as exc:
        print(f"bad config: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
