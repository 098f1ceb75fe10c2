"""Command-line interface: ``timebell {analyze,montecarlo,neighborhood,synth,summary}``.

Exit codes: 0 success, 2 usage error, 3 data or I/O error, 4 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import InvariantBreach, TimeBellError
from .event_series import serialize, series_stats
from .report import (RunConfig, cmd_analyze, cmd_montecarlo, cmd_neighborhood,
                     cmd_summary, write_atomic)
from .resampler import DEFAULT_OFFSETS, DEFAULT_SEED, TauGrid
from .synthgen import KINDS, ProcessSpec, ecg_like, generate

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 2, 3, 4


def _int_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _triple(text):
    vals = _int_list(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected three offsets, got {text!r}")
    return tuple(vals)


def _add_synth_args(p):
    g = p.add_argument_group("synthetic process")
    g.add_argument("--kind", choices=KINDS)
    g.add_argument("--preset", choices=("ecg",),
                   help="gamma renewal stand-in: mean 829 ms, shape 25, ~4340 events")
    g.add_argument("--duration", type=int, help="ms")
    g.add_argument("--rate", type=float, help="events per ms (poisson)")
    g.add_argument("--period", type=int, help="ms (periodic, jittered_periodic)")
    g.add_argument("--jitter", type=float, default=0.0, help="jitter sd in ms")
    g.add_argument("--shape", type=float, help="gamma shape")
    g.add_argument("--scale", type=float, help="gamma scale in ms")
    g.add_argument("--synth-seed", type=int, default=0)


def _add_run_args(p):
    p.add_argument("--input", help="event file")
    p.add_argument("--format", default="cumulative",
                   choices=("cumulative", "intervals", "two-column"))
    p.add_argument("--tm", type=int, help="override the mean interval t_M (ms)")
    p.add_argument("--multiplier", type=int, default=3)
    p.add_argument("--partial-cycle", action="store_true",
                   help="keep a final anchor whose cycle runs past the record end")
    p.add_argument("--grid", type=_int_list, help="offsets for all three axes")
    for i in (1, 2, 3):
        p.add_argument(f"--grid{i}", type=_int_list, help=f"offsets for axis {i}")
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--delta", type=int, default=20)
    p.add_argument("--taus", type=_triple,
                   help="tau1,tau2-tM,tau3-2tM (default: argmax of the sweep)")
    p.add_argument("--shared-assignment", action="store_true",
                   help="reuse one assignment sequence for every combination")
    p.add_argument("--bins", type=int, default=30)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=".", help="output directory")
    _add_synth_args(p)


def build_parser():
    parser = argparse.ArgumentParser(prog="timebell", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
            ("analyze", "sweep the tau grid and write output1.txt"),
            ("montecarlo", "replicate random assignments and write output2.txt"),
            ("neighborhood", "Monte Carlo over the ±delta neighbors of a combination"),
            ("summary", "run analyze + montecarlo and write summary.txt")):
        _add_run_args(sub.add_parser(name, help=help_))
    p = sub.add_parser("synth", help="write a synthetic event series")
    _add_synth_args(p)
    p.add_argument("--output", required=True, help="series file to write")
    return parser


def synth_spec(args, parser):
    if args.preset == "ecg":
        spec = ecg_like(seed=args.synth_seed)
        if args.duration:
            spec = ProcessSpec(spec.kind, args.duration, shape=spec.shape,
                               scale=spec.scale, seed=spec.seed)
        return spec
    if args.kind is None:
        return None
    if args.duration is None:
        parser.error("--duration is required with --kind")
    try:
        return ProcessSpec(args.kind, args.duration, rate=args.rate, period=args.period,
                           jitter_sd=args.jitter, shape=args.shape, scale=args.scale,
                           seed=args.synth_seed)
    except ValueError as exc:
        parser.error(str(exc))


def run_config(args, parser) -> RunConfig:
    spec = synth_spec(args, parser)
    if (args.input is None) == (spec is None):
        parser.error("give exactly one of --input or a synthetic process (--kind/--preset)")
    default = args.grid or list(DEFAULT_OFFSETS)
    grid = TauGrid(args.grid1 or default, args.grid2 or default, args.grid3 or default)
    for name in ("reps", "multiplier", "workers", "bins"):
        if getattr(args, name) < 1:
            parser.error(f"--{name} must be >= 1")
    if args.delta < 0:
        parser.error("--delta must be >= 0")
    return RunConfig(
        input_path=args.input, format_hint=args.format.replace("-", "_"), synth=spec,
        t_M=args.tm, multiplier=args.multiplier, require_full_cycle=not args.partial_cycle,
        grid=grid, reps=args.reps, seed=args.seed, delta=args.delta,
        shared_assignment=args.shared_assignment, taus=args.taus, bins=args.bins,
        workers=args.workers, out_dir=args.out)


def cmd_synth(args, parser, echo=print):
    spec = synth_spec(args, parser)
    if spec is None:
        parser.error("synth needs --kind or --preset")
    series = generate(spec)
    write_atomic(Path(args.output), serialize(series))
    st = series_stats(series)
    echo(f"wrote {st.count} events to {args.output}: duration {st.duration} ms, "
         f"t_M {st.t_M} ms")
    return series


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        if args.command == "synth":
            cmd_synth(args, parser)
            return EXIT_OK
        config = run_config(args, parser)
        {"analyze": cmd_analyze, "montecarlo": cmd_montecarlo,
         "neighborhood": cmd_neighborhood, "summary": cmd_summary}[args.command](config)
    except (TimeBellError, OSError) as exc:
        print(f"timebell: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (InvariantBreach, AssertionError) as exc:
        print(f"timebell: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        # parameter errors not tied to a data error class
        print(f"timebell: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK
