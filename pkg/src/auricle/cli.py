"""Command-line entry points: synthesize, evaluate, report."""

import argparse
import sys

from .evaluate import evaluate_tree, read_rows_csv, write_rows_csv
from .hrir import load_hrir_database
from .metrics import MetricConfig
from .report import aggregate_medians, bin_by_angle, write_report
from .scene import synthesize_dataset

__all__ = ["run_cli", "main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="auricle",
        description="Binaural scene synthesis and spatial-fidelity evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    syn = sub.add_parser("synthesize", help="binauralize a stem dataset tree")
    syn.add_argument("--musdb", required=True, help="dataset root with train/ and/or test/ song dirs")
    syn.add_argument("--hrir", required=True, help="HRIR directory (azi_<deg>_ele_0.wav files or index.json)")
    syn.add_argument("--out", required=True, help="output root; mirrors the input layout")
    syn.add_argument("--seed", required=True, type=int, help="master seed for source placement")
    syn.add_argument("--encoding", choices=["float32", "pcm16"], default="float32")
    syn.add_argument("--split", choices=["train", "test", "both"], default="both")

    ev = sub.add_parser("evaluate", help="compute spatial metrics for estimated stems")
    ev.add_argument("--reference", required=True, help="reference tree (with layout.json when synthesized)")
    ev.add_argument("--estimates", required=True, help="estimate tree mirroring the reference layout")
    ev.add_argument("--out", required=True, help="per-(track, stem) metrics CSV to write")
    ev.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    ev.add_argument("--itd-frame", type=float, default=0.5, help="ITD frame length in s (hop equals it)")
    ev.add_argument("--itd-threshold", type=float, default=5e-4, help="silent-frame RMS threshold")
    ev.add_argument("--max-lag-ms", type=float, default=1.0, help="GCC-PHAT lag search range in ms")
    ev.add_argument("--ssr-window", type=float, default=1.0, help="SSR/SRR frame length in s")
    ev.add_argument("--ssr-hop", type=float, default=0.5, help="SSR/SRR hop in s")
    ev.add_argument("--proj-max-delay-ms", type=float, default=1.0, help="projection delay search range in ms")
    ev.add_argument("--tukey-alpha", type=float, default=0.5, help="Tukey taper for ITD frames")

    rep = sub.add_parser("report", help="aggregate a metrics CSV into tables")
    rep.add_argument("--in", dest="input", required=True, help="metrics CSV from 'evaluate'")
    rep.add_argument("--out", required=True, help="rendered report path")
    rep.add_argument("--format", choices=["csv", "markdown"], default="csv")
    rep.add_argument("--by-angle", action="store_true", help="add per-azimuth-bin boxplot rows")
    rep.add_argument("--full-precision", action="store_true", help="full floats instead of 2 decimals")
    return parser


def run_cli(argv) -> int:
    """Run one subcommand; returns the process exit code."""
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.command == "synthesize":
            db = load_hrir_database(args.hrir)
            manifests = synthesize_dataset(
                args.musdb, db, args.out, args.seed, encoding=args.encoding, split=args.split
            )
            print(f"synthesized {len(manifests)} tracks into {args.out}")
        elif args.command == "evaluate":
            cfg = MetricConfig(
                itd_frame_len=args.itd_frame,
                itd_hop=args.itd_frame,
                tukey_alpha=args.tukey_alpha,
                silence_threshold=args.itd_threshold,
                max_lag=args.max_lag_ms / 1000.0,
                ssr_window=args.ssr_window,
                ssr_hop=args.ssr_hop,
                proj_max_delay=args.proj_max_delay_ms / 1000.0,
            )
            rows = evaluate_tree(args.reference, args.estimates, cfg, jobs=args.jobs)
            write_rows_csv(rows, args.out)
            print(f"wrote {len(rows)} rows to {args.out}")
        elif args.command == "report":
            rows = read_rows_csv(args.input)
            report = aggregate_medians(rows)
            if args.by_angle:
                report.by_angle = bin_by_angle(rows)
            write_report(report, args.format, args.out, full_precision=args.full_precision)
            print(f"wrote {args.format} report to {args.out}")
    except Exception as exc:  # surface a diagnostic, never a traceback-free silent failure
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
