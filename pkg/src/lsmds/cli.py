"""Command-line surface for the benchmark pipeline.

Subcommands mirror the pipeline stages::

    lsmds generate   --config cfg.json        # synthesize and split names
    lsmds distmatrix --config cfg.json        # reference edit-distance matrix
    lsmds embed      --config cfg.json        # fit the reference configuration
    lsmds landmarks  --config cfg.json        # select landmark sets per grid L
    lsmds ose        --config cfg.json --method optimize [--count L]
    lsmds benchmark  --config cfg.json        # full grid sweep -> benchmark.csv
    lsmds evaluate   --config cfg.json --method neural [--count L]

Every stage accepts ``--config`` (JSON, all keys optional; see
``pipeline.CONFIG_SCHEMA``) plus flag overrides. The ``LSMDS_OUT_DIR``
environment variable overrides the output directory only.

Exit codes: 0 success, 2 invalid configuration or input, 3 missing artifact,
4 numerical failure, 5 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from . import pipeline
from .errors import NumericalFailureError

__all__ = ["main"]

EXIT_VALIDATION = 2
EXIT_MISSING_ARTIFACT = 3
EXIT_NUMERICAL = 4
EXIT_IO = 5


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--out", help="output directory override")
    parser.add_argument("--n-reference", type=int, help="reference dataset size")
    parser.add_argument("--n-holdout", type=int, help="out-of-sample dataset size")
    parser.add_argument("--dimension", type=int, help="embedding dimension K")
    parser.add_argument(
        "--landmark-grid",
        help="comma-separated landmark counts, e.g. 25,50,100",
    )
    parser.add_argument(
        "--landmark-method", choices=("fps", "random"), help="landmark selector"
    )
    parser.add_argument(
        "--methods",
        help="out-of-sample methods: optimize, neural, or both",
    )
    parser.add_argument("--seed-data", type=int, help="name generation seed")
    parser.add_argument("--seed-lsmds", type=int, help="reference embedding seed")
    parser.add_argument("--seed-landmarks", type=int, help="landmark selection seed")
    parser.add_argument("--seed-nn", type=int, help="network init/shuffle seed")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsmds",
        description="Landmark least-squares MDS with out-of-sample embedding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("generate", "synthesize the name dataset and its reference/holdout split"),
        ("distmatrix", "compute the reference pairwise edit-distance matrix"),
        ("embed", "fit the reference configuration by stress descent"),
        ("landmarks", "select and persist landmark sets for every grid entry"),
        ("ose", "embed the holdout points with one out-of-sample method"),
        ("benchmark", "run the full grid sweep and write benchmark.csv"),
        ("evaluate", "recompute quality reports from persisted coordinates"),
    ):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        if name in ("ose", "evaluate"):
            p.add_argument(
                "--method",
                required=True,
                choices=pipeline.METHOD_CHOICES,
                help="out-of-sample method to run",
            )
            p.add_argument(
                "--count",
                type=int,
                help="single landmark count (default: every grid entry)",
            )
    return parser


def _config_from_args(args: argparse.Namespace) -> pipeline.PipelineConfig:
    overrides = {
        "output_dir": args.out,
        "n_reference": args.n_reference,
        "n_holdout": args.n_holdout,
        "dimension": args.dimension,
        "landmark_method": args.landmark_method,
    }
    if args.landmark_grid is not None:
        overrides["landmark_grid"] = [int(v) for v in args.landmark_grid.split(",")]
    if args.methods is not None:
        overrides["methods"] = args.methods
    seeds = {}
    for name in ("data", "lsmds", "landmarks", "nn"):
        value = getattr(args, f"seed_{name}")
        if value is not None:
            seeds[name] = value
    if seeds:
        overrides["seeds"] = seeds
    return pipeline.load_config(args.config, **overrides)


def _dispatch(args: argparse.Namespace) -> None:
    cfg = _config_from_args(args)
    if args.command == "generate":
        total = pipeline.run_generate(cfg)
        print(f"wrote {total} names to {cfg.names_path}")
        print(
            f"split: {cfg.n_reference} reference, {cfg.n_holdout} holdout "
            f"({cfg.reference_names_path}, {cfg.holdout_names_path})"
        )
    elif args.command == "distmatrix":
        matrix = pipeline.run_distmatrix(cfg)
        print(f"wrote {matrix.shape[0]}x{matrix.shape[1]} matrix to "
              f"{cfg.reference_delta_path}")
    elif args.command == "embed":
        _, trace = pipeline.run_embed(cfg)
        print(f"wrote configuration to {cfg.reference_config_path}")
        print(f"normalized stress {trace[0]:.6f} -> {trace[-1]:.6f} "
              f"in {len(trace) - 1} iterations ({cfg.stress_trace_path})")
    elif args.command == "landmarks":
        pipeline.run_landmarks(cfg)
        for count in cfg.landmark_grid:
            print(f"L={count}: {cfg.landmarks_path(count)}")
    elif args.command == "ose":
        reports = pipeline.run_ose(cfg, args.method, args.count)
        for report in reports:
            timing = report.timing
            print(
                f"{report.method} L={report.n_landmarks}: "
                f"total_error={report.total_error:.6g} "
                f"mean_rt={timing.mean:.6g}s"
            )
    elif args.command == "benchmark":
        path = pipeline.run_benchmark(cfg)
        print(f"wrote {path}")
    elif args.command == "evaluate":
        reports = pipeline.run_evaluate(cfg, args.method, args.count)
        for report in reports:
            print(
                f"{report.method} L={report.n_landmarks}: "
                f"total_error={report.total_error:.6g}"
            )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _dispatch(args)
    except FileNotFoundError as exc:
        print(f"error (missing artifact): {exc}", file=sys.stderr)
        return EXIT_MISSING_ARTIFACT
    except NumericalFailureError as exc:
        print(f"error (numerical failure): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, TypeError) as exc:
        print(f"error (invalid input): {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error (I/O): {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
