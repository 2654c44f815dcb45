"""Command-line entry point.

Exit status: 0 on success, 1 when a run violates one of its invariants,
2 on configuration or I/O errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError
from .experiments import ExperimentConfig, run


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"{path} not found") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pairbounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze-graph", help="degrees, coloring and effective size of an edge list")
    p.add_argument("edges")
    p.add_argument("--n", type=int, default=None, help="vertex count when the file has no '# n=' header")
    p.add_argument("--out", default=None, help="directory for report.json (default: print)")

    p = sub.add_parser("sample-labeler", help="realize a labeler spec as an edge list")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True, help="edge-list file to write")

    p = sub.add_parser("compute-bounds", help="evaluate bounds from a JSON input file")
    p.add_argument("--in", dest="inputs", required=True)
    p.add_argument("--out", default=None, help="directory for bounds.json (default: print)")

    p = sub.add_parser("defect-study", help="risk vs. bound study over repeated trials")
    p.add_argument("--config", required=True)
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--out", default=None, help="output directory (overrides output_dir)")

    p = sub.add_parser("verify-maxdeg", help="Monte-Carlo check of the G(n, m) max-degree cap")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    return parser


def _config_from_args(args) -> ExperimentConfig:
    if args.command == "analyze-graph":
        return ExperimentConfig("analyze-graph", {"edges": args.edges, "n": args.n}, args.out)
    if args.command == "sample-labeler":
        return ExperimentConfig("sample-labeler", {"spec": _load_json(args.spec)})
    if args.command == "compute-bounds":
        return ExperimentConfig("compute-bounds", {"inputs": _load_json(args.inputs)}, args.out)
    if args.command == "verify-maxdeg":
        params = {"n": args.n, "m": args.m, "delta": args.delta, "trials": args.trials, "seed": args.seed}
        return ExperimentConfig("verify-maxdeg", params, args.out)
    cfg = ExperimentConfig.load(args.config, args.overrides)
    if cfg.kind != "defect-study":
        raise ConfigError(f"config describes {cfg.kind!r}, not a defect study")
    if args.out is not None:
        cfg.output_dir = args.out
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        result = run(config)
        if args.command == "sample-labeler":
            with open(args.out, "w") as fh:
                fh.write(result.artifacts["edges.txt"])
        elif config.output_dir is None:
            for text in result.artifacts.values():
                sys.stdout.write(text)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for problem in result.problems:
        print(f"invariant violated: {problem}", file=sys.stderr)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
