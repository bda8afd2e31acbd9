"""Command-line entry points.

    risgraph run --config CFG --out DIR [--seed S] [--dump-graphs]
                 [--workers N] [--no-plots]
    risgraph golden [--fixture FILE] [--out DIR]
    risgraph validate --config CFG

Exit codes: 0 on success, 1 on validation problems, 2 on I/O problems.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from .config import load_config
from .errors import ConfigError, FixtureError
from .experiment import dump_graph, run_experiment
from .golden import default_fixture_text, golden_graphs, load_fixture, parse_fixture

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risgraph",
        description="Interference-graph simulator for reflector-assisted mesh networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment sweep")
    run.add_argument("--config", required=True, help="key=value config file")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--seed", type=int, default=None, help="override the master seed")
    run.add_argument("--dump-graphs", action="store_true", help="write per-test graph dumps")
    run.add_argument("--workers", type=int, default=1, help="parallel test workers")
    run.add_argument("--no-plots", action="store_true", help="skip figure rendering")

    golden = sub.add_parser("golden", help="replay an abstract conflict fixture")
    golden.add_argument("--fixture", default=None, help="fixture file (default: shipped)")
    golden.add_argument("--out", default=None, help="also write graph dumps here")

    validate = sub.add_parser("validate", help="check a config file")
    validate.add_argument("--config", required=True)
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    results = run_experiment(
        config,
        Path(args.out),
        dump_graphs=args.dump_graphs,
        workers=max(1, args.workers),
        make_plots=not args.no_plots,
    )
    print(f"wrote {results}")
    return EXIT_OK


def _cmd_golden(args: argparse.Namespace) -> int:
    if args.fixture is None:
        fixture = parse_fixture(default_fixture_text())
    else:
        fixture = load_fixture(args.fixture)
    graphs = golden_graphs(fixture)
    out_dir: Optional[Path] = Path(args.out) if args.out else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    for method, (graph, complexity) in graphs.items():
        print(f"method {method}")
        print(f"complexity {complexity}")
        for a, b in graph.edges:
            print(f"edge {a} {b}")
        print()
        if out_dir is not None:
            (out_dir / f"golden_{method}.txt").write_text(dump_graph(graph))
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    load_config(args.config)
    print("ok")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "golden":
            return _cmd_golden(args)
        return _cmd_validate(args)
    except (ConfigError, FixtureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
