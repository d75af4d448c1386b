"""Command-line entry point.

Exit codes: 0 success, 1 usage/config error, 2 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from ..objectives import PROBLEMS
from ..operators import OPERATORS
from .analysis import analyze, format_report, write_report
from .campaign import ConfigError, load_config, read_records, run_campaign, with_overrides
from .designs import DESIGN_NAMES
from .runner import derive_seed, run_design

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="opadapt", description="Adaptive-operator EA experiments")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a campaign from a config file")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--out", type=Path, help="output directory (overrides config)")
    run.add_argument("--seed", type=int, help="master seed (overrides config)")
    run.add_argument("--jobs", type=int, help="worker processes (overrides config)")
    run.add_argument("--dump-probabilities", action="store_true", default=None)
    run.add_argument("--dump-measurements", action="store_true", default=None)

    an = sub.add_parser("analyze", help="report Mean/Final/Correlation from run CSVs")
    an.add_argument("inputs", nargs="+", type=Path, help="runs.csv files or campaign directories")
    an.add_argument("--out", type=Path, help="directory for report CSVs")

    sub.add_parser("list-problems", help="show the benchmark catalog")
    sub.add_parser("list-operators", help="show the search operators")

    demo = sub.add_parser("demo", help="one seeded run, printing probabilities each cycle")
    demo.add_argument("--design", default="A5-I3", choices=DESIGN_NAMES)
    demo.add_argument("--problem", default="F2", choices=list(PROBLEMS))
    demo.add_argument("--generations", type=int, default=200)
    demo.add_argument("--seed", type=int, default=0)
    return parser


def _list_problems() -> None:
    print(f"{'id':<4} {'name':<28} {'dim':>3}  bounds")
    for p in PROBLEMS.values():
        print(f"{p.id:<4} {p.name:<28} {p.dimension:>3}  [{p.lower_bounds[0]:g}, {p.upper_bounds[0]:g}]")


def _list_operators() -> None:
    print(f"{'id':<3} {'name':<30} {'arity':>5}  params")
    for op in OPERATORS:
        params = ", ".join(f"{k}={v:g}" for k, v in op.params.items()) or "-"
        print(f"{op.id:<3} {op.name:<30} {op.arity:>5}  {params}")


def _demo(args) -> int:
    if args.generations < 1:
        print("generations must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    seed = derive_seed(args.seed, args.design, args.problem, 0)
    print(f"{args.design} on {args.problem}, seed {seed}")
    with np.printoptions(precision=3, suppress=True):
        def show(gen, probs):
            print(f"gen {gen:>5}  {probs}")

        res = run_design(args.design, args.problem, seed, args.generations, args.generations,
                         on_update=show)
        if not res.update_generations:
            print(f"fixed probabilities {res.probability_history[0][1]}")
    best = res.record.best_fitness_at[args.generations]
    print(f"best fitness {best:.17g}")
    if res.record.solved_generation is not None:
        print(f"solved at generation {res.record.solved_generation}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.command == "list-problems":
        _list_problems()
        return EXIT_OK
    if args.command == "list-operators":
        _list_operators()
        return EXIT_OK
    if args.command == "demo":
        return _demo(args)

    if args.command == "run":
        try:
            cfg = load_config(args.config)
            cfg = with_overrides(cfg, output_directory=args.out, master_seed=args.seed,
                                 jobs=args.jobs, dump_probabilities=args.dump_probabilities,
                                 dump_measurements=args.dump_measurements)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        except OSError as exc:
            print(f"cannot read config: {exc}", file=sys.stderr)
            return EXIT_IO
        try:
            records = run_campaign(cfg, progress=_progress if args.verbose else None)
        except OSError as exc:
            print(f"cannot write results: {exc}", file=sys.stderr)
            return EXIT_IO
        expected = sum(1 for _ in cfg.cells())
        print(f"{len(records)}/{expected} runs written to {cfg.output_directory / 'runs.csv'}")
        return EXIT_OK if len(records) == expected else EXIT_IO

    if args.command == "analyze":
        try:
            records = read_records(args.inputs)
        except OSError as exc:
            print(f"cannot read runs: {exc}", file=sys.stderr)
            return EXIT_IO
        except (ValueError, KeyError) as exc:
            print(f"bad run file: {exc}", file=sys.stderr)
            return EXIT_USAGE
        try:
            report = analyze(records)
        except ValueError as exc:
            print(f"cannot analyze: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(format_report(report))
        if args.out is not None:
            try:
                write_report(report, args.out)
            except OSError as exc:
                print(f"cannot write report: {exc}", file=sys.stderr)
                return EXIT_IO
        return EXIT_OK
    parser.error(f"unknown command {args.command}")
    return EXIT_USAGE


def _progress(rec) -> None:
    logging.getLogger("opadapt").info("done %s %s run %d", rec.design, rec.problem, rec.run_index)


if __name__ == "__main__":
    sys.exit(main())
