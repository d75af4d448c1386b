"""Seeded experiment campaigns and their CSV persistence.

Config files are flat ``key = value`` text; list-valued keys (``design``,
``problem``) are given by repeating the key.  ``#`` starts a comment.

    # example
    design = SGA1
    design = A5-I3
    problem = F2
    runs = 10
    generations = 2000
    interval = 100
    seed = 2006
    out = results
"""
from __future__ import annotations

import csv
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

from ..interpret import Family
from ..objectives import PROBLEMS, get_problem, is_solved
from .designs import DESIGN_NAMES, get_design
from .runner import RunRecord, RunResult, derive_seed, run_design, stopping_points

log = logging.getLogger(__name__)

CSV_HEADER = ("design", "problem", "run", "seed", "stopping_point", "best_fitness", "solved")
RUNS_FILE = "runs.csv"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CampaignConfig:
    designs: tuple[str, ...] = DESIGN_NAMES
    problems: tuple[str, ...] = tuple(PROBLEMS)
    runs_per_cell: int = 10
    max_generations: int = 2000
    stopping_interval: int = 100
    master_seed: int = 0
    output_directory: Path = Path("results")
    jobs: int = 1
    family: Family = Family.NORMAL
    dump_probabilities: bool = False
    dump_measurements: bool = False

    def __post_init__(self):
        if self.runs_per_cell < 1:
            raise ConfigError("runs must be >= 1")
        if self.max_generations < 1:
            raise ConfigError("generations must be >= 1")
        if self.stopping_interval < 1 or self.max_generations % self.stopping_interval:
            raise ConfigError("interval must divide generations")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if not self.designs or not self.problems:
            raise ConfigError("need at least one design and one problem")
        try:
            for d in self.designs:
                get_design(d)
            for p in self.problems:
                get_problem(p)
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from None

    def cells(self) -> Iterator[tuple[str, str, int]]:
        """(design, problem, run) in canonical output order."""
        for p in self.problems:
            for d in self.designs:
                for r in range(self.runs_per_cell):
                    yield d, p, r


_SCALARS = {
    "runs": ("runs_per_cell", int),
    "generations": ("max_generations", int),
    "interval": ("stopping_interval", int),
    "seed": ("master_seed", int),
    "out": ("output_directory", Path),
    "jobs": ("jobs", int),
    "family": ("family", Family),
    "dump_probabilities": ("dump_probabilities", lambda v: v.lower() in {"1", "true", "yes"}),
    "dump_measurements": ("dump_measurements", lambda v: v.lower() in {"1", "true", "yes"}),
}


def parse_config(text: str) -> CampaignConfig:
    designs: list[str] = []
    problems: list[str] = []
    kw = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if key == "design":
            designs.append(get_design(value).name if value.upper() in DESIGN_NAMES else value)
        elif key == "problem":
            problems.append(value.upper())
        elif key in _SCALARS:
            name, conv = _SCALARS[key]
            try:
                kw[name] = conv(value)
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    if designs:
        kw["designs"] = tuple(designs)
    if problems:
        kw["problems"] = tuple(problems)
    return CampaignConfig(**kw)


def load_config(path) -> CampaignConfig:
    return parse_config(Path(path).read_text())


def format_fitness(x: float) -> str:
    return format(x, ".17g")


def record_rows(rec: RunRecord) -> list[tuple]:
    return [
        (rec.design, rec.problem, rec.run_index, rec.seed, stop,
         format_fitness(best), int(is_solved(best)))
        for stop, best in sorted(rec.best_fitness_at.items())
    ]


def _run_cell(args) -> RunResult:
    design, problem, run, seed, cfg = args
    return run_design(
        design, problem, seed, cfg.max_generations, cfg.stopping_interval,
        run_index=run, family=cfg.family, keep_measurements=cfg.dump_measurements,
    )


def _write_dumps(cfg: CampaignConfig, result: RunResult) -> None:
    rec = result.record
    stem = f"{rec.design}_{rec.problem}_{rec.run_index}.csv"
    if cfg.dump_probabilities:
        d = cfg.output_directory / "probabilities"
        d.mkdir(exist_ok=True)
        with open(d / stem, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("generation", "op_id", "probability"))
            for gen, probs in result.probability_history:
                for op, p in enumerate(probs, 1):
                    w.writerow((gen, op, format_fitness(float(p))))
    if cfg.dump_measurements:
        d = cfg.output_directory / "measurements"
        d.mkdir(exist_ok=True)
        with open(d / stem, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("generation", "operator_id", "kind", "value"))
            for gen, op, kind, v in result.measurements:
                w.writerow((gen, op, kind, format_fitness(float(v))))


def run_campaign(cfg: CampaignConfig, progress=None) -> list[RunRecord]:
    """Run every (design, problem, run) cell and write ``runs.csv``.

    Rows are written in canonical cell order regardless of ``jobs``, so the
    file depends only on the config.  A failing run is logged and skipped.
    """
    out = Path(cfg.output_directory)
    out.mkdir(parents=True, exist_ok=True)
    tasks = [
        (d, p, r, derive_seed(cfg.master_seed, d, p, r), cfg) for d, p, r in cfg.cells()
    ]
    records: list[RunRecord] = []
    failures = 0
    with open(out / RUNS_FILE, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        fh.flush()
        for task, result in _execute(tasks, cfg.jobs):
            if isinstance(result, BaseException):
                failures += 1
                log.error("run %s/%s/%d failed: %s", task[0], task[1], task[2], result)
                continue
            writer.writerows(record_rows(result.record))
            fh.flush()
            _write_dumps(cfg, result)
            records.append(result.record)
            if progress is not None:
                progress(result.record)
    if failures:
        log.warning("%d run(s) failed", failures)
    return records


def _safe_run(task):
    try:
        return _run_cell(task)
    except Exception as exc:  # one bad run must not abort the campaign
        return exc


def _execute(tasks, jobs: int):
    """Yield (task, result) in task order."""
    if jobs <= 1:
        for t in tasks:
            yield t, _safe_run(t)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for t, res in zip(tasks, pool.map(_safe_run, tasks)):
            yield t, res


def read_records(paths: Iterable[os.PathLike | str]) -> list[RunRecord]:
    """Rebuild RunRecords from one or more run CSV files (or directories holding runs.csv)."""
    by_key: dict[tuple, RunRecord] = {}
    for path in paths:
        path = Path(path)
        if path.is_dir():
            path = path / RUNS_FILE
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != CSV_HEADER:
                raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
            for row in reader:
                key = (row["design"], row["problem"], int(row["run"]))
                rec = by_key.get(key)
                if rec is None:
                    rec = by_key[key] = RunRecord(key[0], key[1], key[2], int(row["seed"]))
                stop = int(row["stopping_point"])
                best = float(row["best_fitness"])
                rec.best_fitness_at[stop] = best
                if int(row["solved"]) and (rec.solved_generation is None or stop < rec.solved_generation):
                    rec.solved_generation = stop
    return list(by_key.values())


def with_overrides(cfg: CampaignConfig, **kw) -> CampaignConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
