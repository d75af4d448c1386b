"""Campaign analysis: Mean / Final / Correlation measures and significance tables.

For every problem and stopping point the designs' best-fitness samples are
compared pairwise with one-sided Mann-Whitney confidences.

* Mean        - a design's average confidence over all rivals, averaged over
                stopping points
* Final       - the same average confidence at the last stopping point
* Correlation - Pearson correlation between the confidence of beating the
                baseline (SGA1) and the stopping point
"""
from __future__ import annotations

import csv
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from statistics import median
from typing import Sequence

from ..stats import AnovaResult, PairedTResult, anova_f, mann_whitney_confidence, mean_confidence, paired_t, pearson_correlation
from .designs import BASELINE, DESIGN_NAMES
from .runner import RunRecord

log = logging.getLogger(__name__)

ANOVA_DESIGNS = ("A1-I1", "A2-I1", "A4-I1", "A5-I1", "A6-I1")
OUTLIER_PAIRS = (("A5-I1", "A5-I3"), ("A6-I1", "A6-I3"))


@dataclass
class CellMeasures:
    design: str
    problem: str
    mean: float
    final: float
    correlation: float = math.nan
    mean_vs_baseline: float = math.nan
    confidence_series: list[float] = field(default_factory=list)
    baseline_series: list[float] = field(default_factory=list)


@dataclass
class Report:
    designs: list[str]
    problems: list[str]
    stopping_points: list[int]
    cells: dict[tuple[str, str], CellMeasures]
    anova: dict[str, AnovaResult] = field(default_factory=dict)
    paired: dict[str, PairedTResult] = field(default_factory=dict)
    has_baseline: bool = True

    def values(self, measure: str, design: str) -> list[float]:
        return [getattr(self.cells[design, p], measure) for p in self.problems]

    def median_correlation(self, design: str) -> float:
        """Median over problems of the defined Correlation values (NaN if none)."""
        vals = [v for v in self.values("correlation", design) if not math.isnan(v)]
        return median(vals) if vals else math.nan


def _ordered(names, preferred):
    rank = {n: i for i, n in enumerate(preferred)}
    return sorted(set(names), key=lambda n: (rank.get(n, len(rank)), n))


def analyze(records: Sequence[RunRecord], baseline: str = BASELINE) -> Report:
    if not records:
        raise ValueError("no run records")
    designs = _ordered((r.design for r in records), DESIGN_NAMES)
    if len(designs) < 2:
        raise ValueError("analysis needs at least two designs")
    by_cell: dict[tuple[str, str], list[RunRecord]] = defaultdict(list)
    for r in records:
        by_cell[r.design, r.problem].append(r)
    problems = sorted(
        {r.problem for r in records if all((d, r.problem) in by_cell for d in designs)},
        key=lambda p: int(p[1:]) if p[1:].isdigit() else p,
    )
    if not problems:
        raise ValueError("no problem is covered by every design")
    stops = sorted(set.intersection(*(set(r.best_fitness_at) for r in records)))
    if not stops:
        raise ValueError("records share no stopping point")
    has_baseline = baseline in designs
    if not has_baseline:
        log.warning("no %s records: Correlation section omitted", baseline)

    cells: dict[tuple[str, str], CellMeasures] = {}
    for p in problems:
        series: dict[str, list[float]] = {d: [] for d in designs}
        vs_base: dict[str, list[float]] = {d: [] for d in designs}
        for stop in stops:
            samples = {
                d: [r.best_fitness_at[stop] for r in sorted(by_cell[d, p], key=lambda r: r.run_index)]
                for d in designs
            }
            for d in designs:
                series[d].append(mean_confidence(samples, d))
                if has_baseline and d != baseline:
                    vs_base[d].append(mann_whitney_confidence(samples[d], samples[baseline]).confidence)
        for d in designs:
            cm = CellMeasures(d, p, math.fsum(series[d]) / len(stops), series[d][-1],
                              confidence_series=series[d], baseline_series=vs_base[d])
            if vs_base[d]:
                cm.mean_vs_baseline = math.fsum(vs_base[d]) / len(stops)
                if len(stops) >= 2:
                    cm.correlation = pearson_correlation(vs_base[d], stops)
            cells[d, p] = cm

    report = Report(designs, problems, stops, cells, has_baseline=has_baseline)
    groups = [d for d in ANOVA_DESIGNS if d in designs]
    if len(groups) >= 2 and len(problems) >= 2:
        for measure in ("mean", "final"):
            report.anova[measure] = anova_f([report.values(measure, d) for d in groups])
    pairs = [(a, b) for a, b in OUTLIER_PAIRS if a in designs and b in designs]
    if pairs:
        for measure in ("mean", "final"):
            avg = [v for a, _ in pairs for v in report.values(measure, a)]
            out = [v for _, b in pairs for v in report.values(measure, b)]
            if len(avg) >= 2:
                report.paired[measure] = paired_t(out, avg)
    return report


def _fmt(x: float, digits: int = 4) -> str:
    return "nan" if math.isnan(x) else f"{x:.{digits}f}"


def format_report(report: Report) -> str:
    lines = ["Performance measures (one-sided Mann-Whitney confidence)", ""]
    head = f"{'design':<8} {'problem':<7} {'Mean':>7} {'Final':>7}"
    if report.has_baseline:
        head += f" {'Corr':>7} {'vsSGA1':>7}"
    lines.append(head)
    for d in report.designs:
        for p in report.problems:
            c = report.cells[d, p]
            row = f"{d:<8} {p:<7} {_fmt(c.mean):>7} {_fmt(c.final):>7}"
            if report.has_baseline:
                row += f" {_fmt(c.correlation):>7} {_fmt(c.mean_vs_baseline):>7}"
            lines.append(row)
    lines += ["", "Per-design summary over problems (median)"]
    for d in report.designs:
        mean = median(report.values("mean", d))
        final = median(report.values("final", d))
        row = f"{d:<8} Mean {_fmt(mean)}  Final {_fmt(final)}"
        if report.has_baseline and d != BASELINE:
            row += f"  Corr {_fmt(report.median_correlation(d))}"
        lines.append(row)
    if report.anova:
        lines += ["", "ANOVA over measurement type (I:1 designs)"]
        for m, a in report.anova.items():
            lines.append(
                f"{m:<6} SS_b {a.ss_between:.4g} df {a.df_between}  SS_w {a.ss_within:.4g} "
                f"df {a.df_within}  F {_fmt(a.F, 3)}  p {_fmt(a.p_value, 3)}"
            )
    if report.paired:
        lines += ["", "Paired t-test, outlier (I:3) vs averaging (I:1) on A5/A6"]
        for m, t in report.paired.items():
            lines.append(f"{m:<6} n {t.n}  t {_fmt(t.t, 3)}  p {_fmt(t.p_value, 3)}")
    return "\n".join(lines)


def write_report(report: Report, out_dir) -> list[Path]:
    """Write measures, boxplot-ready distributions and significance tables as CSV."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def dump(name, header, rows):
        path = out / name
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
        written.append(path)

    dump("measures.csv", ("design", "problem", "mean", "final", "correlation", "mean_vs_sga1"),
         [(c.design, c.problem, repr(c.mean), repr(c.final), repr(c.correlation),
           repr(c.mean_vs_baseline)) for c in report.cells.values()])
    dump("confidence_series.csv", ("design", "problem", "stopping_point", "mean_confidence", "confidence_vs_sga1"),
         [(c.design, c.problem, s, repr(c.confidence_series[i]),
           repr(c.baseline_series[i]) if c.baseline_series else "nan")
          for c in report.cells.values() for i, s in enumerate(report.stopping_points)])
    for name, measure in (("boxplot_mean.csv", "mean"), ("boxplot_final.csv", "final"),
                          ("boxplot_correlation.csv", "correlation")):
        if measure == "correlation" and not report.has_baseline:
            continue
        dump(name, ("design", "problem", measure),
             [(d, p, repr(report.cells[d, p].__getattribute__(measure)))
              for d in report.designs for p in report.problems
              if not (measure == "correlation" and d == BASELINE)])
    if report.anova:
        rows = []
        for m, a in report.anova.items():
            ms_b = a.ss_between / a.df_between
            ms_w = a.ss_within / a.df_within
            rows.append((m, "between", repr(a.ss_between), a.df_between, repr(ms_b), repr(a.F), repr(a.p_value)))
            rows.append((m, "within", repr(a.ss_within), a.df_within, repr(ms_w), "", ""))
        dump("anova.csv", ("measure", "source", "SS", "df", "MS", "F", "p"), rows)
    if report.paired:
        dump("paired_t.csv", ("measure", "n", "t", "p"),
             [(m, t.n, repr(t.t), repr(t.p_value)) for m, t in report.paired.items()])
    return written
