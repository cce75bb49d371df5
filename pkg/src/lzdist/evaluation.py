"""Evaluation pipeline: metric values per record, then correlation, fit and
KNN reports against edit effort, written as plot-ready CSV."""
from __future__ import annotations

import logging
import statistics
import time
import unicodedata
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import baselines
from .dataset import DatasetError, EditRecord, write_rows_csv
from .distance import compression_distance, compression_distance_with_context
from .llm import question_key
from .stats import (
    DegenerateInputError,
    InvalidConfigurationError,
    knn_r2,
    linear_fit,
    pearson,
    t_test_pvalue,
)

log = logging.getLogger(__name__)

METRICS = baselines.METRIC_NAMES
CONDITIONS = ("plain", "with_context")
SIGNALS = ("edit_time_s", "keystrokes")
ALL_ANNOTATORS = "*"
CONTEXT_JOINER = "\n"

SUMMARY_COLUMNS = ("metric", "condition", "pearson_r", "p_value", "knn_r2", "slope", "intercept", "n")
CORRELATION_COLUMNS = ("metric", "condition", "signal", "annotator", "pearson_r", "p_value", "n")
KNN_COLUMNS = ("metric", "condition", "r2_time", "r2_keystrokes", "n")
FIT_COLUMNS = ("metric", "condition", "signal", "slope", "intercept", "r2", "n")


@dataclass
class EvalConfig:
    dataset_path: Optional[Path] = None
    metrics: tuple[str, ...] = METRICS
    conditions: tuple[str, ...] = ("plain",)
    knn_k: int = 5
    train_fraction: float = 0.8
    seed: int = 42
    output_dir: Path = Path("reports")
    jobs: int = 1
    nfc: bool = False

    def __post_init__(self) -> None:
        bad = [m for m in self.metrics if m not in METRICS]
        if bad or not self.metrics:
            raise InvalidConfigurationError(f"metrics must be a nonempty subset of {METRICS}, got {bad}")
        bad = [c for c in self.conditions if c not in CONDITIONS]
        if bad or not self.conditions:
            raise InvalidConfigurationError(f"conditions must be a nonempty subset of {CONDITIONS}")
        if self.knn_k < 1:
            raise InvalidConfigurationError("knn_k must be >= 1")


def column_name(metric: str, condition: str) -> str:
    return f"{metric}_{condition}"


def _metric_value(metric: str, source: str, target: str, context: Optional[str], condition: str) -> float:
    if metric == "compression":
        if condition == "with_context":
            return float(compression_distance_with_context(context, source, target).value)
        return float(compression_distance(source, target).value)
    if condition == "with_context":
        source = source + CONTEXT_JOINER + context
    if metric == "levenshtein":
        return baselines.levenshtein(source, target).value
    if metric == "bleu":
        return baselines.bleu(source, target).value
    if metric == "rouge_l":
        return baselines.rouge_l(source, target).value
    if metric == "ter":
        return baselines.ter(source, target).value
    raise InvalidConfigurationError(f"unknown metric {metric!r}")


def _nfc(text: Optional[str], on: bool) -> Optional[str]:
    return unicodedata.normalize("NFC", text) if (on and text is not None) else text


def record_metrics(args) -> dict[str, float]:
    record, metrics, conditions, nfc = args
    src, tgt, ctx = _nfc(record.source, nfc), _nfc(record.target, nfc), _nfc(record.context, nfc)
    return {
        column_name(m, c): _metric_value(m, src, tgt, ctx, c) for c in conditions for m in metrics
    }


def compute_metrics(
    records: Sequence[EditRecord],
    metrics: Sequence[str],
    conditions: Sequence[str],
    jobs: int = 1,
    nfc: bool = False,
) -> list[dict[str, float]]:
    tasks = [(r, tuple(metrics), tuple(conditions), nfc) for r in records]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(record_metrics, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [record_metrics(t) for t in tasks]


def validate(records: Sequence[EditRecord], config: EvalConfig) -> None:
    if not records:
        raise DatasetError("dataset is empty")
    no_effort = [r.id for r in records if r.edit_time_s is None and r.keystrokes is None]
    if no_effort:
        raise DatasetError(
            f"{len(no_effort)} record(s) lack both edit_time_s and keystrokes: {', '.join(no_effort[:20])}"
        )
    if "with_context" in config.conditions:
        no_context = [r.id for r in records if r.context is None]
        if no_context:
            raise DatasetError(
                f"with_context needs a context text; missing for: {', '.join(no_context[:20])}"
            )


def _safe(fn, *args):
    try:
        return fn(*args)
    except (DegenerateInputError, InvalidConfigurationError, ValueError) as exc:
        log.info("skipped statistic: %s", exc)
        return None


def _correlation(xs, ys):
    r = _safe(pearson, xs, ys)
    if r is None:
        return None, None
    return r, _safe(t_test_pvalue, r, len(xs))


def _series(records, values, column, signal, annotator=None):
    xs, ys = [], []
    for rec, row in zip(records, values):
        effort = getattr(rec, signal)
        if effort is None or (annotator is not None and rec.annotator != annotator):
            continue
        xs.append(row[column])
        ys.append(float(effort))
    return xs, ys


@dataclass
class EvalReport:
    summary: list[dict] = field(default_factory=list)
    correlations: list[dict] = field(default_factory=list)
    knn: list[dict] = field(default_factory=list)
    fits: list[dict] = field(default_factory=list)
    pairs: list[dict] = field(default_factory=list)
    pair_columns: tuple[str, ...] = ()


def evaluate(records: Sequence[EditRecord], config: EvalConfig) -> EvalReport:
    validate(records, config)
    records = sorted(records, key=lambda r: r.id)
    values = compute_metrics(records, config.metrics, config.conditions, config.jobs, config.nfc)
    signals = [s for s in SIGNALS if any(getattr(r, s) is not None for r in records)]
    annotators = sorted({r.annotator for r in records if r.annotator is not None})
    primary = signals[0]
    report = EvalReport()

    for condition in config.conditions:
        for metric in config.metrics:
            col = column_name(metric, condition)
            knn_row = {"metric": metric, "condition": condition}
            for signal in signals:
                for annotator in [None] + annotators:
                    xs, ys = _series(records, values, col, signal, annotator)
                    r, p = _correlation(xs, ys)
                    report.correlations.append({
                        "metric": metric, "condition": condition, "signal": signal,
                        "annotator": ALL_ANNOTATORS if annotator is None else annotator,
                        "pearson_r": r, "p_value": p, "n": len(xs),
                    })
                xs, ys = _series(records, values, col, signal)
                fit = _safe(linear_fit, xs, ys)
                report.fits.append({
                    "metric": metric, "condition": condition, "signal": signal,
                    "slope": fit and fit.slope, "intercept": fit and fit.intercept,
                    "r2": fit and fit.r2, "n": len(xs),
                })
                r2 = _safe(knn_r2, xs, ys, config.knn_k, config.train_fraction, config.seed)
                knn_row["r2_time" if signal == "edit_time_s" else "r2_keystrokes"] = r2
                knn_row["n"] = len(xs)
                if signal == primary:
                    r, p = _correlation(xs, ys)
                    report.summary.append({
                        "metric": metric, "condition": condition, "pearson_r": r, "p_value": p,
                        "knn_r2": r2, "slope": fit and fit.slope,
                        "intercept": fit and fit.intercept, "n": len(xs),
                    })
            report.knn.append(knn_row)

    metric_cols = [column_name(m, c) for c in config.conditions for m in config.metrics]
    report.pair_columns = ("id", "annotator", "scenario", "edit_time_s", "keystrokes", *metric_cols)
    for rec, row in zip(records, values):
        report.pairs.append({
            "id": rec.id, "annotator": rec.annotator, "scenario": rec.scenario,
            "edit_time_s": rec.edit_time_s, "keystrokes": rec.keystrokes, **row,
        })
    return report


def write_report(report: EvalReport, output_dir: Path) -> list[Path]:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    targets = [
        ("summary.csv", report.summary, SUMMARY_COLUMNS),
        ("correlations.csv", report.correlations, CORRELATION_COLUMNS),
        ("knn.csv", report.knn, KNN_COLUMNS),
        ("fit.csv", report.fits, FIT_COLUMNS),
        ("pairs.csv", report.pairs, report.pair_columns),
    ]
    paths = []
    for name, rows, columns in targets:
        path = output_dir / name
        write_rows_csv(rows, path, columns)
        paths.append(path)
    return paths


# --- scenario comparison ----------------------------------------------------

SCENARIO_PAIRS = (("normal", "similar"), ("normal", "fast"))


@dataclass(frozen=True)
class ScenarioFit:
    baseline: str
    other: str
    slope: Optional[float]
    intercept: Optional[float]
    r2: Optional[float]
    n: int


def scenario_distances(
    records: Sequence[EditRecord], condition: str = "plain", nfc: bool = False
) -> dict[str, dict[str, float]]:
    """Compression distance per question id and scenario."""
    out: dict[str, dict[str, float]] = {}
    for rec in records:
        if rec.scenario not in ("normal", "similar", "fast"):
            continue
        value = record_metrics((rec, ("compression",), (condition,), nfc))[column_name("compression", condition)]
        out.setdefault(question_key(rec), {})[rec.scenario] = value
    return out


def compare_scenarios(distances: dict[str, dict[str, float]]) -> tuple[list[ScenarioFit], list[str]]:
    """Fit other-scenario distance against normal-scenario distance per question.

    Returns the fits and the sorted question ids that could not be paired.
    """
    fits = []
    paired: set[str] = set()
    for base, other in SCENARIO_PAIRS:
        keys = sorted(q for q, d in distances.items() if base in d and other in d)
        paired.update(keys)
        if not keys:
            continue
        xs = [distances[q][base] for q in keys]
        ys = [distances[q][other] for q in keys]
        fit = _safe(linear_fit, xs, ys)
        fits.append(ScenarioFit(
            base, other, fit and fit.slope, fit and fit.intercept, fit and fit.r2, len(keys)
        ))
    unmatched = sorted(set(distances) - paired)
    return fits, unmatched


def write_scenario_report(
    distances: dict[str, dict[str, float]], fits: Sequence[ScenarioFit], unmatched: Sequence[str], output_dir: Path
) -> list[Path]:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    fit_path = output_dir / "scenario_fit.csv"
    write_rows_csv(
        [{"pair": f"{f.baseline}-{f.other}", "slope": f.slope, "intercept": f.intercept, "r2": f.r2, "n": f.n}
         for f in fits],
        fit_path, ("pair", "slope", "intercept", "r2", "n"),
    )
    scatter_path = output_dir / "scenario_scatter.csv"
    write_rows_csv(
        [{"question_id": q, **distances[q]} for q in sorted(distances)],
        scatter_path, ("question_id", "normal", "similar", "fast"),
    )
    unmatched_path = output_dir / "scenario_unmatched.csv"
    write_rows_csv([{"question_id": q} for q in unmatched], unmatched_path, ("question_id",))
    return [fit_path, scatter_path, unmatched_path]


# --- timing -------------------------------------------------------------------

_BENCH_ALPHABET = np.frombuffer(b"abcdefghijklmnopqrstuvwxyz     ", dtype=np.uint8)


def random_text_bytes(size: int, rng: np.random.Generator) -> bytes:
    return _BENCH_ALPHABET[rng.integers(0, _BENCH_ALPHABET.size, size)].tobytes()


def run_bench(sizes: Sequence[int], repetitions: int = 5, seed: int = 42) -> list[tuple[int, float]]:
    """Median wall time of ``compression_distance`` on random source/target texts of each size."""
    if repetitions < 1:
        raise InvalidConfigurationError("repetitions must be >= 1")
    if not sizes or any(s < 1024 for s in sizes) or list(sizes) != sorted(sizes):
        raise InvalidConfigurationError("sizes must be ascending and each >= 1KB")
    rng = np.random.default_rng(seed)
    compression_distance(b"warm up the compiled kernels", b"warm up")
    rows = []
    for size in sizes:
        source, target = random_text_bytes(size, rng), random_text_bytes(size, rng)
        times = []
        for _ in range(repetitions):
            start = time.perf_counter()
            compression_distance(source, target)
            times.append(time.perf_counter() - start)
        rows.append((int(size), statistics.median(times)))
    return rows
