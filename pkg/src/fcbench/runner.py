"""Experiment orchestration and result persistence.

The unit of work is one (series, model) pair: a full prequential run of one
forecaster over one series. Tasks may run in a process pool; their records
are merged in canonical order (series, model, train size) before anything is
written, so outputs do not depend on scheduling.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .config import RunConfig
from .evaluation import (
    OriginRecord,
    build_learning_curves,
    cc_table,
    failure_counts,
    prequential_run,
)
from .registry import make_forecaster, model_type
from .series import Corpus, TimeSeries, load_corpus

log = logging.getLogger(__name__)

RESULTS_HEADER = ("series_id", "model_id", "train_size", "horizon", "mase", "smape",
                  "smape_undefined", "failed", "elapsed_ns")
CURVES_HEADER = ("model_id", "train_size", "avg_rank", "avg_rank_smoothed", "avg_mase",
                 "avg_mase_smoothed")
TYPE_CURVES_HEADER = ("model_type", "train_size", "loess_avg_rank")
RESULTS_FILE = "results.csv"
CURVES_FILE = "curves.csv"
TYPE_CURVES_FILE = "type_curves.csv"
MANIFEST_FILE = "manifest.json"


class ResultsError(ValueError):
    pass


@dataclass(frozen=True)
class Task:
    series: TimeSeries
    model_id: str
    config: RunConfig


def run_task(task: Task) -> list[OriginRecord]:
    cfg = task.config
    forecaster = make_forecaster(task.model_id, cfg.embed_p, cfg.tune_every)
    return prequential_run(task.series, [forecaster], cfg.horizon, cfg.start,
                           cfg.preprocess_mode, seed=cfg.seed)


def run_experiment(config: RunConfig, corpus: Corpus | None = None) -> dict:
    """Run every (series, model) task and write all result files.

    Returns the manifest dictionary (also written to ``manifest.json``).
    """
    began = time.perf_counter()
    if corpus is None:
        corpus = load_corpus(config.corpus_path, cap=config.cap)
    usable = [s for s in corpus if len(s) >= config.start + config.horizon]
    skipped = sorted(s.id for s in corpus if len(s) < config.start + config.horizon)
    if not usable:
        raise ResultsError("no series is long enough for the configured start and horizon")
    tasks = [Task(s, m, config) for s in usable for m in config.models]
    records: list[OriginRecord] = []
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for i, part in enumerate(pool.map(run_task, tasks), 1):
                records.extend(part)
                log.info("task %d/%d done", i, len(tasks))
    else:
        for i, task in enumerate(tasks, 1):
            t0 = time.perf_counter()
            records.extend(run_task(task))
            log.info("task %d/%d %s/%s %.1fs", i, len(tasks), task.series.id, task.model_id,
                     time.perf_counter() - t0)
    records.sort(key=lambda r: (r.series_id, r.model_id, r.train_size))
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_results(records, out / RESULTS_FILE)
    types = {m: model_type(m) for m in config.models}
    curves = build_learning_curves(records, types, config.smooth_window, models=sorted(config.models))
    write_curves(curves, out)
    manifest = {
        "config": config.as_dict(),
        "series": [s.id for s in usable],
        "skipped_series": skipped,
        "rejected_series": list(getattr(corpus, "rejected", [])),
        "models": list(config.models),
        "model_types": types,
        "records": len(records),
        "failures": failure_counts(records),
        "cc_ratio": cc_table(records) if "Naive2" in config.models else None,
        "wall_time_s": time.perf_counter() - began,
    }
    (out / MANIFEST_FILE).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def _fmt(value: float) -> str:
    return "" if value is None or not math.isfinite(value) else repr(float(value))


def _num(text: str) -> float:
    return math.nan if text == "" else float(text)


def write_results(records, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULTS_HEADER)
        for r in records:
            w.writerow((r.series_id, r.model_id, r.train_size, r.horizon, _fmt(r.mase),
                        _fmt(r.smape), r.smape_undefined, int(r.failed), r.elapsed_ns))


def write_curves(curves, out_dir: Path) -> None:
    rows = sorted(curves.rows(), key=lambda row: (row[0], row[1]))
    with open(out_dir / CURVES_FILE, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CURVES_HEADER)
        for m, size, *vals in rows:
            w.writerow((m, size, *map(_fmt, vals)))
    with open(out_dir / TYPE_CURVES_FILE, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TYPE_CURVES_HEADER)
        for kind in sorted(curves.type_loess):
            for size, value in zip(curves.train_sizes, curves.type_loess[kind]):
                w.writerow((kind, int(size), _fmt(value)))


def read_results(path) -> list[OriginRecord]:
    """Load ``results.csv`` (a file or a run directory) back into records."""
    path = Path(path)
    if path.is_dir():
        path = path / RESULTS_FILE
    if not path.exists():
        raise ResultsError(f"results file not found: {path}")
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != RESULTS_HEADER:
            raise ResultsError(f"{path}: expected header {','.join(RESULTS_HEADER)}")
        for lineno, row in enumerate(reader, 2):
            try:
                sid, mid, size, h, m, s, und, failed, ns = row
                records.append(OriginRecord(sid, mid, int(size), int(h), _num(m), _num(s),
                                            int(und), bool(int(failed)), int(ns)))
            except ValueError:
                raise ResultsError(f"{path}:{lineno}: malformed results row") from None
    return records


def read_manifest(run_dir) -> dict:
    path = Path(run_dir) / MANIFEST_FILE
    if not path.exists():
        raise ResultsError(f"manifest not found: {path}")
    return json.loads(path.read_text())
