"""Text reports: average-of-average-rank tables and run diagnostics."""

from __future__ import annotations

import math

from .evaluation import cc_table, failure_counts, summarize_avg_rank

HORIZON_NAMES = {1: "one-step-ahead", 18: "multi-step (h=18)"}


def rank_table(records) -> list[tuple[str, float]]:
    """``(model, average of average rank)`` rows, best first."""
    return summarize_avg_rank(records)


def format_rank_table(rows, horizon: int) -> str:
    name = HORIZON_NAMES.get(horizon, f"h={horizon}")
    width = max([len("model")] + [len(m) for m, _ in rows])
    lines = [f"Average of the average rank, {name} forecasting",
             f"{'model':<{width}}  avg_rank", f"{'-' * width}  --------"]
    lines += [f"{m:<{width}}  {v:8.2f}" for m, v in rows]
    return "\n".join(lines)


def format_diagnostics(records, fallback: dict | None = None) -> str:
    counts = failure_counts(records)
    lines = ["Diagnostics (records per model)",
             "model      failed  mase_undefined  smape_undefined_terms  naive_fallback"]
    for m, c in counts.items():
        fb = (fallback or {}).get(m, {}).get("fallback", c["fallback"])
        lines.append(f"{m:<9} {c['failed']:7d} {c['mase_undefined']:15d} "
                     f"{c['smape_undefined_terms']:22d} {fb:15d}")
    return "\n".join(lines)


def format_cc(records) -> str:
    try:
        ratios = cc_table(records)
    except ValueError:
        return "Computational complexity: Naive2 absent, ratios unavailable"
    lines = ["Computational complexity (time / Naive2 time)"]
    for m, v in sorted(ratios.items(), key=lambda kv: (kv[1], kv[0])):
        lines.append(f"{m:<9} {v:12.3f}  log10={math.log10(v):6.2f}")
    return "\n".join(lines)


def build_report(record_sets, manifests=None) -> str:
    """Report for one or more runs; runs are grouped and ordered by horizon."""
    manifests = manifests or [None] * len(record_sets)
    by_h: dict[int, list] = {}
    failures: dict[int, dict] = {}
    for records, manifest in zip(record_sets, manifests):
        for r in records:
            by_h.setdefault(r.horizon, []).append(r)
        if manifest and records:
            failures[records[0].horizon] = manifest.get("failures") or {}
    sections = []
    for h in sorted(by_h):
        records = by_h[h]
        sections.append(format_rank_table(rank_table(records), h))
        sections.append(format_diagnostics(records, failures.get(h)))
        sections.append(format_cc(records))
    return "\n\n".join(sections) + "\n"
