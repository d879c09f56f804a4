"""Prequential evaluation: metrics, origin runs, ranks and learning curves."""

from .curves import (
    LearningCurves,
    SeriesPanel,
    build_learning_curves,
    build_panels,
    cc_ratio,
    cc_table,
    failure_counts,
    loess,
    rank_per_origin,
    rank_rows,
    summarize_avg_rank,
    trailing_mean,
)
from .metrics import mase, mase_scale, smape
from .prequential import OriginRecord, origin_count, origin_seed, prequential_run

__all__ = [
    "LearningCurves", "SeriesPanel", "build_learning_curves", "build_panels", "cc_ratio",
    "cc_table", "failure_counts", "loess", "rank_per_origin", "rank_rows",
    "summarize_avg_rank", "trailing_mean", "mase", "mase_scale", "smape", "OriginRecord",
    "origin_count", "origin_seed", "prequential_run",
]
