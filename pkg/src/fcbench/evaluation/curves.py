"""Per-origin ranks, learning curves and their summaries.

Records are pivoted into one ``(train_size x model)`` MASE matrix per series.
Ranks are taken across models at each origin; a failed or undefined MASE is
treated as worse than every defined one, so it lands at the bottom (tied
failures share the averaged bottom positions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

DEFAULT_WINDOW = 50
LOESS_SPAN = 0.75


def rank_per_origin(mase_by_model: dict[str, float]) -> dict[str, float]:
    """Rank models by ascending MASE at one (series, origin).

    ``nan`` (failed or undefined) scores rank last; ties share the average of
    their positions.
    """
    if len(mase_by_model) < 1:
        raise ValueError("no records to rank")
    ids = list(mase_by_model)
    ranks = rank_rows(np.array([[mase_by_model[k] for k in ids]], dtype=float))[0]
    return dict(zip(ids, ranks.tolist()))


def rank_rows(mase_matrix: np.ndarray) -> np.ndarray:
    """Row-wise average ranks with non-finite entries treated as +inf."""
    m = np.where(np.isfinite(mase_matrix), mase_matrix, np.inf)
    return rankdata(m, method="average", axis=1)


@dataclass
class SeriesPanel:
    """MASE matrix of one series: rows are train sizes, columns are models."""

    series_id: str
    train_sizes: np.ndarray
    models: tuple
    mase: np.ndarray

    @property
    def ranks(self) -> np.ndarray:
        return rank_rows(self.mase)


def build_panels(records, models=None) -> list[SeriesPanel]:
    """Pivot records into per-series panels, checking consistent coverage.

    Every model of a series must cover the same train sizes; otherwise a
    ``ValueError`` lists the gaps. ``models`` restricts and orders the columns.
    """
    by_series: dict[str, dict[str, dict[int, float]]] = {}
    for r in records:
        value = math.nan if r.failed else r.mase
        by_series.setdefault(r.series_id, {}).setdefault(r.model_id, {})[r.train_size] = value
    if models is None:
        models = sorted({m for per in by_series.values() for m in per})
    models = tuple(models)
    panels = []
    gaps = []
    for sid in sorted(by_series):
        per = by_series[sid]
        sizes = sorted(set().union(*(per.get(m, {}).keys() for m in models)))
        for m in models:
            missing = sorted(set(sizes) - set(per.get(m, {})))
            if missing:
                gaps.append(f"{sid}/{m}: missing train sizes {_span(missing)}")
        if gaps:
            continue
        mat = np.array([[per[m][s] for m in models] for s in sizes], dtype=float)
        panels.append(SeriesPanel(sid, np.array(sizes, dtype=np.int64), models, mat))
    if gaps:
        raise ValueError("inconsistent coverage: " + "; ".join(gaps))
    return panels


def _span(values) -> str:
    if len(values) <= 6:
        return ",".join(map(str, values))
    return f"{values[0]}..{values[-1]} ({len(values)} sizes)"


def trailing_mean(values, window: int = DEFAULT_WINDOW) -> np.ndarray:
    """``out[i]`` is the mean of the trailing ``min(i + 1, window)`` values (nan ignored)."""
    if window < 1:
        raise ValueError("window must be positive")
    v = np.asarray(values, dtype=float)
    ok = np.isfinite(v)
    s = np.concatenate([[0.0], np.cumsum(np.where(ok, v, 0.0))])
    c = np.concatenate([[0], np.cumsum(ok)])
    hi = np.arange(1, len(v) + 1)
    lo = np.maximum(0, hi - window)
    cnt = c[hi] - c[lo]
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(cnt > 0, (s[hi] - s[lo]) / np.maximum(cnt, 1), np.nan)


def loess(x, y, x_eval, span: float = LOESS_SPAN) -> np.ndarray:
    """Locally weighted linear regression with tricube weights.

    Each evaluation point uses its ``ceil(span * N)`` nearest neighbours.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = np.isfinite(x) & np.isfinite(y)
    x, y = x[ok], y[ok]
    n = len(x)
    if n == 0:
        return np.full(len(np.atleast_1d(x_eval)), np.nan)
    q = min(n, max(2, int(math.ceil(span * n))))
    out = np.empty(len(np.atleast_1d(x_eval)))
    for i, x0 in enumerate(np.atleast_1d(np.asarray(x_eval, dtype=float))):
        d = np.abs(x - x0)
        dmax = np.partition(d, q - 1)[q - 1]
        if dmax > 0:
            u = np.clip(d / dmax, 0.0, 1.0)
            w = (1.0 - u**3) ** 3
        else:
            w = (d == 0).astype(float)
        sw = w.sum()
        xm = (w @ x) / sw
        ym = (w @ y) / sw
        sxx = w @ (x - xm) ** 2
        if sxx > 1e-12 * max(1.0, xm * xm) * sw:
            slope = (w @ ((x - xm) * (y - ym))) / sxx
        else:
            slope = 0.0
        out[i] = ym + slope * (x0 - xm)
    return out


@dataclass
class LearningCurves:
    """Per-model average curves on the union of train sizes."""

    train_sizes: np.ndarray
    models: tuple
    avg_rank: np.ndarray  # (sizes, models)
    avg_rank_smoothed: np.ndarray
    avg_mase: np.ndarray
    avg_mase_smoothed: np.ndarray
    model_types: dict
    type_loess: dict  # model type -> array over train_sizes
    window: int

    def rows(self):
        for i, s in enumerate(self.train_sizes):
            for j, m in enumerate(self.models):
                yield (m, int(s), self.avg_rank[i, j], self.avg_rank_smoothed[i, j],
                       self.avg_mase[i, j], self.avg_mase_smoothed[i, j])


def _average_over_series(panels, models, values_of):
    sizes = np.unique(np.concatenate([p.train_sizes for p in panels]))
    pos = {int(s): i for i, s in enumerate(sizes)}
    total = np.zeros((len(sizes), len(models)))
    count = np.zeros((len(sizes), len(models)))
    for p in panels:
        idx = np.array([pos[int(s)] for s in p.train_sizes])
        v = values_of(p)
        ok = np.isfinite(v)
        np.add.at(total, idx, np.where(ok, v, 0.0))
        np.add.at(count, idx, ok)
    with np.errstate(invalid="ignore", divide="ignore"):
        return sizes, np.where(count > 0, total / np.maximum(count, 1), np.nan)


def build_learning_curves(records, model_types: dict, window: int = DEFAULT_WINDOW,
                          models=None, span: float = LOESS_SPAN) -> LearningCurves:
    """Average rank and MASE curves per model plus one LOESS curve per model type.

    At each train size the metric is averaged over the series that reach it;
    each model's curve is smoothed by a trailing mean of ``window`` points, and
    each type's LOESS is fitted to the pooled smoothed points of its models.
    """
    panels = build_panels(records, models)
    if not panels:
        raise ValueError("no records")
    models = panels[0].models
    sizes, avg_rank = _average_over_series(panels, models, lambda p: p.ranks)
    _, avg_mase = _average_over_series(panels, models, lambda p: p.mase)
    rank_s = np.column_stack([trailing_mean(avg_rank[:, j], window) for j in range(len(models))])
    mase_s = np.column_stack([trailing_mean(avg_mase[:, j], window) for j in range(len(models))])
    types = {m: model_types[m] for m in models}
    type_loess = {}
    for kind in sorted(set(types.values())):
        cols = [j for j, m in enumerate(models) if types[m] == kind]
        xs = np.tile(sizes.astype(float), len(cols))
        ys = rank_s[:, cols].T.ravel()
        type_loess[kind] = loess(xs, ys, sizes.astype(float), span)
    return LearningCurves(sizes, models, avg_rank, rank_s, avg_mase, mase_s, types,
                          type_loess, window)


def summarize_avg_rank(records, models=None) -> list[tuple[str, float]]:
    """Mean over train sizes of the cross-series average rank, best first."""
    panels = build_panels(records, models)
    if not panels:
        return []
    models = panels[0].models
    _, avg_rank = _average_over_series(panels, models, lambda p: p.ranks)
    means = np.nanmean(avg_rank, axis=0)
    return sorted(zip(models, means.tolist()), key=lambda kv: (kv[1], kv[0]))


def cc_ratio(model_total_time: float, naive2_total_time: float) -> float:
    """Total time of a model relative to the seasonal naive benchmark."""
    if not naive2_total_time > 0:
        raise ValueError("Naive2 total time must be positive")
    return float(model_total_time) / float(naive2_total_time)


def cc_table(records, reference: str = "Naive2") -> dict[str, float]:
    """Computational-complexity ratio of every model from summed elapsed times."""
    totals: dict[str, int] = {}
    for r in records:
        totals[r.model_id] = totals.get(r.model_id, 0) + int(r.elapsed_ns)
    if reference not in totals:
        raise ValueError(f"{reference} is required for computational-complexity ratios")
    return {m: cc_ratio(t, totals[reference]) for m, t in sorted(totals.items())}


def failure_counts(records) -> dict[str, dict[str, int]]:
    """Per-model counts of failed, undefined-MASE, fallback and undefined-SMAPE records."""
    out: dict[str, dict[str, int]] = {}
    for r in records:
        c = out.setdefault(r.model_id, {"failed": 0, "mase_undefined": 0, "fallback": 0,
                                         "smape_undefined_terms": 0})
        c["failed"] += int(r.failed)
        c["mase_undefined"] += int(not r.failed and not math.isfinite(r.mase))
        c["fallback"] += int(getattr(r, "fallback", False))
        c["smape_undefined_terms"] += int(r.smape_undefined)
    return dict(sorted(out.items()))
