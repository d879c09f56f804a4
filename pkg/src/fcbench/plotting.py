"""SVG figures: learning curves and computational-complexity bars."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .evaluation import build_learning_curves, cc_table  # noqa: E402
from .registry import MODEL_IDS, model_type  # noqa: E402

PLOT_KINDS = ("curve_rank", "curve_rank_no_naive2", "curve_mase", "cc_bars")
REFERENCE_SIZE = 144
TYPE_LABELS = {"statistical": "Statistical", "ml": "Machine learning"}
TYPE_CMAPS = {"statistical": "Blues", "ml": "Reds"}
TYPE_COLORS = {"statistical": "#08306b", "ml": "#67000d"}


class PlotError(ValueError):
    pass


def _check_models(records):
    unknown = sorted({r.model_id for r in records} - set(MODEL_IDS))
    if unknown:
        raise PlotError(f"unknown model ids in results: {', '.join(unknown)}")


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed salt and no date keep the SVG bytes reproducible
    with matplotlib.rc_context({"svg.hashsalt": "fcbench"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_curves(records, kind: str, out_path, window: int = 50) -> Path:
    """Per-model smoothed curves coloured by model type, with bold type-level LOESS lines."""
    _check_models(records)
    if kind == "curve_rank_no_naive2":
        records = [r for r in records if r.model_id != "Naive2"]
        if not records:
            raise PlotError("no models left after excluding Naive2")
    models = sorted({r.model_id for r in records})
    types = {m: model_type(m) for m in models}
    curves = build_learning_curves(records, types, window, models=models)
    x = curves.train_sizes
    metric = "MASE" if kind == "curve_mase" else "average rank"
    values = curves.avg_mase_smoothed if kind == "curve_mase" else curves.avg_rank_smoothed
    fig, ax = plt.subplots(figsize=(9, 5.5))
    for kind_name in sorted(set(types.values())):
        members = [m for m in models if types[m] == kind_name]
        shades = plt.get_cmap(TYPE_CMAPS[kind_name])(np.linspace(0.45, 0.85, len(members)))
        for colour, m in zip(shades, members):
            j = curves.models.index(m)
            (line,) = ax.plot(x, values[:, j], color=colour, linewidth=1.0, label=m)
            line.set_gid(f"curve-{m}")
        if kind != "curve_mase":
            (line,) = ax.plot(x, curves.type_loess[kind_name], color=TYPE_COLORS[kind_name],
                              linewidth=3.2, label=f"{TYPE_LABELS[kind_name]} (LOESS)")
            line.set_gid(f"loess-{kind_name}")
    ref = ax.axvline(REFERENCE_SIZE, color="black", linewidth=1.2)
    ref.set_gid(f"reference-{REFERENCE_SIZE}")
    horizon = records[0].horizon
    suffix = " (Naive2 excluded)" if kind == "curve_rank_no_naive2" else ""
    ax.set_title(f"Learning curve, {metric}, h={horizon}{suffix}; moving average of {window}")
    ax.set_xlabel("training sample size")
    ax.set_ylabel(metric)
    ax.legend(loc="best", fontsize=8, ncol=2)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    return _save(fig, Path(out_path))


def plot_cc_bars(records, out_path) -> Path:
    """Log10-scaled bars of each model's time relative to Naive2, raw ratio printed in the bar."""
    _check_models(records)
    ratios = cc_table(records)
    models = sorted(ratios, key=lambda m: (ratios[m], m))
    heights = [math.log10(ratios[m]) for m in models]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    bars = ax.bar(models, heights,
                  color=[TYPE_COLORS[model_type(m)] for m in models], alpha=0.8)
    top = max(max(heights), 0.0)
    for m, bar, h in zip(models, bars, heights):
        bar.set_gid(f"bar-{m}")
        y = h / 2 if abs(h) > 0.08 * max(top, 1e-9) else 0.02 * max(top, 1.0)
        text = ax.text(bar.get_x() + bar.get_width() / 2, y, f"{ratios[m]:.3g}",
                       ha="center", va="center", fontsize=9,
                       color="white" if abs(h) > 0.08 * max(top, 1e-9) else "black")
        text.set_gid(f"label-{m}")
    ax.axhline(0, color="black", linewidth=0.8)
    ax.set_ylabel("log10(time / Naive2 time)")
    ax.set_title("Computational complexity relative to Naive2 (log scaled)")
    fig.tight_layout()
    return _save(fig, Path(out_path))


def make_plot(records, kind: str, out_dir, window: int = 50) -> Path:
    if kind not in PLOT_KINDS:
        raise PlotError(f"unknown plot kind {kind!r}; choose from {', '.join(PLOT_KINDS)}")
    if not records:
        raise PlotError("no results to plot")
    horizon = records[0].horizon
    out = Path(out_dir) / f"{kind}_h{horizon}.svg"
    if kind == "cc_bars":
        return plot_cc_bars(records, out)
    return plot_curves(records, kind, out, window)
