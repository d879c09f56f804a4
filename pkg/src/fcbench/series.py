"""Time-series data model, corpus CSV ingestion and time-delay embedding.

Corpus layout on disk: a long-format CSV with header ``series_id,t,value``
(rows for one series contiguous and sorted by the 0-based index ``t``) plus a
sidecar metadata CSV with header ``series_id,period_m,source``. The sidecar of
``corpus.csv`` is ``corpus.meta.csv``.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

DEFAULT_CAP = 1000
DEFAULT_MIN_LENGTH = 2 * 18 + 18

CORPUS_HEADER = ("series_id", "t", "value")
META_HEADER = ("series_id", "period_m", "source")


class CorpusError(ValueError):
    """Hard schema or data violation in a corpus file."""


@dataclass(frozen=True)
class TimeSeries:
    """An identified, equally spaced univariate series.

    Parameters
    ----------
    id : str
        Series identifier.
    values : np.ndarray
        Finite observations in time order. Stored read-only.
    period_m : int
        Observations per seasonal cycle (1 means nonseasonal).
    origin_tag : str
        Label of the source corpus.
    """

    id: str
    values: np.ndarray
    period_m: int = 1
    origin_tag: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError(f"series {self.id!r}: values must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"series {self.id!r}: values must be finite")
        if int(self.period_m) < 1:
            raise ValueError(f"series {self.id!r}: period_m must be >= 1")
        if self.period_m > 1 and len(values) < 2 * self.period_m:
            raise ValueError(
                f"series {self.id!r}: length {len(values)} < 2 * period_m ({self.period_m})"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "period_m", int(self.period_m))

    def __len__(self) -> int:
        return len(self.values)

    def truncated(self, cap: int) -> "TimeSeries":
        if len(self.values) <= cap:
            return self
        return TimeSeries(self.id, self.values[:cap], self.period_m, self.origin_tag)


@dataclass
class Corpus:
    """Loaded series plus the ids rejected for being too short."""

    series: list[TimeSeries]
    rejected: list[str] = field(default_factory=list)

    def __iter__(self):
        return iter(self.series)

    def __len__(self):
        return len(self.series)

    def __getitem__(self, i):
        return self.series[i]


def resolve_corpus_paths(path) -> tuple[Path, Path]:
    """Return ``(data_csv, meta_csv)`` for a corpus file or directory."""
    path = Path(path)
    if path.is_dir():
        path = path / "corpus.csv"
    meta = path.with_name(path.stem + ".meta.csv")
    return path, meta


def read_metadata(meta_path: Path) -> dict[str, tuple[int, str]]:
    if not meta_path.exists():
        raise CorpusError(f"metadata file not found: {meta_path}")
    out: dict[str, tuple[int, str]] = {}
    with open(meta_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != META_HEADER:
            raise CorpusError(f"{meta_path}: expected header {','.join(META_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise CorpusError(f"{meta_path}:{lineno}: expected 3 fields, got {len(row)}")
            sid, period, source = (x.strip() for x in row)
            if sid in out:
                raise CorpusError(f"{meta_path}:{lineno}: duplicate series id {sid!r}")
            try:
                m = int(period)
            except ValueError:
                raise CorpusError(
                    f"{meta_path}:{lineno}: series {sid!r} has non-integer period_m {period!r}"
                ) from None
            if m < 1:
                raise CorpusError(f"{meta_path}:{lineno}: series {sid!r} has period_m < 1")
            out[sid] = (m, source)
    return out


def read_corpus_rows(data_path: Path, cap: int | None = None) -> dict[str, list[float]]:
    """Parse the long-format CSV into ``{series_id: values}``.

    Rows past ``cap`` for a series are checked only for index continuity, so a
    missing value beyond the truncation point is not an error.
    """
    if not data_path.exists():
        raise CorpusError(f"corpus file not found: {data_path}")
    series: dict[str, list[float]] = {}
    current = None
    with open(data_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CorpusError(f"{data_path}: empty file")
        if tuple(h.strip() for h in header) != CORPUS_HEADER:
            raise CorpusError(f"{data_path}: expected header {','.join(CORPUS_HEADER)}")
        expected_t = 0
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise CorpusError(f"{data_path}:{lineno}: expected 3 fields, got {len(row)}")
            sid, t_raw, v_raw = (x.strip() for x in row)
            if sid != current:
                if sid in series:
                    raise CorpusError(
                        f"{data_path}:{lineno}: duplicate series id {sid!r} "
                        "(rows for a series must be contiguous)"
                    )
                series[sid] = []
                current = sid
                expected_t = 0
            try:
                t = int(t_raw)
            except ValueError:
                raise CorpusError(
                    f"{data_path}:{lineno}: series {sid!r} has non-integer t {t_raw!r}"
                ) from None
            if t != expected_t:
                raise CorpusError(
                    f"{data_path}:{lineno}: series {sid!r} expected t={expected_t}, got t={t}"
                )
            expected_t += 1
            if cap is not None and t >= cap:
                continue
            if v_raw == "" or v_raw.lower() in ("na", "nan"):
                raise CorpusError(
                    f"{data_path}:{lineno}: series {sid!r} has a missing value at t={t}"
                )
            try:
                v = float(v_raw)
            except ValueError:
                raise CorpusError(
                    f"{data_path}:{lineno}: series {sid!r} has non-numeric value {v_raw!r}"
                ) from None
            if not math.isfinite(v):
                raise CorpusError(f"{data_path}:{lineno}: series {sid!r} has non-finite value")
            series[sid].append(v)
    if not series:
        raise CorpusError(f"{data_path}: no data rows")
    return series


def load_corpus(path, cap: int = DEFAULT_CAP, min_length: int = DEFAULT_MIN_LENGTH) -> Corpus:
    """Load a corpus, truncating every series to its first ``cap`` observations.

    Series shorter than ``min_length`` after truncation are skipped, listed in
    ``Corpus.rejected`` and reported through a warning.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    data_path, meta_path = resolve_corpus_paths(path)
    rows = read_corpus_rows(data_path, cap)
    meta = read_metadata(meta_path)
    out, rejected = [], []
    for sid, values in rows.items():
        if sid not in meta:
            raise CorpusError(f"series {sid!r} has no row in {meta_path}")
        period, source = meta[sid]
        if len(values) < max(min_length, 2 * period if period > 1 else 0):
            rejected.append(sid)
            continue
        out.append(TimeSeries(sid, np.asarray(values), period, source))
    if rejected:
        warnings.warn(
            f"rejected {len(rejected)} series shorter than {min_length}: {', '.join(rejected)}",
            stacklevel=2,
        )
    return Corpus(out, rejected)


def write_corpus(series, path) -> tuple[Path, Path]:
    """Write series to ``path`` and its metadata sidecar; returns both paths."""
    data_path, meta_path = resolve_corpus_paths(path)
    data_path.parent.mkdir(parents=True, exist_ok=True)
    with open(data_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CORPUS_HEADER)
        for s in series:
            for t, v in enumerate(s.values):
                writer.writerow((s.id, t, repr(float(v))))
    with open(meta_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(META_HEADER)
        for s in series:
            writer.writerow((s.id, s.period_m, s.origin_tag))
    return data_path, meta_path


@dataclass(frozen=True)
class EmbeddedDataset:
    """Lag-matrix view of a series.

    ``features[i]`` holds ``(y[i+p-1], ..., y[i])`` (most recent lag first) and
    ``targets[i] == y[i+p]``.
    """

    features: np.ndarray
    targets: np.ndarray
    p: int


def embed(values, p: int = 10) -> EmbeddedDataset:
    """Time-delay embedding of order ``p``."""
    y = np.asarray(getattr(values, "values", values), dtype=float)
    if p < 1:
        raise ValueError("embedding order p must be positive")
    n = len(y)
    if n <= p:
        raise ValueError(f"series length {n} must exceed embedding order {p}")
    windows = np.lib.stride_tricks.sliding_window_view(y, p + 1)
    features = np.ascontiguousarray(windows[:, :p][:, ::-1])
    targets = windows[:, p].copy()
    return EmbeddedDataset(features, targets, p)
