"""Run configuration: a flat ``key = value`` text file."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .registry import MODEL_IDS

DEFAULT_MODELS = ("Naive", "Naive2", "ARIMA", "ETS", "Theta", "GLM", "RF", "GP")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    corpus_path: str = "corpus.csv"
    models: tuple = DEFAULT_MODELS
    horizon: int = 1
    start: int = 18
    cap: int = 1000
    embed_p: int = 10
    smooth_window: int = 50
    tune_every: int = 50
    seed: int = 0
    preprocess_mode: str = "global"
    workers: int = 1
    output_dir: str = "results"

    def __post_init__(self):
        unknown = [m for m in self.models if m not in MODEL_IDS]
        if unknown or not self.models:
            raise ConfigError(f"unknown model ids {unknown}; known: {', '.join(MODEL_IDS)}")
        if len(set(self.models)) != len(self.models):
            raise ConfigError("duplicate model ids")
        if self.horizon not in (1, 18):
            raise ConfigError("horizon must be 1 or 18")
        if self.preprocess_mode not in ("global", "strict"):
            raise ConfigError("preprocess_mode must be 'global' or 'strict'")
        for name in ("start", "cap", "embed_p", "smooth_window", "tune_every", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(value)
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        d = asdict(self)
        d["models"] = list(self.models)
        return d


_FIELDS = {f.name: f for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = type(getattr(RunConfig(), key))
    if kind is tuple:
        return tuple(m.strip() for m in raw.split(",") if m.strip())
    if kind is int:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {raw!r}") from None
    return raw


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines (``#`` starts a comment) into typed values."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = _coerce(key, raw)
    return values


def load_config(path=None, overrides: dict | None = None, environ=None) -> RunConfig:
    """Read a config file, then apply overrides and the ``FC_WORKERS`` variable.

    Relative ``corpus_path`` and ``output_dir`` in a file are resolved against
    the file's directory.
    """
    values = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        values = parse_config_text(text, str(path))
        for key in ("corpus_path", "output_dir"):
            if key in values and not Path(values[key]).is_absolute():
                values[key] = str(path.parent / values[key])
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = _coerce(key, value) if isinstance(value, str) else value
    env = os.environ if environ is None else environ
    if env.get("FC_WORKERS"):
        values["workers"] = _coerce("workers", env["FC_WORKERS"])
    return replace(RunConfig(), **values)
