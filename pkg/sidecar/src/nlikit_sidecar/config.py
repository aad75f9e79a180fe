"""Serving and fine-tuning configuration, loadable from key-value files.

Config files are plain ``key = value`` lines; blank lines and ``#`` comments
are ignored. CLI flags override file values. Documented defaults live on the
dataclasses below; none of the fine-tuning defaults claim fidelity to any
published training setup.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any


class ConfigError(ValueError):
    """Malformed config file or invalid setting."""


def parse_kv_file(path: str | Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _coerce(dataclass_type, values: dict[str, str]) -> dict[str, Any]:
    converters = {int: int, float: float, str: str}
    known = {f.name: f.type for f in fields(dataclass_type)}
    out: dict[str, Any] = {}
    for key, raw in values.items():
        if key not in known:
            raise ConfigError(f"unknown setting {key!r} for {dataclass_type.__name__}")
        annotation = known[key]
        base = {"int": int, "float": float, "str": str}.get(str(annotation), str)
        try:
            out[key] = converters[base](raw)
        except ValueError:
            raise ConfigError(f"setting {key!r}: cannot parse {raw!r} as {base.__name__}") from None
    return out


@dataclass
class ServingConfig:
    """Model serving settings; ``model`` is a checkpoint path or hub id."""

    model: str = ""
    max_seq_len: int = 128
    device: str = "cpu"
    host: str = "127.0.0.1"
    port: int = 8400
    max_batch: int = 32

    def __post_init__(self) -> None:
        if self.max_seq_len < 8:
            raise ConfigError(f"max_seq_len too small: {self.max_seq_len}")
        if self.max_batch < 1:
            raise ConfigError(f"max_batch must be positive: {self.max_batch}")

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "ServingConfig":
        values = _coerce(cls, parse_kv_file(path))
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class FinetuneConfig:
    """Fine-tuning hyperparameters. Defaults are sensible for small encoder
    checkpoints; real runs should set them explicitly in a config file."""

    model: str = ""
    out_dir: str = "checkpoint"
    epochs: int = 2
    batch_size: int = 16
    learning_rate: float = 5e-5
    max_seq_len: int = 128
    seed: int = 0

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1: {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1: {self.batch_size}")
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be > 0: {self.learning_rate}")

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "FinetuneConfig":
        values = _coerce(cls, parse_kv_file(path))
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)
