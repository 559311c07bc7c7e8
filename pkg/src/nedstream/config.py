"""Pipeline configuration, read from a TOML file plus command-line overrides."""
from __future__ import annotations

import hashlib
import json
import re
import sys
from dataclasses import asdict, dataclass, fields, replace
from datetime import datetime, timedelta
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .entities import Provider
from .errors import FileUnreadable, NedError
from .ingest import parse_timestamp

_UNITS = {"ms": 0.001, "s": 1, "sec": 1, "m": 60, "min": 60, "h": 3600, "d": 86400, "w": 604800}


def parse_duration(value: Any) -> timedelta:
    """``"1d"``, ``"90s"``, ``"1min"``, ``"500ms"`` or a number of seconds."""
    if isinstance(value, timedelta):
        return value
    if isinstance(value, (int, float)):
        return timedelta(seconds=value)
    m = re.fullmatch(r"\s*(\d+(?:\.\d+)?)\s*([a-z]*)\s*", str(value).lower())
    if not m or m.group(2) not in _UNITS | {"": 1}:
        raise ValueError(f"cannot parse duration {value!r}")
    return timedelta(seconds=float(m.group(1)) * _UNITS.get(m.group(2), 1))


def format_duration(td: timedelta) -> str:
    secs = td.total_seconds()
    for unit in ("w", "d", "h", "min", "s"):
        if secs >= _UNITS[unit] and secs % _UNITS[unit] == 0:
            return f"{int(secs // _UNITS[unit])}{unit}"
    return f"{round(secs * 1000)}ms"


class ConfigError(NedError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    block_duration: timedelta = timedelta(days=1)
    origin: datetime | None = None
    window: int = 5
    threshold: float = 2.0
    min_support: int = 3
    sig_threshold: float = 2.0
    max_len: int = 4
    resolution: float = 1.0
    top_k: int = 10
    top_events: int = 0          # 0 keeps every community
    provider: Provider = Provider.GAZETTEER
    gazetteer: str | None = None
    stopwords: str | None = None
    sidecar: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "block_duration", parse_duration(self.block_duration))
        if self.origin is not None and not isinstance(self.origin, datetime):
            object.__setattr__(self, "origin", parse_timestamp(self.origin))
        object.__setattr__(self, "provider", Provider(self.provider))
        for name in ("window", "min_support", "max_len", "top_k", "top_events"):
            object.__setattr__(self, name, int(getattr(self, name)))
        for name in ("threshold", "sig_threshold", "resolution"):
            object.__setattr__(self, name, float(getattr(self, name)))
        problems = []
        if self.block_duration <= timedelta(0):
            problems.append("block_duration must be positive")
        if self.window < 2:
            problems.append("window must be >= 2")
        if self.threshold <= 0:
            problems.append("threshold must be positive")
        if self.min_support < 1 or self.max_len < 1 or self.top_k < 1 or self.top_events < 0:
            problems.append("min_support, max_len, top_k must be >= 1 and top_events >= 0")
        if self.resolution <= 0:
            problems.append("resolution must be positive")
        if problems:
            raise ConfigError("; ".join(problems))

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "PipelineConfig":
        data = dict(data.get("nedstream", data))
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise FileUnreadable(f"cannot read config {path}: {exc}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config {path} is not valid TOML: {exc}") from None
        return cls.from_mapping(data)

    def override(self, **kw) -> "PipelineConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        try:
            return replace(self, **kw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["block_duration"] = format_duration(self.block_duration)
        d["origin"] = None if self.origin is None else self.origin.isoformat()
        d["provider"] = self.provider.value
        return d

    def to_toml(self) -> str:
        lines = []
        for k, v in self.to_dict().items():
            if v is None:
                continue
            lines.append(f"{k} = {json.dumps(v)}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()
