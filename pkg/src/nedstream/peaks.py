"""Weighted-degree time series and peak detection on their first differences."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import EmptySequence, SeriesTooShort
from .graph import KnowledgeGraph


@dataclass(frozen=True)
class PeakDetectorConfig:
    window: int = 5
    threshold: float = 2.0

    def __post_init__(self):
        if int(self.window) != self.window or self.window < 2:
            raise ValueError(f"window must be an integer >= 2, got {self.window}")
        if not self.threshold > 0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")


@dataclass(frozen=True)
class DegreeSeries:
    entity: str
    values: np.ndarray

    @property
    def diffs(self) -> np.ndarray:
        return np.diff(self.values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class PeakEvent:
    entity: str
    block_index: int
    diff_value: float
    rolling_mean: float
    rolling_std: float


def build_series(graphs: Sequence[KnowledgeGraph]) -> dict[str, DegreeSeries]:
    """One zero-filled degree series per entity seen in any block, keyed in sorted order."""
    if not graphs:
        raise EmptySequence("no graphs to build series from")
    for i, g in enumerate(graphs):
        if g.block_index != graphs[0].block_index + i:
            raise ValueError(f"graphs are not a gapless block sequence at position {i}")
    entities = sorted({v for g in graphs for v in g.nodes})
    pos = {v: i for i, v in enumerate(entities)}
    mat = np.zeros((len(entities), len(graphs)))
    for t, g in enumerate(graphs):
        for v, d in g.degrees().items():
            mat[pos[v], t] = d
    return {v: DegreeSeries(v, mat[i]) for i, v in enumerate(entities)}


def _check_length(n: int, cfg: PeakDetectorConfig) -> None:
    if n <= cfg.window:
        raise SeriesTooShort(f"series of {n} blocks is too short for a window of {cfg.window}")


def rolling_stats(series: DegreeSeries, cfg: PeakDetectorConfig = PeakDetectorConfig()):
    """Per-block rolling mean, rolling std and peak flag (NaN/False during warm-up)."""
    _check_length(len(series), cfg)
    means, stds, peaks = _kernels.rolling_peaks(series.values, cfg.window, cfg.threshold)
    return means[0], stds[0], peaks[0]


def detect_peaks(series: DegreeSeries, cfg: PeakDetectorConfig = PeakDetectorConfig()) -> list[PeakEvent]:
    """Blocks where the change into the block exceeds ``mean + threshold * std``.

    The statistics come from the ``window`` changes strictly before the
    block (sample std). Blocks ``0 .. window`` are warm-up and never fire.
    """
    means, stds, peaks = rolling_stats(series, cfg)
    v = series.values
    return [PeakEvent(series.entity, int(t), float(v[t] - v[t - 1]), float(means[t]), float(stds[t]))
            for t in np.flatnonzero(peaks)]


def detect_all(all_series: Mapping[str, DegreeSeries],
               cfg: PeakDetectorConfig = PeakDetectorConfig()) -> list[PeakEvent]:
    """``detect_peaks`` for every series in one kernel call."""
    if not all_series:
        return []
    names = list(all_series)
    mat = np.vstack([all_series[v].values for v in names])
    _check_length(mat.shape[1], cfg)
    means, stds, peaks = _kernels.rolling_peaks(mat, cfg.window, cfg.threshold)
    out = []
    for r, t in zip(*np.nonzero(peaks)):
        v = mat[r]
        out.append(PeakEvent(names[r], int(t), float(v[t] - v[t - 1]),
                             float(means[r, t]), float(stds[r, t])))
    return sorted(out, key=lambda e: (e.block_index, e.entity))


def peaking_entities(all_series: Mapping[str, DegreeSeries],
                     cfg: PeakDetectorConfig = PeakDetectorConfig()) -> dict[int, list[str]]:
    """Block index -> sorted peaking entities; blocks without peaks are absent."""
    out: dict[int, list[str]] = {}
    for ev in detect_all(all_series, cfg):
        out.setdefault(ev.block_index, []).append(ev.entity)
    return {b: sorted(v) for b, v in sorted(out.items())}


CSV_HEADER = ("block_index", "value", "diff", "rolling_mean", "rolling_std", "is_peak")


def series_csv(series: DegreeSeries, cfg: PeakDetectorConfig = PeakDetectorConfig()) -> str:
    n = len(series)
    if n > cfg.window:
        means, stds, peaks = rolling_stats(series, cfg)
    else:
        means = stds = np.full(n, np.nan)
        peaks = np.zeros(n, bool)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    v = series.values
    for t in range(n):
        w.writerow([t, repr(float(v[t])),
                    "" if t == 0 else repr(float(v[t] - v[t - 1])),
                    "" if np.isnan(means[t]) else repr(float(means[t])),
                    "" if np.isnan(stds[t]) else repr(float(stds[t])),
                    int(bool(peaks[t]))])
    return buf.getvalue()
