
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nedstream.errors import EmptySequence, SeriesTooShort
from nedstream.graph import graph_from_term_lists
from nedstream.peaks import (
    DegreeSeries, PeakDetectorConfig, build_series, detect_all, detect_peaks, peaking_entities, rolling_stats,
    series_csv,
)

from oracles import brute_peaks

CFG = PeakDetectorConfig()


def series(values, name="e"):
    return DegreeSeries(name, np.asarray(values, dtype=float))


def test_defaults():
    assert (CFG.window, CFG.threshold) == (5, 2.0)
    with pytest.raises(ValueError):
        PeakDetectorConfig(window=1)
    with pytest.raises(ValueError):
        PeakDetectorConfig(threshold=0)


def test_build_series_zero_fill():
    graphs = [graph_from_term_lists([["A", "A", "B", "C"]], 0), graph_from_term_lists([["B", "C"]], 1),
              graph_from_term_lists([["A", "A", "B", "C"]] * 2, 2)]
    s = build_series(graphs)
    assert list(s) == ["A", "B", "C"]
    assert s["A"].values.tolist() == [1.5, 0.0, 3.0]
    assert s["A"].diffs.tolist() == [-1.5, 3.0]


def test_build_series_single_block_and_empty():
    s = build_series([graph_from_term_lists([["A", "B"]])])
    assert len(s["A"]) == 1 and len(s["A"].diffs) == 0
    with pytest.raises(EmptySequence):
        build_series([])
    with pytest.raises(ValueError):
        build_series([graph_from_term_lists([], 0), graph_from_term_lists([], 2)])


def test_constant_diffs():
    assert series([2, 2, 2]).diffs.tolist() == [0, 0]


def test_spike_after_flat_window(kernels):
    # diffs [0,0,0,0,0,10]: m = 0, s = 0 and 10 > 0
    values = [0, 0, 0, 0, 0, 0, 10]
    peaks = detect_peaks(series(values))
    assert [(p.block_index, p.diff_value, p.rolling_mean, p.rolling_std) for p in peaks] == [(6, 10.0, 0.0, 0.0)]
    _, _, flags = kernels.rolling_peaks(np.array(values, float), 5, 2.0)
    assert flags[0].tolist() == [False] * 6 + [True]


@pytest.mark.parametrize("y", [0.5, 2, 4, 100])
def test_constant_series_never_peaks(y):
    assert detect_peaks(series([3.0] * 20), PeakDetectorConfig(5, y)) == []


def test_zero_std_strict_inequality():
    # window diffs all 1.0: s = 0, so the rule reduces to diff > 1.0
    ramp = [float(i) for i in range(7)]
    assert detect_peaks(series(ramp)) == []
    assert [p.block_index for p in detect_peaks(series(ramp[:-1] + [6.5]))] == [6]
    # a float ramp has unequal rounded steps; whatever fires must match the oracle
    ramp = np.cumsum([0.0] + [0.3] * 8).tolist()
    assert [p.block_index for p in detect_peaks(series(ramp))] == brute_peaks(ramp, 5, 2.0)


def test_warm_up_and_too_short():
    assert detect_peaks(series([0, 0, 0, 0, 0, 9])) == []
    with pytest.raises(SeriesTooShort):
        detect_peaks(series([0, 0, 0, 0, 9]))


def test_negative_excursions_ignored():
    assert detect_peaks(series([10, 10, 10, 10, 10, 10, 0])) == []


def test_brexit_like_series():
    # quiet noisy baseline, referendum spike, slow decay, smaller late spike
    rng = np.random.default_rng(3)
    base = 2 + rng.normal(0, 0.3, 40)
    base[20] += 25
    base[21:26] += np.linspace(10, 2, 5)
    base[33] += 8
    s = {"nigel farage": series(base, "nigel farage"), "boris johnson": series(2 + rng.normal(0, 0.3, 40))}
    by_block = peaking_entities(s)
    assert "nigel farage" in by_block[20]
    y4 = peaking_entities(s, PeakDetectorConfig(5, 4.0))
    first = min(b for b, ents in y4.items() if "nigel farage" in ents)
    assert first == 20
    assert {(b, e) for b, es in y4.items() for e in es} <= {(b, e) for b, es in by_block.items() for e in es}


def test_peaking_entities_grouping():
    s = {n: series([0, 0, 0, 0, 0, 0, 0, 5]) for n in ("b", "a")}
    s["c"] = series([1] * 8)
    assert peaking_entities(s) == {7: ["a", "b"]}
    assert peaking_entities({"c": s["c"]}) == {}


values_strategy = st.lists(
    st.one_of(st.floats(0, 50, allow_nan=False, allow_subnormal=False), st.sampled_from([0.0, 1.0, 5.0])),
    min_size=7, max_size=40)


@settings(max_examples=200)
@given(values_strategy, st.integers(2, 6), st.sampled_from([0.5, 1.0, 2.0, 3.0, 4.0]))
def test_oracle_equivalence(values, window, y):
    assume(len(values) > window)
    cfg = PeakDetectorConfig(window, y)
    got = [p.block_index for p in detect_peaks(series(values), cfg)]
    assert got == brute_peaks(values, window, y)


@given(values_strategy)
def test_threshold_monotone(values):
    lo = {p.block_index for p in detect_peaks(series(values), PeakDetectorConfig(5, 2.0))}
    hi = {p.block_index for p in detect_peaks(series(values), PeakDetectorConfig(5, 4.0))}
    assert hi <= lo


@settings(max_examples=100)
@given(st.lists(st.floats(0, 10, allow_nan=False), min_size=12, max_size=30),
       st.sampled_from([0.5, 3.0, 17.0]))
def test_scale_covariance(values, c):
    s1 = series(values)
    m, sd, _ = rolling_stats(s1)
    assume(np.all(sd[6:] > 1e-6))
    # stay clear of ties that rounding could flip
    d = np.r_[np.nan, np.diff(s1.values)]
    margin = np.abs(d[6:] - (m[6:] + 2 * sd[6:]))
    assume(np.all(margin > 1e-9 * (1 + np.abs(d[6:]))))
    a = {p.block_index for p in detect_peaks(s1)}
    b = {p.block_index for p in detect_peaks(series(np.asarray(values) * c))}
    assert a == b


def test_detect_all_matches_per_series():
    rng = np.random.default_rng(0)
    s = {f"e{i}": series(rng.random(30) * 10, f"e{i}") for i in range(20)}
    flat = detect_all(s)
    per = sorted((p for v in s.values() for p in detect_peaks(v)), key=lambda e: (e.block_index, e.entity))
    assert flat == per


def test_series_csv():
    text = series_csv(series([0, 0, 0, 0, 0, 0, 4], "nigel farage"))
    lines = text.splitlines()
    assert lines[0] == "block_index,value,diff,rolling_mean,rolling_std,is_peak"
    assert lines[1] == "0,0.0,,,,0"
    assert lines[-1] == "6,4.0,4.0,0.0,0.0,1"
    short = series_csv(series([1, 2]))
    assert short.splitlines()[-1] == "1,2.0,1.0,,,0"
