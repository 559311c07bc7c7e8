"""Metric tests. The 3-slot fixture values are worked out by hand in the comments."""
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nedstream.errors import NoGroundTruth, SchemaMismatch, ZeroDetections
from nedstream.evaluate import (
    EvalMode, GroundTruthTopic, MatchedPair, compare_published, covers, detection_precision, evaluate,
    keyword_precision_recall, load_detections, load_ground_truth, match_topic, topic_recall,
)

FIX = Path(__file__).parent / "fixtures"


def gt(slot, mandatory, optional=(), headline="t"):
    return GroundTruthTopic(slot, headline, frozenset(mandatory), frozenset(optional))


def test_match_topic_examples():
    g = gt(0, ["gerrard", "goal"])
    assert match_topic({"gerrard", "goal"}, g)
    assert not match_topic({"gerrard"}, g)
    assert match_topic({"steven gerrard", "goal"}, g)
    assert match_topic({"steven gerrard"}, gt(0, ["gerrard"]))
    assert not match_topic({"steven gerrard"}, gt(0, ["gerrard"]), expand=False)


def test_covers_multiword_keyword():
    assert covers("fa cup final", "fa cup")
    assert not covers("cup", "fa cup")
    assert covers("FA  Cup", "fa cup", expand=False)


def test_ground_truth_normalization():
    g = gt(0, ["Gerrard ", "goal"], ["goal", "Header"])
    assert g.mandatory_keywords == {"gerrard", "goal"} and g.optional_keywords == {"header"}
    with pytest.raises(ValueError):
        gt(0, [])


def test_topic_recall_counts():
    gts = [gt(s, [f"k{s}"]) for s in range(13)]
    dets = {s: [[f"k{s}"]] for s in range(11)}
    assert topic_recall(dets, gts) == pytest.approx(11 / 13)
    assert round(topic_recall(dets, gts) * 100, 2) == 84.62
    assert topic_recall({s: [[f"k{s}"]] for s in range(13)}, gts) == 1.0
    assert topic_recall({}, gts) == 0.0
    with pytest.raises(NoGroundTruth):
        topic_recall({}, [])


def pair(slot, terms, topic, idx=0):
    return MatchedPair(slot, idx, tuple(terms), topic)


def test_keyword_single_slot():
    g = gt(0, [f"k{i}" for i in range(3)], [f"k{i}" for i in range(3, 6)])
    terms = [f"k{i}" for i in range(5)] + [f"noise{i}" for i in range(15)]
    p, r = keyword_precision_recall([pair(0, terms, g)])
    assert (p, r) == (0.25, 5 / 6)


def test_keyword_micro_average():
    g1 = gt(0, ["a0"], [f"a{i}" for i in range(1, 6)])
    g2 = gt(1, ["b0"], [f"b{i}" for i in range(1, 4)])
    p1 = pair(0, [f"a{i}" for i in range(5)] + [f"x{i}" for i in range(15)], g1)
    p2 = pair(1, [f"b{i}" for i in range(3)] + [f"y{i}" for i in range(7)], g2)
    p, r = keyword_precision_recall([p1, p2])
    assert p == pytest.approx(8 / 30) and r == pytest.approx(8 / 10)
    # not the macro average
    assert p != pytest.approx((5 / 20 + 3 / 10) / 2)


def test_keyword_exact_match():
    g = gt(0, ["gerrard"])
    assert keyword_precision_recall([pair(0, ["gerrard"], g)]) == (1.0, 1.0)
    assert keyword_precision_recall([]) == (0.0, 0.0)


def test_detection_precision():
    assert detection_precision(106, 71) == pytest.approx(0.6698, abs=5e-5)
    assert detection_precision(4, 4) == 1.0
    assert detection_precision(4, 1) == 0.25
    with pytest.raises(ZeroDetections):
        detection_precision(0, 0)


def test_three_slot_fixture_tweet_mode():
    gts = load_ground_truth(FIX / "eval_gt_3slot.jsonl")
    dets = load_detections(FIX / "eval_summaries_3slot.json")
    rep = evaluate(dets, gts, EvalMode.TWEET_SLOTS)
    # slot 0 (top 2): "steven gerrard, goal, liverpool, wembley, crowd" matches topic 0:
    #   3/5 terms correct, 3/4 keywords recovered; "referee, whistle" matches nothing.
    # slot 1: topic 1 matched with 3/6 correct, 3/3 recovered; "red card, booking" matches
    #   topic 2 with 1/2 correct, 1/1 recovered.
    # slot 2: "trophy, celebration" lacks "lift"; no match.
    assert Fraction(rep.topic_recall).limit_denominator(100) == Fraction(3, 4)
    assert rep.keyword_precision == pytest.approx(7 / 13, abs=0)
    assert rep.keyword_recall == pytest.approx(7 / 8, abs=0)
    assert rep.n_detected == 6 and rep.n_matched == 3
    assert rep.precision == 0.5
    assert [row["matched"] for row in rep.per_slot] == [1, 2, 0]


def test_three_slot_fixture_article_mode():
    gts = load_ground_truth(FIX / "eval_gt_3slot.jsonl")
    dets = load_detections(FIX / "eval_summaries_3slot.json")
    rep = evaluate(dets, gts, "article-days")
    # the third slot-0 topic also matches topic 0, which counts once: 3 matched / 7 detected
    assert rep.precision == pytest.approx(3 / 7, abs=0)
    assert rep.topic_recall == 0.75
    # keyword precision now includes "gerrard, goal": (3 + 2 + 3 + 1) / (5 + 2 + 6 + 2)
    assert rep.keyword_precision == pytest.approx(9 / 15, abs=0)
    assert rep.keyword_recall == pytest.approx(7 / 8, abs=0)


def perfect(gts):
    dets = {}
    for g in gts:
        dets.setdefault(g.slot_index, []).append(sorted(g.keywords))
    return dets


def test_perfect_detector_fixture():
    gts = load_ground_truth(FIX / "eval_gt_3slot.jsonl")
    for mode in EvalMode:
        rep = evaluate(perfect(gts), gts, mode)
        assert (rep.topic_recall, rep.keyword_precision, rep.keyword_recall, rep.precision) == (1.0, 1.0, 1.0, 1.0)


topic_st = st.builds(
    lambda slot, mand, opt: gt(slot, mand, opt - mand),
    st.integers(0, 3), st.sets(st.sampled_from(["a", "b", "c b", "d"]), min_size=1, max_size=3),
    st.sets(st.sampled_from(["e", "f", "g h"]), max_size=2))


@given(st.lists(topic_st, min_size=1, max_size=6))
def test_perfect_detector_property(gts):
    rep = evaluate(perfect(gts), gts, "article-days")
    assert rep.topic_recall == 1.0 and rep.keyword_recall == 1.0 and rep.keyword_precision == 1.0


@given(st.lists(topic_st, min_size=1, max_size=6), st.integers(0, 3))
def test_unmatched_detection_never_helps(gts, slot):
    base = perfect(gts)
    before = evaluate(base, gts, "article-days")
    extra = {s: list(v) for s, v in base.items()}
    extra.setdefault(slot, []).append(["zzz unrelated"])
    after = evaluate(extra, gts, "article-days")
    assert after.topic_recall == before.topic_recall
    assert after.precision <= before.precision
    assert after.keyword_precision <= before.keyword_precision


@given(st.lists(topic_st, min_size=1, max_size=6), st.randoms())
def test_slot_reordering_invariance(gts, rnd):
    dets = perfect(gts)
    dets[0] = dets.get(0, []) + [["a", "zzz"]]
    shuffled = list(gts)
    rnd.shuffle(shuffled)
    a = evaluate(dets, gts, "tweet-slots", top_n=10)
    b = evaluate(dict(reversed(list(dets.items()))), shuffled, "tweet-slots", top_n=10)
    assert (a.topic_recall, a.keyword_precision, a.keyword_recall, a.precision) == \
           (b.topic_recall, b.keyword_precision, b.keyword_recall, b.precision)


def test_empty_detections():
    gts = load_ground_truth(FIX / "eval_gt_3slot.jsonl")
    rep = evaluate({}, gts)
    assert rep.topic_recall == 0.0 and rep.precision == 0.0 and rep.keyword_recall == 0.0


def test_schema_errors(tmp_path):
    bad = tmp_path / "s.json"
    bad.write_text('[{"block": 0, "events": [{"terms": [{"x": 1}]}]}]')
    with pytest.raises(SchemaMismatch):
        load_detections(bad)
    bad.write_text('{"nope": 1}')
    with pytest.raises(SchemaMismatch):
        load_detections(bad)
    g = tmp_path / "gt.jsonl"
    g.write_text('{"slot": 0}\n')
    with pytest.raises(SchemaMismatch):
        load_ground_truth(g)
    g.write_text("\n")
    with pytest.raises(NoGroundTruth):
        load_ground_truth(g)


def test_jsonl_summaries(tmp_path):
    p = tmp_path / "s.jsonl"
    p.write_text('{"block": 1, "events": [{"terms": [{"t": "a"}]}]}\n{"block": 2, "events": []}\n')
    assert load_detections(p) == {1: [["a"]], 2: []}


def test_report_table_and_published():
    gts = load_ground_truth(FIX / "eval_gt_3slot.jsonl")
    rep = evaluate(load_detections(FIX / "eval_summaries_3slot.json"), gts)
    table = rep.table()
    assert "T-REC" in table and "75.00%" in table
    rows = {r["metric"]: r for r in compare_published(rep)}
    assert rows["topic_recall"]["published"] == 0.8461
    assert rows["topic_recall"]["flag"] is False      # 75.00 vs 84.61: 9.61 pp
    assert rows["keyword_recall"]["flag"] is False    # 87.50 vs 79.31
    assert rows["keyword_precision"]["flag"] is True  # 53.85 vs 24.74
