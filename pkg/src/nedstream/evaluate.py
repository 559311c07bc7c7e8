"""Matching detected topics against ground truth and computing recall/precision metrics."""
from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .errors import FileUnreadable, NoGroundTruth, SchemaMismatch, ZeroDetections


class EvalMode(str, enum.Enum):
    TWEET_SLOTS = "tweet-slots"
    ARTICLE_DAYS = "article-days"


def _norm(s: str) -> str:
    return " ".join(str(s).casefold().split())


@dataclass(frozen=True)
class GroundTruthTopic:
    slot_index: int
    headline: str
    mandatory_keywords: frozenset[str]
    optional_keywords: frozenset[str] = frozenset()

    def __post_init__(self):
        mand = frozenset(_norm(k) for k in self.mandatory_keywords if _norm(k))
        opt = frozenset(_norm(k) for k in self.optional_keywords if _norm(k)) - mand
        if not mand:
            raise ValueError(f"topic {self.headline!r} has no mandatory keywords")
        object.__setattr__(self, "mandatory_keywords", mand)
        object.__setattr__(self, "optional_keywords", opt)

    @property
    def keywords(self) -> frozenset[str]:
        return self.mandatory_keywords | self.optional_keywords

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "GroundTruthTopic":
        return cls(int(rec["slot"]), str(rec.get("headline", "")),
                   frozenset(rec["mandatory"]), frozenset(rec.get("optional") or ()))

    def to_record(self) -> dict:
        return {"slot": self.slot_index, "headline": self.headline,
                "mandatory": sorted(self.mandatory_keywords), "optional": sorted(self.optional_keywords)}


def load_ground_truth(path: str | Path) -> list[GroundTruthTopic]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise FileUnreadable(f"cannot read ground truth {path}: {exc}") from None
    out = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            out.append(GroundTruthTopic.from_record(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise SchemaMismatch(f"{path}:{lineno}: bad ground-truth record ({exc})") from None
    if not out:
        raise NoGroundTruth(f"{path} holds no ground-truth topics")
    return out


Detections = Mapping[int, Sequence[Sequence[str]]]   # slot -> ranked topics -> terms


def load_detections(path: str | Path) -> dict[int, list[list[str]]]:
    """Read ``detect`` output: a JSON array of ``{"block", "events"}`` objects (or JSONL of them)."""
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileUnreadable(f"cannot read summaries {path}: {exc}") from None
    try:
        data = json.loads(raw) if raw.strip() else []
    except json.JSONDecodeError:
        try:
            data = [json.loads(line) for line in raw.splitlines() if line.strip()]
        except json.JSONDecodeError as exc:
            raise SchemaMismatch(f"{path} is neither JSON nor JSONL: {exc}") from None
    if isinstance(data, Mapping):
        data = data.get("blocks", [data] if "block" in data else None)
    if not isinstance(data, list):
        raise SchemaMismatch(f"{path}: expected a list of block summaries")
    out: dict[int, list[list[str]]] = {}
    try:
        for blk in data:
            out.setdefault(int(blk["block"]), []).extend(
                [str(t["t"]) for t in ev["terms"]] for ev in blk["events"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaMismatch(f"{path}: malformed block summary ({exc!r})") from None
    return out


def _tokens(s: str) -> frozenset[str]:
    return frozenset(_norm(s).split())


def covers(term: str, keyword: str, expand: bool = True) -> bool:
    """Does a detected term account for a ground-truth keyword?

    Exact mode compares normalized strings. Expanded mode also lets a
    multi-word term supply its words, so "steven gerrard" covers "gerrard".
    """
    t, k = _norm(term), _norm(keyword)
    if t == k:
        return True
    return expand and _tokens(k) <= _tokens(t)


def expand_terms(terms: Iterable[str]) -> set[str]:
    out = set()
    for t in terms:
        out.add(_norm(t))
        out.update(_tokens(t))
    return out


def _covered(keyword: str, terms: Iterable[str], expand: bool) -> bool:
    return any(covers(t, keyword, expand) for t in terms)


def match_topic(detected_terms: Iterable[str], gt: GroundTruthTopic, expand: bool = True) -> bool:
    """True iff every mandatory keyword is covered by some detected term."""
    terms = list(detected_terms)
    return all(_covered(k, terms, expand) for k in gt.mandatory_keywords)


@dataclass(frozen=True)
class MatchedPair:
    slot: int
    detected_index: int
    detected_terms: tuple[str, ...]
    topic: GroundTruthTopic


def _by_slot(gts: Iterable[GroundTruthTopic]) -> dict[int, list[GroundTruthTopic]]:
    out: dict[int, list[GroundTruthTopic]] = {}
    for g in gts:
        out.setdefault(g.slot_index, []).append(g)
    return out


def _truncate(detections: Detections, top_n: int | None) -> dict[int, list[tuple[str, ...]]]:
    return {int(s): [tuple(t) for t in topics][:top_n] for s, topics in detections.items()}


def matched_pairs(detections: Detections, gts: Sequence[GroundTruthTopic],
                  top_n: int | None = None, expand: bool = True) -> list[MatchedPair]:
    dets = _truncate(detections, top_n)
    pairs = []
    for slot, topics in sorted(_by_slot(gts).items()):
        for i, terms in enumerate(dets.get(slot, ())):
            for gt in topics:
                if match_topic(terms, gt, expand):
                    pairs.append(MatchedPair(slot, i, terms, gt))
    return pairs


def topic_recall(detections: Detections, gts: Sequence[GroundTruthTopic],
                 top_n: int | None = None, expand: bool = True) -> float:
    """Fraction of ground-truth topics matched by a detected topic in their slot."""
    if not gts:
        raise NoGroundTruth("topic recall needs at least one ground-truth topic")
    hit = {id(p.topic) for p in matched_pairs(detections, gts, top_n, expand)}
    return sum(id(g) in hit for g in gts) / len(gts)


@dataclass(frozen=True)
class KeywordCounts:
    correct_detected: int = 0    # detected terms that cover a keyword of their matched topic(s)
    detected: int = 0            # all terms of matched detected topics
    recovered: int = 0           # ground-truth keywords covered by their matched detections
    relevant: int = 0            # all keywords of matched ground-truth topics


def keyword_counts(pairs: Sequence[MatchedPair], expand: bool = True) -> KeywordCounts:
    det_keywords: dict[tuple[int, int], tuple[tuple[str, ...], set[str]]] = {}
    gt_terms: dict[int, tuple[GroundTruthTopic, list[str]]] = {}
    for p in pairs:
        terms, kws = det_keywords.setdefault((p.slot, p.detected_index), (p.detected_terms, set()))
        kws.update(p.topic.keywords)
        gt_terms.setdefault(id(p.topic), (p.topic, []))[1].extend(p.detected_terms)
    correct = detected = 0
    for terms, kws in det_keywords.values():
        detected += len(terms)
        correct += sum(any(covers(t, k, expand) for k in kws) for t in terms)
    recovered = relevant = 0
    for topic, terms in gt_terms.values():
        relevant += len(topic.keywords)
        recovered += sum(_covered(k, terms, expand) for k in topic.keywords)
    return KeywordCounts(correct, detected, recovered, relevant)


def keyword_precision_recall(pairs: Sequence[MatchedPair], expand: bool = True) -> tuple[float, float]:
    """Micro-averaged keyword precision and recall over matched (detected, truth) pairs."""
    c = keyword_counts(pairs, expand)
    precision = c.correct_detected / c.detected if c.detected else 0.0
    recall = c.recovered / c.relevant if c.relevant else 0.0
    return precision, recall


def detection_precision(n_detected: int, matched_count: int) -> float:
    """Matched ground-truth topics over all detected topics."""
    if n_detected <= 0:
        raise ZeroDetections("precision is undefined without detected topics")
    return matched_count / n_detected


@dataclass
class EvalReport:
    mode: str
    topic_recall: float
    keyword_precision: float
    keyword_recall: float
    precision: float
    n_ground_truth: int
    n_detected: int
    n_matched: int
    per_slot: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        if self.mode == EvalMode.TWEET_SLOTS.value:
            head = ("T-REC", "K-PREC", "K-REC")
            vals = (self.topic_recall, self.keyword_precision, self.keyword_recall)
        else:
            head = ("Precision", "Recall")
            vals = (self.precision, self.topic_recall)
        lines = ["{:<8}".format("Method") + "".join(f"{h:>12}" for h in head),
                 "{:<8}".format("NED") + "".join(f"{v * 100:>11.2f}%" for v in vals)]
        return "\n".join(lines) + "\n"


def evaluate(detections: Detections, gts: Sequence[GroundTruthTopic],
             mode: EvalMode | str = EvalMode.TWEET_SLOTS, top_n: int | None = None,
             expand: bool = True) -> EvalReport:
    """Compute all metrics. Tweet-slot mode keeps the top 2 topics per slot unless ``top_n`` is given."""
    if not gts:
        raise NoGroundTruth("evaluation needs at least one ground-truth topic")
    mode = EvalMode(mode)
    if top_n is None and mode is EvalMode.TWEET_SLOTS:
        top_n = 2
    dets = _truncate(detections, top_n)
    pairs = matched_pairs(dets, gts, None, expand)
    matched_gt = {id(p.topic) for p in pairs}
    n_detected = sum(len(v) for v in dets.values())
    p, r = keyword_precision_recall(pairs, expand)
    per_slot = []
    for slot in sorted(set(_by_slot(gts)) | set(dets)):
        sp = [q for q in pairs if q.slot == slot]
        c = keyword_counts(sp, expand)
        topics = _by_slot(gts).get(slot, [])
        per_slot.append({"slot": slot, "gt_topics": len(topics),
                         "matched": sum(id(g) in matched_gt for g in topics),
                         "detected": len(dets.get(slot, ())), **asdict(c)})
    return EvalReport(
        mode=mode.value,
        topic_recall=len(matched_gt) / len(gts),
        keyword_precision=p,
        keyword_recall=r,
        precision=detection_precision(n_detected, len(matched_gt)) if n_detected else 0.0,
        n_ground_truth=len(gts), n_detected=n_detected, n_matched=len(matched_gt),
        per_slot=per_slot)


# Published NED figures for the FA Cup tweet slots and the All The News article days.
PUBLISHED = {
    EvalMode.TWEET_SLOTS.value: {"topic_recall": 0.8461, "keyword_precision": 0.2474, "keyword_recall": 0.7931},
    EvalMode.ARTICLE_DAYS.value: {"precision": 0.6698, "topic_recall": 0.5048},
}


def compare_published(report: EvalReport, tolerance_pp: float = 10.0) -> list[dict]:
    """Side-by-side with published figures; ``flag`` marks deviations over ``tolerance_pp`` points."""
    rows = []
    for metric, ref in PUBLISHED[report.mode].items():
        got = getattr(report, metric)
        dev = (got - ref) * 100
        rows.append({"metric": metric, "computed": got, "published": ref,
                     "deviation_pp": dev, "flag": abs(dev) > tolerance_pp})
    return rows
