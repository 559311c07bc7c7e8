"""Reading document streams and cutting them into time blocks."""
from __future__ import annotations

import csv
import enum
import json
import logging
import math
import re
import unicodedata
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .errors import (
    AnnotationSpanInvalid,
    DuplicateId,
    FileUnreadable,
    NonPositiveDuration,
    NoValidRecords,
    OriginAfterData,
    UnsortedInput,
)
from .mentions import EntityMention, check_span, mention_from_record

logger = logging.getLogger(__name__)

_WS = re.compile(r"\s+")
EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


class SourceKind(str, enum.Enum):
    ARTICLE = "article"
    TWEET = "tweet"


class CorpusFormat(str, enum.Enum):
    JSONL = "jsonl"
    CSV = "csv"


@dataclass(frozen=True)
class Document:
    id: str
    timestamp: datetime
    text: str
    source_kind: SourceKind = SourceKind.ARTICLE
    pre_annotations: tuple[EntityMention, ...] | None = None


@dataclass(frozen=True)
class TimeBlock:
    index: int
    start: datetime
    duration: timedelta
    documents: tuple[Document, ...] = ()

    @property
    def end(self) -> datetime:
        return self.start + self.duration

    def __len__(self) -> int:
        return len(self.documents)


class DocumentList(list):
    """Parsed documents in timestamp order; ``skipped`` counts malformed records."""

    def __init__(self, docs: Iterable[Document] = (), skipped: int = 0):
        super().__init__(docs)
        self.skipped = skipped


def normalize_text(text: str) -> str:
    return _WS.sub(" ", unicodedata.normalize("NFC", text)).strip()


def _normalized_offset(raw: str, i: int) -> int:
    prefix = _WS.sub(" ", unicodedata.normalize("NFC", raw[:i])).lstrip()
    return len(prefix)


def _remap_mention(m: EntityMention, raw: str, text: str) -> EntityMention:
    if raw == text:
        return m
    start, end = m.span
    if not (0 <= start < end <= len(raw)):
        raise AnnotationSpanInvalid(f"span {m.span} outside text of length {len(raw)}")
    new_start = _normalized_offset(raw, start)
    new_end = len(normalize_text(raw[:end]))
    return EntityMention(normalize_text(m.surface), m.kind, (new_start, new_end))


def parse_timestamp(value: Any) -> datetime:
    """ISO-8601 string or integer epoch milliseconds -> aware UTC datetime (ms precision)."""
    if isinstance(value, bool):
        raise ValueError("boolean is not a timestamp")
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not math.isfinite(value):
            raise ValueError("non-finite timestamp")
        ts = EPOCH + timedelta(milliseconds=int(value))
    else:
        s = str(value).strip()
        if re.fullmatch(r"-?\d+", s):
            ts = EPOCH + timedelta(milliseconds=int(s))
        else:
            if s.endswith(("Z", "z")):
                s = s[:-1] + "+00:00"
            ts = datetime.fromisoformat(s)
            if ts.tzinfo is None:
                ts = ts.replace(tzinfo=timezone.utc)
            ts = ts.astimezone(timezone.utc)
    return ts.replace(microsecond=ts.microsecond // 1000 * 1000)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat(timespec="milliseconds").replace("+00:00", "Z")


def document_from_record(rec: Mapping[str, Any]) -> Document:
    """Build a Document from one decoded record; raises ValueError/KeyError when malformed."""
    doc_id = str(rec["id"]).strip()
    if not doc_id:
        raise ValueError("empty id")
    raw = rec["text"]
    if not isinstance(raw, str):
        raise ValueError("text must be a string")
    text = normalize_text(raw)
    if not text:
        raise ValueError("empty text")
    ts = parse_timestamp(rec["timestamp"])
    kind = SourceKind(str(rec.get("source_kind") or "article").strip().lower())
    ents = rec.get("entities")
    if isinstance(ents, str):
        ents = json.loads(ents) if ents.strip() else None
    pre = None
    if ents is not None:
        pre_list = []
        for e in ents:
            m = _remap_mention(mention_from_record(e), raw, text)
            check_span(m, text)
            pre_list.append(m)
        pre = tuple(pre_list)
    return Document(doc_id, ts, text, kind, pre)


def _iter_jsonl(fh) -> Iterator[Any]:
    for lineno, line in enumerate(fh, 1):
        if not line.strip():
            continue
        try:
            yield json.loads(line)
        except json.JSONDecodeError as exc:
            logger.warning("line %d: invalid JSON (%s)", lineno, exc)
            yield None


def _iter_csv(fh) -> Iterator[Any]:
    yield from csv.DictReader(fh)


def parse_corpus(path: str | Path, format: CorpusFormat | str | None = None) -> DocumentList:
    """Read a JSONL or CSV corpus, returning documents sorted by timestamp.

    Malformed records are skipped and counted in ``result.skipped``. The
    format is inferred from the file suffix when not given.
    """
    path = Path(path)
    if format is None:
        format = CorpusFormat.CSV if path.suffix.lower() == ".csv" else CorpusFormat.JSONL
    format = CorpusFormat(str(getattr(format, "value", format)).lower())
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise FileUnreadable(f"cannot read corpus {path}: {exc}") from None

    docs: list[Document] = []
    skipped = 0
    seen: set[str] = set()
    with fh:
        try:
            records = _iter_jsonl(fh) if format is CorpusFormat.JSONL else _iter_csv(fh)
            for rec in records:
                try:
                    if not isinstance(rec, Mapping):
                        raise ValueError("record is not an object")
                    doc = document_from_record(rec)
                except (KeyError, ValueError, TypeError, AnnotationSpanInvalid) as exc:
                    skipped += 1
                    logger.debug("skipping record: %s", exc)
                    continue
                if doc.id in seen:
                    raise DuplicateId(f"duplicate document id {doc.id!r}")
                seen.add(doc.id)
                docs.append(doc)
        except UnicodeDecodeError as exc:
            raise FileUnreadable(f"cannot decode {path}: {exc}") from None
    if not docs:
        raise NoValidRecords(f"no valid records in {path} ({skipped} skipped)")
    docs.sort(key=lambda d: (d.timestamp, d.id))
    return DocumentList(docs, skipped)


def discretize(docs: Sequence[Document], block_duration: timedelta,
               origin: datetime | None = None) -> list[TimeBlock]:
    """Assign documents to blocks ``floor((t - origin) / duration)``.

    Empty blocks between occupied ones are materialized so indices form a
    gapless 0-based sequence. ``origin`` defaults to the earliest timestamp.
    """
    if block_duration <= timedelta(0):
        raise NonPositiveDuration(f"block duration must be positive, got {block_duration}")
    for a, b in zip(docs, docs[1:]):
        if b.timestamp < a.timestamp:
            raise UnsortedInput(f"document {b.id!r} precedes {a.id!r}")
    if not docs:
        return []
    if origin is None:
        origin = docs[0].timestamp
    elif origin.tzinfo is None:
        origin = origin.replace(tzinfo=timezone.utc)
    if origin > docs[0].timestamp:
        raise OriginAfterData(f"origin {origin} is after the first document {docs[0].timestamp}")

    buckets: list[list[Document]] = []
    for doc in docs:
        idx = (doc.timestamp - origin) // block_duration
        while len(buckets) <= idx:
            buckets.append([])
        buckets[idx].append(doc)
    return [TimeBlock(i, origin + i * block_duration, block_duration, tuple(b))
            for i, b in enumerate(buckets)]
