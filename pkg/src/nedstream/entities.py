"""Entity annotation, person-name disambiguation and canonicalization."""
from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .errors import AnnotationSpanInvalid, FileUnreadable, MissingAnnotations
from .ingest import Document, SourceKind
from .mentions import EntityKind, EntityMention, check_span, mention_from_record
from .text import token_spans

logger = logging.getLogger(__name__)


def _fold(s: str) -> str:
    return " ".join(s.casefold().split())


class Provider(str, enum.Enum):
    PRE_ANNOTATED = "pre-annotated"
    GAZETTEER = "gazetteer"
    EXTERNAL = "external"


@dataclass(frozen=True)
class CanonicalEntity:
    canonical_name: str
    kind: EntityKind
    aliases: frozenset[str] = frozenset()


@dataclass
class Gazetteer:
    """Surface-form dictionary plus abbreviation and exception maps.

    ``entries`` maps a surface form to ``(canonical_name, kind)``. Tagging
    is greedy longest-match over case-folded tokens.
    """

    entries: dict[str, tuple[str, EntityKind]] = field(default_factory=dict)
    abbreviations: dict[str, str] = field(default_factory=dict)
    exceptions: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for surface, (name, _) in self.entries.items():
            if not name.strip():
                raise ValueError(f"gazetteer entry {surface!r} has an empty canonical name")
        self._trie: dict = {}
        self._max_len = 0
        for surface, (name, kind) in self.entries.items():
            toks = [t.casefold() for t, _, _ in token_spans(surface)]
            if not toks:
                continue
            node = self._trie
            for t in toks:
                node = node.setdefault(t, {})
            node.setdefault(None, (surface, name, kind))
            self._max_len = max(self._max_len, len(toks))
        self._entries_cf = {_fold(k): v for k, v in self.entries.items()}
        self._abbrev_cf = {_fold(k): v for k, v in self.abbreviations.items()}
        self._except_cf = {_fold(k): v for k, v in self.exceptions.items()}

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "Gazetteer":
        entries = {}
        for surface, rec in (data.get("entries") or {}).items():
            entries[surface] = (str(rec["name"]), EntityKind.parse(rec["kind"]))
        return cls(entries, dict(data.get("abbreviations") or {}), dict(data.get("exceptions") or {}))

    @classmethod
    def load(cls, path: str | Path) -> "Gazetteer":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise FileUnreadable(f"cannot read gazetteer {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise FileUnreadable(f"gazetteer {path} is not valid JSON: {exc}") from None
        return cls.from_mapping(data)

    def to_mapping(self) -> dict[str, Any]:
        return {
            "entries": {s: {"name": n, "kind": k.value} for s, (n, k) in self.entries.items()},
            "abbreviations": dict(self.abbreviations),
            "exceptions": dict(self.exceptions),
        }

    def tag(self, text: str) -> list[EntityMention]:
        toks = token_spans(text)
        folded = [t.casefold() for t, _, _ in toks]
        out = []
        i = 0
        while i < len(toks):
            node = self._trie
            best = None
            j = i
            while j < len(toks) and folded[j] in node:
                if j > i and text[toks[j - 1][2]:toks[j][1]].strip():
                    break
                node = node[folded[j]]
                j += 1
                if None in node:
                    best = (j, node[None])
            if best is None:
                i += 1
                continue
            j, (_, _, kind) = best
            start, end = toks[i][1], toks[j - 1][2]
            out.append(EntityMention(text[start:end], kind, (start, end)))
            i = j
        return out


def load_sidecar(path: str | Path) -> dict[str, tuple[EntityMention, ...]]:
    """JSONL of ``{"id": ..., "entities": [...]}`` keyed by document id."""
    out: dict[str, tuple[EntityMention, ...]] = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise FileUnreadable(f"cannot read annotation sidecar {path}: {exc}") from None
    with fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                out[str(rec["id"])] = tuple(mention_from_record(e) for e in rec.get("entities") or ())
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise AnnotationSpanInvalid(f"{path}:{lineno}: {exc}") from None
    return out


def annotate(doc: Document, provider: Provider | str, gazetteer: Gazetteer | None = None,
             sidecar: Mapping[str, Sequence[EntityMention]] | None = None) -> list[EntityMention]:
    provider = Provider(provider)
    if provider is Provider.PRE_ANNOTATED:
        if doc.pre_annotations is None:
            raise MissingAnnotations(f"document {doc.id!r} carries no entity annotations")
        mentions = list(doc.pre_annotations)
    elif provider is Provider.GAZETTEER:
        if gazetteer is None:
            raise ValueError("gazetteer provider needs a Gazetteer")
        return gazetteer.tag(doc.text)
    else:
        if sidecar is None:
            raise ValueError("external provider needs a sidecar annotation map")
        mentions = list(sidecar.get(doc.id, ()))
    for m in mentions:
        check_span(m, doc.text)
    return sorted(mentions, key=lambda m: m.span)


class PersonMemory:
    """Multi-word person names seen so far, most recent first."""

    def __init__(self):
        self._names: list[str] = []

    def remember(self, name: str) -> None:
        key = _fold(name)
        self._names = [n for n in self._names if _fold(n) != key]
        self._names.insert(0, name)

    def lookup(self, word: str) -> str | None:
        w = word.casefold()
        for name in self._names:
            if w in (t.casefold() for t in name.split()):
                return name
        return None

    def clear(self) -> None:
        self._names.clear()

    def __len__(self) -> int:
        return len(self._names)


def disambiguate_persons(mentions: Sequence[EntityMention],
                         memory: PersonMemory | None = None) -> list[EntityMention]:
    """Rewrite single-word Person mentions to the latest matching full name.

    Multi-word Person mentions are pushed into ``memory`` as they are
    encountered, so a mention can only resolve against names seen earlier
    in document order.
    """
    if memory is None:
        memory = PersonMemory()
    out = []
    for m in mentions:
        if m.kind is EntityKind.PERSON:
            words = m.surface.split()
            if len(words) > 1:
                memory.remember(m.surface)
            elif len(words) == 1:
                full = memory.lookup(words[0])
                if full is not None:
                    m = replace(m, surface=full)
        out.append(m)
    return out


def canonicalize(mention: EntityMention, gazetteer: Gazetteer | None = None,
                 expand_abbreviations: bool = True) -> CanonicalEntity:
    """Exceptions, then dictionary names, then abbreviation expansion, then case-folding.

    Rules are applied until a fixed point so that the result is idempotent.
    Abbreviations only expand for locations and organizations.
    """
    name = mention.surface
    if gazetteer is not None:
        expand = expand_abbreviations and mention.kind is not EntityKind.PERSON
        seen = {_fold(name)}
        while True:
            nxt = _rewrite_once(name, gazetteer, expand)
            if nxt is None or _fold(nxt) in seen:
                break
            seen.add(_fold(nxt))
            name = nxt
    return CanonicalEntity(_fold(name), mention.kind, frozenset({mention.surface}))


def _rewrite_once(name: str, gz: Gazetteer, expand: bool) -> str | None:
    key = _fold(name)
    hit = gz.exceptions.get(name, gz._except_cf.get(key))
    if hit is not None and _fold(hit) != key:
        return hit
    entry = gz.entries.get(name, gz._entries_cf.get(key))
    if entry is not None and _fold(entry[0]) != key:
        return entry[0]
    if expand:
        hit = gz.abbreviations.get(name, gz._abbrev_cf.get(key))
        if hit is not None and _fold(hit) != key:
            return hit
    return None


class EntityRegistry:
    """Assigns one node key per (canonical name, kind).

    The first kind seen for a name keeps the bare name; later kinds get a
    ``#kind`` suffix. Aliases accumulate across the corpus.
    """

    def __init__(self):
        self._first_kind: dict[str, EntityKind] = {}
        self.aliases: dict[str, set[str]] = {}
        self.kinds: dict[str, EntityKind] = {}

    def key(self, entity: CanonicalEntity) -> str:
        first = self._first_kind.setdefault(entity.canonical_name, entity.kind)
        k = entity.canonical_name if first is entity.kind else f"{entity.canonical_name}#{entity.kind.value.lower()}"
        self.aliases.setdefault(k, set()).update(entity.aliases)
        self.kinds[k] = entity.kind
        return k

    def __len__(self) -> int:
        return len(self.kinds)


@dataclass(frozen=True)
class ResolvedDocument:
    doc: Document
    mentions: tuple[EntityMention, ...]
    entities: tuple[str, ...]   # registry keys, in mention order (repeats kept for tf)


def resolve_block(docs: Iterable[Document], provider: Provider | str,
                  gazetteer: Gazetteer | None = None,
                  sidecar: Mapping[str, Sequence[EntityMention]] | None = None,
                  registry: EntityRegistry | None = None) -> list[ResolvedDocument]:
    """Annotate and canonicalize the documents of one time block, in order.

    Person memory spans the block's articles and resets per call. Tweets
    skip person disambiguation and abbreviation expansion.
    """
    if registry is None:
        registry = EntityRegistry()
    memory = PersonMemory()
    out = []
    for doc in docs:
        mentions = annotate(doc, provider, gazetteer, sidecar)
        is_article = doc.source_kind is SourceKind.ARTICLE
        if is_article:
            mentions = disambiguate_persons(mentions, memory)
        keys = tuple(registry.key(canonicalize(m, gazetteer, expand_abbreviations=is_article))
                     for m in mentions)
        out.append(ResolvedDocument(doc, tuple(mentions), keys))
    return out
