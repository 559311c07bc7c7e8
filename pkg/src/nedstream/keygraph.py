"""KeyGraphs over peak-related documents and community-based event summaries."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .graph import KnowledgeGraph, graph_from_term_lists
from .ingest import Document
from .phrases import Phrase, match_phrases
from .text import content_chunks, default_stopwords


@dataclass
class KeyGraph(KnowledgeGraph):
    """A KnowledgeGraph whose terms are entities plus mined phrases."""

    phrase_terms: frozenset[str] = field(default_factory=frozenset)

    def is_phrase(self, term: str) -> bool:
        return term in self.phrase_terms


@dataclass(frozen=True)
class EventSummary:
    block_index: int
    community_id: int
    terms: tuple[tuple[str, float], ...]
    score: float

    def to_record(self) -> dict:
        return {"community": self.community_id, "score": self.score,
                "terms": [{"t": t, "deg": d} for t, d in self.terms]}


def filter_documents(docs: Iterable[Document], peaking: Iterable[str],
                     annotations: Mapping[str, Sequence[str]]) -> list[Document]:
    """Documents (in order) that mention at least one peaking entity."""
    peaking = set(peaking)
    if not peaking:
        return []
    return [d for d in docs if peaking.intersection(annotations.get(d.id, ()))]


def document_terms(doc: Document, entities: Sequence[str], phrases: Iterable[Phrase],
                   mention_spans: Sequence[tuple[int, int]] = (),
                   stopwords: frozenset[str] | None = None) -> list[str]:
    """Entity keys plus phrase occurrences found outside the entity spans."""
    stopwords = default_stopwords() if stopwords is None else stopwords
    chunks = content_chunks(doc.text, stopwords, mention_spans)
    return list(entities) + match_phrases(chunks, phrases)


def build_keygraph(docs: Sequence[Document], entities_per_doc: Mapping[str, Sequence[str]],
                   phrases: Sequence[Phrase], block_index: int = 0,
                   mention_spans: Mapping[str, Sequence[tuple[int, int]]] | None = None,
                   stopwords: frozenset[str] | None = None) -> KeyGraph:
    """Co-occurrence graph over entities and phrases, weighted like the entity graph."""
    mention_spans = mention_spans or {}
    term_lists = [document_terms(d, entities_per_doc.get(d.id, ()), phrases,
                                 mention_spans.get(d.id, ()), stopwords) for d in docs]
    g = graph_from_term_lists(term_lists, block_index)
    ents = {e for d in docs for e in entities_per_doc.get(d.id, ())}
    phrase_terms = frozenset(v for v in g.nodes if v not in ents)
    return KeyGraph(g.block_index, g.nodes, g.edge_weights, g.doc_count, phrase_terms)


def summarize(g: KnowledgeGraph, partition: Mapping[str, int], top_k: int = 10,
              top_events: int | None = None) -> list[EventSummary]:
    """Rank each community's terms by weighted degree and communities by total degree.

    Ties sort lexicographically (terms) or by community id. Communities
    with zero score are dropped. ``top_events=None`` keeps all.
    """
    deg = g.degrees()
    members: dict[int, list[str]] = {}
    for v in g.nodes:
        members.setdefault(partition[v], []).append(v)
    events = []
    for cid, vs in members.items():
        score = sum(deg[v] for v in vs)
        if score <= 0:
            continue
        ranked = sorted(vs, key=lambda v: (-deg[v], v))[:top_k]
        events.append(EventSummary(g.block_index, cid, tuple((v, deg[v]) for v in ranked), score))
    events.sort(key=lambda e: (-e.score, e.community_id))
    return events if top_events is None else events[:top_events]
