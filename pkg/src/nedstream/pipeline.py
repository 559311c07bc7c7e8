"""End-to-end event detection: blocks -> entity graphs -> peaks -> KeyGraph events."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Sequence

from . import _kernels
from .config import ConfigError, PipelineConfig
from .entities import EntityRegistry, Gazetteer, Provider, ResolvedDocument, load_sidecar, resolve_block
from .errors import EmptyInput, InvariantViolation
from .graph import KnowledgeGraph, graph_from_term_lists
from .ingest import Document, TimeBlock, discretize, format_timestamp
from .keygraph import EventSummary, KeyGraph, build_keygraph, filter_documents, summarize
from .louvain import louvain
from .peaks import DegreeSeries, PeakDetectorConfig, build_series, peaking_entities
from .phrases import Phrase, mine_phrases
from .text import load_stopwords

logger = logging.getLogger(__name__)


@dataclass
class BlockEvents:
    block: TimeBlock
    peaking: list[str]
    filtered: list[Document]
    phrases: list[Phrase]
    keygraph: KeyGraph | None
    events: list[EventSummary]
    n_communities: int = 0

    def to_record(self) -> dict:
        return {"block": self.block.index, "start": format_timestamp(self.block.start),
                "peaking": list(self.peaking),
                "events": [e.to_record() for e in self.events]}


@dataclass
class DetectionRun:
    config: PipelineConfig
    blocks: list[TimeBlock]
    resolved: list[list[ResolvedDocument]]
    graphs: list[KnowledgeGraph]
    series: dict[str, DegreeSeries]
    block_events: list[BlockEvents] = field(default_factory=list)
    skipped_records: int = 0

    def summaries(self) -> list[dict]:
        return [b.to_record() for b in self.block_events if b.events]

    def summaries_json(self) -> str:
        return json.dumps(self.summaries(), ensure_ascii=False, indent=1) + "\n"

    def manifest(self) -> dict:
        n_docs = sum(len(b.documents) for b in self.blocks)
        counts = {
            "documents": n_docs,
            "skipped_records": self.skipped_records,
            "blocks": len(self.blocks),
            "entities": len(self.series),
            "mentions": sum(len(r.entities) for blk in self.resolved for r in blk),
            "peaks": sum(len(b.peaking) for b in self.block_events),
            "peak_blocks": len(self.block_events),
            "filtered_documents": sum(len(b.filtered) for b in self.block_events),
            "phrases": sum(len(b.phrases) for b in self.block_events),
            "communities": sum(b.n_communities for b in self.block_events),
            "events": sum(len(b.events) for b in self.block_events),
        }
        if counts["filtered_documents"] > n_docs:
            raise InvariantViolation("more filtered documents than documents")
        if counts["peaks"] > counts["entities"] * counts["blocks"]:
            raise InvariantViolation("more peaks than entity-block cells")
        return {"config": self.config.to_dict(), "config_hash": self.config.digest(),
                "kernel_backend": _kernels.BACKEND, "counts": counts}

    def report(self) -> str:
        lines = []
        for b in self.block_events:
            if not b.events:
                continue
            lines.append(f"Block {b.block.index} ({format_timestamp(b.block.start)})"
                         f"  peaking: {', '.join(b.peaking)}")
            for rank, e in enumerate(b.events, 1):
                terms = ", ".join(t for t, _ in e.terms)
                lines.append(f"  {rank}. [{e.score:.3f}] {terms}")
        return "\n".join(lines) + ("\n" if lines else "")


def resolve_blocks(blocks: Sequence[TimeBlock], cfg: PipelineConfig):
    gazetteer = Gazetteer.load(cfg.gazetteer) if cfg.gazetteer else None
    if cfg.provider is Provider.GAZETTEER and gazetteer is None:
        raise ConfigError("the gazetteer provider needs a gazetteer file")
    sidecar = load_sidecar(cfg.sidecar) if cfg.provider is Provider.EXTERNAL and cfg.sidecar else None
    if cfg.provider is Provider.EXTERNAL and sidecar is None:
        raise ConfigError("the external provider needs a sidecar annotation file")
    registry = EntityRegistry()
    return [resolve_block(b.documents, cfg.provider, gazetteer, sidecar, registry) for b in blocks]


def build_graphs(resolved: Sequence[Sequence[ResolvedDocument]]) -> list[KnowledgeGraph]:
    return [graph_from_term_lists([r.entities for r in blk], i) for i, blk in enumerate(resolved)]


def summarize_block(block: TimeBlock, resolved: Sequence[ResolvedDocument], peaking: Sequence[str],
                    cfg: PipelineConfig, stopwords: frozenset[str]) -> BlockEvents:
    ents = {r.doc.id: r.entities for r in resolved}
    spans = {r.doc.id: [m.span for m in r.mentions] for r in resolved}
    filtered = filter_documents(block.documents, peaking, ents)
    try:
        phrases = mine_phrases(filtered, cfg.min_support, cfg.sig_threshold, cfg.max_len,
                               stopwords, masks=spans)
    except EmptyInput:
        phrases = []
    kg = build_keygraph(filtered, ents, phrases, block.index, spans, stopwords)
    events: list[EventSummary] = []
    n_comm = 0
    if kg.nodes:
        part = louvain(kg, cfg.resolution)
        n_comm = len(set(part.values()))
        events = summarize(kg, part, cfg.top_k, cfg.top_events or None)
    return BlockEvents(block, list(peaking), filtered, phrases, kg, events, n_comm)


def run_detection(docs: Sequence[Document], cfg: PipelineConfig, skipped_records: int = 0) -> DetectionRun:
    blocks = discretize(docs, cfg.block_duration, cfg.origin)
    if not blocks:
        raise EmptyInput("no documents to process")
    resolved = resolve_blocks(blocks, cfg)
    graphs = build_graphs(resolved)
    series = build_series(graphs)
    run = DetectionRun(cfg, blocks, resolved, graphs, series, skipped_records=skipped_records)
    peaks = peaking_entities(series, PeakDetectorConfig(cfg.window, cfg.threshold)) if series else {}
    stopwords = load_stopwords(cfg.stopwords)
    for idx, ents in peaks.items():
        run.block_events.append(summarize_block(blocks[idx], resolved[idx], ents, cfg, stopwords))
    return run
