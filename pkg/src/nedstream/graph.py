"""Per-block entity co-occurrence graphs.

Each document gives its entities a significance equal to their share of
the document's entity mentions. Every co-occurring pair in the document
gets the sum of the two significances, and a block's graph adds these
contributions up over its documents.
"""
from __future__ import annotations

import io
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import NoEntities
from .ingest import Document


@dataclass(frozen=True)
class SignificanceVector:
    doc_id: str
    scores: dict[str, float]

    def __iter__(self):
        return iter(self.scores)


def _term(t) -> str:
    return getattr(t, "canonical_name", t)


def significance(doc: Document | str, mentions: Iterable[Hashable]) -> SignificanceVector:
    """``tf(v) / sum(tf)`` over the canonical mentions of one document."""
    counts = Counter(_term(m) for m in mentions)
    if not counts:
        doc_id = doc if isinstance(doc, str) else doc.id
        raise NoEntities(f"document {doc_id!r} has no entity mentions")
    total = sum(counts.values())
    doc_id = doc if isinstance(doc, str) else doc.id
    return SignificanceVector(doc_id, {v: c / total for v, c in sorted(counts.items())})


def doc_edge_contribution(sig: SignificanceVector) -> dict[tuple[str, str], float]:
    terms = sorted(sig.scores)
    s = sig.scores
    return {(a, b): s[a] + s[b] for i, a in enumerate(terms) for b in terms[i + 1:]}


@dataclass
class KnowledgeGraph:
    """Weighted undirected graph over string terms for one time block.

    ``edge_weights`` is keyed by ``(a, b)`` with ``a < b``; only positive
    weights are stored and there are no self-loops.
    """

    block_index: int
    nodes: tuple[str, ...] = ()
    edge_weights: dict[tuple[str, str], float] = field(default_factory=dict)
    doc_count: int = 0

    def weight(self, a: str, b: str) -> float:
        if a == b:
            return 0.0
        return self.edge_weights.get((a, b) if a < b else (b, a), 0.0)

    def degrees(self) -> dict[str, float]:
        deg = dict.fromkeys(self.nodes, 0.0)
        for (a, b), w in self.edge_weights.items():
            deg[a] += w
            deg[b] += w
        return deg

    def weighted_degree(self, v: str) -> float:
        return self.degrees().get(v, 0.0)

    @property
    def total_weight(self) -> float:
        return float(sum(self.edge_weights.values()))

    def __len__(self) -> int:
        return len(self.nodes)

    def to_csr(self, order: Sequence[str] | None = None):
        """Symmetric CSR arrays ``(indptr, indices, weights)`` in ``order`` (default sorted nodes)."""
        order = list(self.nodes if order is None else order)
        pos = {v: i for i, v in enumerate(order)}
        n = len(order)
        if self.edge_weights:
            a = np.fromiter((pos[x] for x, _ in self.edge_weights), np.int64, len(self.edge_weights))
            b = np.fromiter((pos[y] for _, y in self.edge_weights), np.int64, len(self.edge_weights))
            w = np.fromiter(self.edge_weights.values(), np.float64, len(self.edge_weights))
        else:
            a = b = np.empty(0, np.int64)
            w = np.empty(0, np.float64)
        rows = np.concatenate([a, b])
        cols = np.concatenate([b, a])
        ws = np.concatenate([w, w])
        srt = np.lexsort((cols, rows))
        rows, cols, ws = rows[srt], cols[srt], ws[srt]
        indptr = np.zeros(n + 1, np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return indptr, cols, ws

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        deg = self.degrees()
        for v in self.nodes:
            g.add_node(v, degree=deg[v])
        for (a, b), w in sorted(self.edge_weights.items()):
            g.add_edge(a, b, weight=w)
        return g

    def to_edge_list(self) -> dict:
        return {"block": self.block_index,
                "edges": [{"a": a, "b": b, "w": w} for (a, b), w in sorted(self.edge_weights.items())]}

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_edge_list(), ensure_ascii=False) + "\n", encoding="utf-8")

    def graphml(self) -> str:
        import networkx as nx

        buf = io.BytesIO()
        nx.write_graphml(self.to_networkx(), buf, encoding="utf-8")
        return buf.getvalue().decode("utf-8")

    def write_graphml(self, path: str | Path) -> None:
        Path(path).write_text(self.graphml(), encoding="utf-8")

    @classmethod
    def from_edge_list(cls, data: Mapping) -> "KnowledgeGraph":
        edges = {}
        nodes = set()
        for e in data["edges"]:
            a, b = str(e["a"]), str(e["b"])
            if a == b or float(e["w"]) <= 0:
                continue
            key = (a, b) if a < b else (b, a)
            edges[key] = edges.get(key, 0.0) + float(e["w"])
            nodes.update(key)
        return cls(int(data["block"]), tuple(sorted(nodes)), edges)


def graph_from_term_lists(term_lists: Iterable[Sequence[Hashable]], block_index: int = 0) -> KnowledgeGraph:
    """Aggregate per-document contributions for documents given as term sequences.

    Documents without terms are skipped; single-term documents add an
    isolated node.
    """
    sigs = [significance(str(i), terms) for i, terms in enumerate(term_lists) if len(terms)]
    vocab = sorted({v for s in sigs for v in s.scores})
    ids = {v: i for i, v in enumerate(vocab)}
    offsets = np.zeros(len(sigs) + 1, np.int64)
    flat_ids: list[int] = []
    flat_sig: list[float] = []
    for d, s in enumerate(sigs):
        for v, x in s.scores.items():
            flat_ids.append(ids[v])
            flat_sig.append(x)
        offsets[d + 1] = len(flat_ids)
    rows, cols, ws = _kernels.pair_contributions(
        offsets, np.asarray(flat_ids, np.int64), np.asarray(flat_sig, np.float64))
    edges: dict[tuple[str, str], float] = {}
    if len(rows):
        key = rows * len(vocab) + cols
        srt = np.argsort(key, kind="stable")
        key, ws = key[srt], ws[srt]
        starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
        sums = np.add.reduceat(ws, starts)
        for k, w in zip(key[starts].tolist(), sums.tolist()):
            if w > 0:
                edges[(vocab[k // len(vocab)], vocab[k % len(vocab)])] = w
    return KnowledgeGraph(block_index, tuple(vocab), edges, len(sigs))


def aggregate_block(docs: Iterable[Document], annotations: Mapping[str, Sequence[Hashable]],
                    block_index: int = 0) -> KnowledgeGraph:
    """Knowledge graph of one block from documents and their canonical entity mentions."""
    return graph_from_term_lists([[_term(t) for t in annotations.get(d.id, ())] for d in docs],
                                 block_index)


def weighted_degree(g: KnowledgeGraph, v: str) -> float:
    return g.weighted_degree(v)
