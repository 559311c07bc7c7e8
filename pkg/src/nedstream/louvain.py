"""Deterministic Louvain community detection on weighted undirected graphs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import EmptyGraph
from .graph import KnowledgeGraph


def modularity(g: KnowledgeGraph, partition: Mapping[str, int], resolution: float = 1.0) -> float:
    """``Q = sum_c [L_c / m - resolution * (K_c / 2m)^2]`` for intra-community weight L_c."""
    two_m = 2.0 * g.total_weight
    if two_m == 0:
        return 0.0
    internal: dict[int, float] = {}
    tot: dict[int, float] = {}
    for (a, b), w in g.edge_weights.items():
        if partition[a] == partition[b]:
            internal[partition[a]] = internal.get(partition[a], 0.0) + 2.0 * w
    for v, d in g.degrees().items():
        tot[partition[v]] = tot.get(partition[v], 0.0) + d
    return sum(internal.get(c, 0.0) / two_m - resolution * (t / two_m) ** 2 for c, t in tot.items())


def _renumber(comm: np.ndarray) -> np.ndarray:
    """Relabel communities 0..k-1 in order of first appearance."""
    _, first, inv = np.unique(comm, return_index=True, return_inverse=True)
    rank = np.empty(len(first), np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inv.ravel()]


def _coarsen(indptr, indices, weights, comm, n_comm):
    rows = np.repeat(np.arange(len(indptr) - 1), np.diff(indptr))
    key = comm[rows] * n_comm + comm[indices]
    srt = np.argsort(key, kind="stable")
    key, w = key[srt], weights[srt]
    starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
    sums = np.add.reduceat(w, starts) if len(w) else w
    ukey = key[starts]
    r, c = ukey // n_comm, ukey % n_comm
    new_ptr = np.zeros(n_comm + 1, np.int64)
    np.cumsum(np.bincount(r, minlength=n_comm), out=new_ptr[1:])
    return new_ptr, c.astype(np.int64), sums


@dataclass
class LouvainResult:
    partition: dict[str, int]
    levels: list[dict[str, int]] = field(default_factory=list)
    modularity_by_level: list[float] = field(default_factory=list)

    @property
    def modularity(self) -> float:
        return self.modularity_by_level[-1] if self.modularity_by_level else 0.0


def louvain_levels(g: KnowledgeGraph, resolution: float = 1.0,
                   node_order: Sequence[str] | None = None, max_levels: int = 64) -> LouvainResult:
    """Louvain with every intermediate level kept.

    Nodes are visited in ``node_order`` (default: sorted names); community
    ids are numbered by first appearance in that order.
    """
    if not g.nodes:
        raise EmptyGraph("cannot partition an empty graph")
    order = list(g.nodes if node_order is None else node_order)
    if sorted(order) != sorted(g.nodes):
        raise ValueError("node_order must be a permutation of the graph's nodes")
    indptr, indices, weights = g.to_csr(order)
    membership = np.arange(len(order), dtype=np.int64)
    result = LouvainResult({})
    start = {v: i for i, v in enumerate(order)}
    result.levels.append(start)
    result.modularity_by_level.append(modularity(g, start, resolution))
    for _ in range(max_levels):
        n = len(indptr) - 1
        comm, moves = _kernels.louvain_local_move(indptr, indices, weights,
                                                  np.arange(n, dtype=np.int64), resolution)
        if moves == 0:
            break
        comm = _renumber(comm)
        n_comm = int(comm.max()) + 1
        membership = comm[membership]
        level = {v: int(membership[i]) for i, v in enumerate(order)}
        q = modularity(g, level, resolution)
        if q <= result.modularity_by_level[-1]:
            break
        result.levels.append(level)
        result.modularity_by_level.append(q)
        if n_comm == n:
            break
        indptr, indices, weights = _coarsen(indptr, indices, weights, comm, n_comm)
    result.partition = result.levels[-1]
    return result


def louvain(g: KnowledgeGraph, resolution: float = 1.0,
            node_order: Sequence[str] | None = None) -> dict[str, int]:
    """Node -> community id (0-based, numbered by first appearance in node order)."""
    return louvain_levels(g, resolution, node_order).partition
