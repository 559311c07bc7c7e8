"""Frequent phrase mining by agglomerative merging of adjacent units.

Contiguous n-grams are counted (with apriori pruning) over runs of
content tokens. Each run is then segmented bottom-up: the adjacent pair
of units with the highest significance

    alpha(a, b) = (count(ab) - count(a) * count(b) / N) / sqrt(count(ab))

is merged while ``alpha >= sig_threshold`` and ``count(ab) >= min_support``,
where N is the number of adjacent token positions in the corpus.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import EmptyInput
from .ingest import Document
from .text import content_chunks, default_stopwords


@dataclass(frozen=True, order=True)
class Phrase:
    tokens: tuple[str, ...]
    support: int = 0

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


def significance_score(count_ab: float, count_a: float, count_b: float, n_pairs: float) -> float:
    if count_ab <= 0:
        return -math.inf
    return (count_ab - count_a * count_b / n_pairs) / math.sqrt(count_ab)


Chunks = list[list[str]]


def document_chunks(docs: Iterable[Document | str], stopwords: frozenset[str] | None = None,
                    masks: Mapping[str, Sequence[tuple[int, int]]] | None = None) -> list[Chunks]:
    stopwords = default_stopwords() if stopwords is None else stopwords
    out = []
    for d in docs:
        if isinstance(d, str):
            out.append(content_chunks(d, stopwords))
        else:
            out.append(content_chunks(d.text, stopwords, (masks or {}).get(d.id, ())))
    return out


def count_ngrams(corpus: Sequence[Chunks], min_support: int, max_len: int) -> Counter:
    """Counts of every unigram plus every frequent contiguous n-gram up to ``max_len``."""
    counts: Counter = Counter()
    active: list[tuple[list[str], list[int]]] = []
    for chunks in corpus:
        for ch in chunks:
            counts.update((t,) for t in ch)
            active.append((ch, list(range(len(ch)))))
    n = 1
    while active and n < max_len:
        n += 1
        nxt = []
        for ch, starts in active:
            # an n-gram is a candidate only if its (n-1)-prefix is frequent
            keep = [i for i in starts if i + n <= len(ch) and counts[tuple(ch[i:i + n - 1])] >= min_support]
            fresh = [i for i in keep if counts[tuple(ch[i + 1:i + n])] >= min_support]
            for i in fresh:
                counts[tuple(ch[i:i + n])] += 1
            if fresh:
                nxt.append((ch, fresh))
        active = nxt
    return counts


def segment(chunk: Sequence[str], counts: Mapping[tuple[str, ...], int], n_pairs: int,
            min_support: int, sig_threshold: float, max_len: int) -> list[tuple[str, ...]]:
    units = [(t,) for t in chunk]
    while len(units) > 1:
        best, best_i = -math.inf, -1
        for i in range(len(units) - 1):
            a, b = units[i], units[i + 1]
            if len(a) + len(b) > max_len:
                continue
            c_ab = counts.get(a + b, 0)
            if c_ab < min_support:
                continue
            alpha = significance_score(c_ab, counts.get(a, 0), counts.get(b, 0), n_pairs)
            if alpha > best:
                best, best_i = alpha, i
        if best_i < 0 or best < sig_threshold:
            break
        units[best_i:best_i + 2] = [units[best_i] + units[best_i + 1]]
    return units


def mine_phrases(docs: Iterable[Document | str], min_support: int = 3, sig_threshold: float = 2.0,
                 max_len: int = 4, stopwords: frozenset[str] | None = None,
                 masks: Mapping[str, Sequence[tuple[int, int]]] | None = None) -> list[Phrase]:
    """Phrases (including frequent single words) with support over ``docs``.

    ``masks`` maps a document id to character spans excluded from mining,
    typically the document's entity mentions. Result is sorted by
    descending support, then text.
    """
    if min_support < 1 or max_len < 1:
        raise ValueError("min_support and max_len must be positive")
    corpus = document_chunks(docs, stopwords, masks)
    if not any(corpus):
        raise EmptyInput("no content tokens to mine phrases from")
    return mine_from_chunks(corpus, min_support, sig_threshold, max_len)


def mine_from_chunks(corpus: Sequence[Chunks], min_support: int = 3, sig_threshold: float = 2.0,
                     max_len: int = 4) -> list[Phrase]:
    counts = count_ngrams(corpus, min_support, max_len)
    n_pairs = sum(max(len(ch) - 1, 0) for chunks in corpus for ch in chunks)
    support: Counter = Counter()
    for chunks in corpus:
        for ch in chunks:
            if n_pairs:
                support.update(segment(ch, counts, n_pairs, min_support, sig_threshold, max_len))
            else:
                support.update((t,) for t in ch)
    phrases = [Phrase(seg, c) for seg, c in support.items()
               if c >= min_support and not (len(seg) == 1 and len(seg[0]) < 2)]
    phrases.sort(key=lambda p: (-p.support, p.text))
    return phrases


def match_phrases(chunks: Chunks, phrases: Iterable[Phrase | tuple[str, ...]], max_len: int | None = None) -> list[str]:
    """Greedy longest-match, left to right, non-overlapping phrase occurrences."""
    table = {getattr(p, "tokens", p) for p in phrases}
    if not table:
        return []
    longest = max(len(t) for t in table) if max_len is None else max_len
    found = []
    for ch in chunks:
        i = 0
        while i < len(ch):
            for n in range(min(longest, len(ch) - i), 0, -1):
                cand = tuple(ch[i:i + n])
                if cand in table:
                    found.append(" ".join(cand))
                    i += n
                    break
            else:
                i += 1
    return found
