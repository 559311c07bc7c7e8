"""Tokenization helpers and the bundled stopword list."""
from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

# word characters, allowing inner apostrophes and hyphens ("o'neill", "post-brexit")
_TOKEN = re.compile(r"\w+(?:['’\-]\w+)*")
# punctuation that ends a phrase chunk
_BREAK = re.compile(r"[.,;:!?()\[\]{}\"“”|/…–—]")


def token_spans(text: str) -> list[tuple[str, int, int]]:
    return [(m.group(), m.start(), m.end()) for m in _TOKEN.finditer(text)]


def tokenize(text: str) -> list[str]:
    return [t.casefold() for t in _TOKEN.findall(text)]


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset[str]:
    data = resources.files("nedstream").joinpath("data/stopwords_en.txt").read_text("utf-8")
    return frozenset(w.strip() for w in data.splitlines() if w.strip())


def load_stopwords(path: str | Path | None) -> frozenset[str]:
    if path is None:
        return default_stopwords()
    words = Path(path).read_text(encoding="utf-8").split()
    return frozenset(w.casefold() for w in words)


def content_chunks(text: str, stopwords: frozenset[str],
                   masked: Iterable[tuple[int, int]] = ()) -> list[list[str]]:
    """Split text into runs of lowercased content tokens.

    Runs break at punctuation and at masked character spans (entity
    mentions); stopwords are dropped without breaking a run.
    """
    masks = sorted(masked)
    chunks: list[list[str]] = []
    current: list[str] = []
    last_end = 0
    mi = 0
    for tok, start, end in token_spans(text):
        while mi < len(masks) and masks[mi][1] <= start:
            mi += 1
        in_mask = mi < len(masks) and masks[mi][0] < end
        if (in_mask or _BREAK.search(text, last_end, start)) and current:
            chunks.append(current)
            current = []
        last_end = end
        if in_mask:
            continue
        word = tok.casefold()
        if word in stopwords or word.isdigit():
            continue
        current.append(word)
    if current:
        chunks.append(current)
    return chunks
