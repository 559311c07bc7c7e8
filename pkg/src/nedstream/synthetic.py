"""Deterministic synthetic news streams with injected bursty topics.

Used for demos, tests and benchmarks. Every background block carries the
same entity co-occurrence structure, so background degree series are flat
and only injected topics can peak.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from .entities import Gazetteer
from .ingest import Document, SourceKind
from .mentions import EntityKind

PER, LOC, ORG = EntityKind.PERSON, EntityKind.LOCATION, EntityKind.ORGANIZATION

BACKGROUND_ENTITIES = [
    ("Angela Merkel", PER), ("Barack Obama", PER), ("Theresa May", PER), ("Vladimir Putin", PER),
    ("Berlin", LOC), ("Paris", LOC), ("Washington", LOC), ("Moscow", LOC),
    ("United Nations", ORG), ("World Bank", ORG), ("Federal Reserve", ORG), ("Google", ORG),
]


@dataclass(frozen=True)
class Topic:
    name: str
    entities: tuple[tuple[str, EntityKind], ...]
    phrases: tuple[str, ...]


BREXIT = Topic("brexit", (("Nigel Farage", PER), ("European Union", ORG), ("Brussels", LOC)),
               ("trade deal", "border control"))
FINAL = Topic("cup final", (("Jose Mourinho", PER), ("Manchester United", ORG), ("Wembley", LOC)),
              ("penalty shootout", "extra time"))
DEFAULT_TOPICS = (BREXIT, FINAL)


@dataclass
class SyntheticCorpus:
    documents: list[Document]
    gazetteer: Gazetteer
    origin: datetime
    block_duration: timedelta
    burst_block: int
    topics: tuple[Topic, ...]
    topic_docs: dict[str, list[str]] = field(default_factory=dict)

    def canonical(self, topic: Topic) -> list[str]:
        return [name.casefold() for name, _ in topic.entities]


_SYLLABLES = ["ka", "lo", "mi", "ru", "ten", "vo", "zar", "pel", "qui", "dor", "fen", "gu", "shi", "bra"]


def _pseudo_words(rng: random.Random, n: int) -> list[str]:
    words: set[str] = set()
    while len(words) < n:
        words.add("".join(rng.choice(_SYLLABLES) for _ in range(rng.randint(3, 4))))
    out = sorted(words)
    rng.shuffle(out)
    return out


def make_corpus(n_blocks: int = 11, burst_block: int = 8, docs_per_topic: int = 20,
                background_docs: int = 24, topics: tuple[Topic, ...] = DEFAULT_TOPICS,
                seed: int = 7, block_duration: timedelta = timedelta(days=1),
                origin: datetime = datetime(2016, 6, 14, tzinfo=timezone.utc),
                source_kind: SourceKind = SourceKind.ARTICLE) -> SyntheticCorpus:
    """Uniform background over ``n_blocks`` plus every topic injected in ``burst_block``.

    Each topic document names the topic's entities (the person by full
    name and later by surname) and uses both phrases in separate sentences.
    Filler words are drawn without replacement so they never become phrases.
    """
    rng = random.Random(seed)
    fillers = iter(_pseudo_words(rng, 20000))
    gaz = {name: (name, kind) for name, kind in BACKGROUND_ENTITIES}
    for t in topics:
        gaz.update({name: (name, kind) for name, kind in t.entities})
        surname = t.entities[0][0].split()[-1]
        gaz[surname] = (surname, PER)
    docs: list[Document] = []
    step = block_duration / (background_docs + len(topics) * docs_per_topic + 1)

    def fill(k: int) -> str:
        return " ".join(next(fillers) for _ in range(k))

    pattern = [(i % 12, (i * 5 + 1) % 12, (i * 7 + 3) % 12) for i in range(background_docs)]
    corpus = SyntheticCorpus(docs, Gazetteer(gaz), origin, block_duration, burst_block, tuple(topics))
    for b in range(n_blocks):
        start = origin + b * block_duration
        slot = 0
        for i, combo in enumerate(pattern):
            names = [BACKGROUND_ENTITIES[j][0] for j in dict.fromkeys(combo)]
            text = (f"{names[0]} spoke about {fill(3)}. "
                    + " ".join(f"{n} noted {fill(2)}." for n in names[1:]))
            docs.append(Document(f"b{b:03d}-{i:03d}", start + slot * step, text, source_kind))
            slot += 1
        if b != burst_block:
            continue
        for t in topics:
            (person, _), *others = t.entities
            surname = person.split()[-1]
            ids = corpus.topic_docs.setdefault(t.name, [])
            for i in range(docs_per_topic):
                p1, p2 = t.phrases if i % 2 == 0 else t.phrases[::-1]
                sentences = [
                    f"{person} and the {others[0][0]} in {others[1][0]} {fill(2)}.",
                    f"The {p1} {fill(2)}.",
                    f"{fill(2)} {surname} {fill(1)} about the {p2}.",
                ]
                if i % 3 == 0:
                    sentences.append(f"{others[0][0]} {fill(1)}.")
                doc_id = f"t-{t.name.replace(' ', '_')}-{i:03d}"
                ids.append(doc_id)
                docs.append(Document(doc_id, start + slot * step, " ".join(sentences), source_kind))
                slot += 1
    docs.sort(key=lambda d: (d.timestamp, d.id))
    return corpus


def write_jsonl(corpus: SyntheticCorpus, path) -> None:
    import json

    from .ingest import format_timestamp

    with open(path, "w", encoding="utf-8") as fh:
        for d in corpus.documents:
            fh.write(json.dumps({"id": d.id, "timestamp": format_timestamp(d.timestamp),
                                 "text": d.text, "source_kind": d.source_kind.value}) + "\n")


def write_gazetteer(corpus: SyntheticCorpus, path) -> None:
    import json

    with open(path, "w", encoding="utf-8") as fh:
        json.dump(corpus.gazetteer.to_mapping(), fh, indent=1, sort_keys=True)
