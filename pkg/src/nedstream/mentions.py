"""Entity mention records shared by ingest and entity resolution."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Mapping

from .errors import AnnotationSpanInvalid


class EntityKind(str, enum.Enum):
    PERSON = "PER"
    LOCATION = "LOC"
    ORGANIZATION = "ORG"

    @classmethod
    def parse(cls, value: str) -> "EntityKind":
        key = str(value).strip().upper()
        aliases = {
            "PER": cls.PERSON, "PERSON": cls.PERSON,
            "LOC": cls.LOCATION, "LOCATION": cls.LOCATION, "GPE": cls.LOCATION,
            "ORG": cls.ORGANIZATION, "ORGANIZATION": cls.ORGANIZATION,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown entity kind {value!r}") from None


@dataclass(frozen=True)
class EntityMention:
    """A typed entity occurrence.

    ``span`` always indexes the original document text. ``surface`` starts
    out as that slice; person disambiguation may later rewrite it to a
    fuller name, in which case it no longer equals the slice.
    """

    surface: str
    kind: EntityKind
    span: tuple[int, int]

    @property
    def start(self) -> int:
        return self.span[0]

    @property
    def end(self) -> int:
        return self.span[1]

    def to_record(self) -> dict[str, Any]:
        return {"surface": self.surface, "kind": self.kind.value,
                "start": self.span[0], "end": self.span[1]}


def mention_from_record(rec: Mapping[str, Any]) -> EntityMention:
    try:
        start, end = int(rec["start"]), int(rec["end"])
        return EntityMention(str(rec["surface"]), EntityKind.parse(rec["kind"]), (start, end))
    except (KeyError, TypeError, ValueError) as exc:
        raise AnnotationSpanInvalid(f"bad entity record {dict(rec)!r}: {exc}") from None


def check_span(mention: EntityMention, text: str) -> None:
    start, end = mention.span
    if not (0 <= start < end <= len(text)):
        raise AnnotationSpanInvalid(
            f"span {mention.span} outside text of length {len(text)} ({mention.surface!r})")
    if " ".join(text[start:end].split()) != " ".join(mention.surface.split()):
        raise AnnotationSpanInvalid(
            f"surface {mention.surface!r} does not match text {text[start:end]!r}")
