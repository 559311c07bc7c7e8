from datetime import datetime, timezone

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nedstream.entities import (
    EntityRegistry, Gazetteer, PersonMemory, Provider, annotate, canonicalize, disambiguate_persons,
    load_sidecar, resolve_block,
)
from nedstream.errors import AnnotationSpanInvalid, FileUnreadable, MissingAnnotations
from nedstream.ingest import Document, SourceKind
from nedstream.mentions import EntityKind, EntityMention

PER, LOC, ORG = EntityKind.PERSON, EntityKind.LOCATION, EntityKind.ORGANIZATION
T0 = datetime(2016, 6, 24, tzinfo=timezone.utc)


def person(name, start=0):
    return EntityMention(name, PER, (start, start + len(name)))


def test_pre_annotated_passthrough():
    ms = (EntityMention("Farage", PER, (0, 6)), EntityMention("EU", ORG, (15, 17)))
    d = Document("1", T0, "Farage attacks EU rules", pre_annotations=ms)
    assert annotate(d, Provider.PRE_ANNOTATED) == list(ms)


def test_pre_annotated_missing():
    with pytest.raises(MissingAnnotations):
        annotate(Document("1", T0, "text"), "pre-annotated")


def test_pre_annotated_bad_span():
    d = Document("1", T0, "short", pre_annotations=(EntityMention("longer", PER, (0, 40)),))
    with pytest.raises(AnnotationSpanInvalid):
        annotate(d, Provider.PRE_ANNOTATED)


def test_gazetteer_two_orgs():
    gz = Gazetteer({"Chelsea": ("Chelsea", ORG), "Liverpool": ("Liverpool", ORG)})
    ms = annotate(Document("1", T0, "Chelsea beat Liverpool"), Provider.GAZETTEER, gz)
    assert [(m.surface, m.kind, m.span) for m in ms] == [("Chelsea", ORG, (0, 7)), ("Liverpool", ORG, (13, 22))]


def test_gazetteer_longest_match_wins():
    gz = Gazetteer({"Manchester": ("Manchester", LOC), "Manchester United": ("Manchester United", ORG),
                    "United": ("United", ORG)})
    ms = gz.tag("Manchester United fans in Manchester. United again.")
    assert [(m.surface, m.kind) for m in ms] == [
        ("Manchester United", ORG), ("Manchester", LOC), ("United", ORG)]


def test_gazetteer_case_insensitive_and_no_partial_tokens():
    gz = Gazetteer({"Brexit": ("Brexit", ORG)})
    assert [m.surface for m in gz.tag("BREXIT fears, brexiteers")] == ["BREXIT"]


def test_gazetteer_no_hits():
    assert annotate(Document("1", T0, "nothing to see"), Provider.GAZETTEER, Gazetteer({})) == []


def test_gazetteer_load(tmp_path):
    p = tmp_path / "g.json"
    p.write_text('{"entries": {"UK": {"name": "UK", "kind": "LOC"}}, "abbreviations": {"UK": "United Kingdom"}}')
    gz = Gazetteer.load(p)
    assert gz.entries["UK"] == ("UK", LOC)
    with pytest.raises(FileUnreadable):
        Gazetteer.load(tmp_path / "missing.json")
    assert Gazetteer.from_mapping(gz.to_mapping()).to_mapping() == gz.to_mapping()


def test_sidecar(tmp_path):
    p = tmp_path / "ann.jsonl"
    p.write_text('{"id": "1", "entities": [{"surface": "Farage", "kind": "PER", "start": 0, "end": 6}]}\n')
    side = load_sidecar(p)
    ms = annotate(Document("1", T0, "Farage wins"), Provider.EXTERNAL, sidecar=side)
    assert ms[0].surface == "Farage"
    assert annotate(Document("2", T0, "other"), Provider.EXTERNAL, sidecar=side) == []


def test_farage_rewritten():
    out = disambiguate_persons([person("Nigel Farage"), person("Farage", 20)])
    assert [m.surface for m in out] == ["Nigel Farage", "Nigel Farage"]
    assert out[1].span == (20, 26)


def test_no_match_retained():
    assert disambiguate_persons([person("Smith")])[0].surface == "Smith"


def test_most_recent_match_wins():
    out = disambiguate_persons([person("John Smith"), person("Jane Smith"), person("Smith")])
    assert out[2].surface == "Jane Smith"


def test_first_name_matches_case_insensitively():
    out = disambiguate_persons([person("Boris Johnson"), person("boris")])
    assert out[1].surface == "Boris Johnson"


def test_only_earlier_names_count():
    out = disambiguate_persons([person("Farage"), person("Nigel Farage")])
    assert out[0].surface == "Farage"


def test_non_person_untouched():
    ms = [person("Theresa May"), EntityMention("May", LOC, (0, 3))]
    assert disambiguate_persons(ms)[1].surface == "May"


def test_memory_shared_across_calls():
    mem = PersonMemory()
    disambiguate_persons([person("Nigel Farage")], mem)
    assert disambiguate_persons([person("Nigel")], mem)[0].surface == "Nigel Farage"
    assert len(mem) == 1


names = st.text(alphabet="abcAB", min_size=1, max_size=3)
mention_lists = st.lists(
    st.builds(lambda words, kind: EntityMention(" ".join(words), kind, (0, 1)),
              st.lists(names, min_size=1, max_size=3), st.sampled_from(list(EntityKind))),
    max_size=12)


@given(mention_lists)
def test_disambiguation_keeps_kind_and_count(ms):
    out = disambiguate_persons(ms)
    assert len(out) == len(ms)
    assert [m.kind for m in out] == [m.kind for m in ms]
    assert [m.span for m in out] == [m.span for m in ms]
    for a, b in zip(ms, out):
        if a.surface != b.surface:
            assert a.kind is PER and len(a.surface.split()) == 1 and len(b.surface.split()) > 1


def test_abbreviation_expansion():
    gz = Gazetteer(abbreviations={"UK": "United Kingdom", "EU": "European Union"})
    assert canonicalize(EntityMention("UK", LOC, (0, 2)), gz).canonical_name == "united kingdom"
    assert canonicalize(EntityMention("EU", ORG, (0, 2)), gz).canonical_name == "european union"
    # persons are never abbreviation-expanded
    assert canonicalize(EntityMention("EU", PER, (0, 2)), gz).canonical_name == "eu"


def test_identity_casefold():
    c = canonicalize(EntityMention("Berlin", LOC, (0, 6)), Gazetteer())
    assert c.canonical_name == "berlin" and c.aliases == {"Berlin"} and c.kind is LOC


def test_exceptions_before_abbreviations():
    gz = Gazetteer(abbreviations={"US": "United States"}, exceptions={"US": "USA"})
    assert canonicalize(EntityMention("US", LOC, (0, 2)), gz).canonical_name == "usa"


def test_tweets_skip_expansion():
    gz = Gazetteer({"UK": ("UK", LOC)}, abbreviations={"UK": "United Kingdom"})
    m = EntityMention("UK", LOC, (0, 2))
    assert canonicalize(m, gz, expand_abbreviations=False).canonical_name == "uk"


keys = st.sampled_from(["UK", "uk", "EU", "Farage", "Nigel Farage", "Berlin", "Brussels", "US"])
values = st.sampled_from(["United Kingdom", "European Union", "Nigel Farage", "Bruxelles", "USA"])


@given(st.dictionaries(keys, values, max_size=4), st.dictionaries(keys, values, max_size=4),
       keys, st.sampled_from(list(EntityKind)))
def test_canonicalize_idempotent(abbrev, exc, surface, kind):
    gz = Gazetteer(abbreviations=abbrev, exceptions=exc)
    once = canonicalize(EntityMention(surface, kind, (0, len(surface))), gz)
    twice = canonicalize(EntityMention(once.canonical_name, kind, (0, 1)), gz)
    assert twice.canonical_name == once.canonical_name
    assert once.canonical_name == once.canonical_name.casefold()


def test_registry_kind_collision():
    reg = EntityRegistry()
    a = reg.key(canonicalize(EntityMention("Jordan", PER, (0, 6))))
    b = reg.key(canonicalize(EntityMention("Jordan", LOC, (0, 6))))
    assert a == "jordan" and b == "jordan#loc"
    assert reg.key(canonicalize(EntityMention("JORDAN", PER, (0, 6)))) == "jordan"
    assert reg.aliases["jordan"] == {"Jordan", "JORDAN"}


def test_resolve_block_articles_vs_tweets():
    gz = Gazetteer({"Nigel Farage": ("Nigel Farage", PER), "Farage": ("Farage", PER), "UK": ("UK", LOC)},
                   abbreviations={"UK": "United Kingdom"})
    docs = [Document("1", T0, "Nigel Farage in the UK"), Document("2", T0, "Farage again"),
            Document("3", T0, "Farage tweets from the UK", SourceKind.TWEET)]
    res = resolve_block(docs, Provider.GAZETTEER, gz)
    assert [r.entities for r in res] == [("nigel farage", "united kingdom"), ("nigel farage",),
                                         ("farage", "uk")]


def test_memory_resets_per_block():
    gz = Gazetteer({"Nigel Farage": ("Nigel Farage", PER), "Farage": ("Farage", PER)})
    reg = EntityRegistry()
    b1 = resolve_block([Document("1", T0, "Nigel Farage")], "gazetteer", gz, registry=reg)
    b2 = resolve_block([Document("2", T0, "Farage")], "gazetteer", gz, registry=reg)
    assert b1[0].entities == ("nigel farage",) and b2[0].entities == ("farage",)
