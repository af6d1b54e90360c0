import itertools

import pytest

from conftest import FIXTURES
from lexalign.dictstore import DictionaryStore, LanguageRow, ingest_tables
from lexalign.triplemap import (
    Iri,
    Literal,
    PrefixedName,
    Triple,
    TripleMapError,
    TripleStore,
    Variable,
    WIKPA_BASE,
    expand,
    render,
    to_tables,
    to_triples,
)

# columns per table, independent of the module under test
COLUMNS = {
    "language": 3,
    "page": 2,
    "lang_pos": 3,
    "meaning": 2,
    "translation": 3,
    "translation_entry": 4,
    "wiki_text": 2,
}


def test_one_language_row_gives_three_triples():
    store = DictionaryStore(languages={1: LanguageRow(1, "en", "English")})
    ts = to_triples(store)
    assert len(ts) == 3
    rendered = {(render(t.predicate), render(t.object)) for t in ts.lookup()}
    assert rendered == {
        (WIKPA_BASE + "lang_id", "1"),
        (WIKPA_BASE + "lang_code", "en"),
        (WIKPA_BASE + "lang_name", "English"),
    }


@pytest.mark.parametrize("name", ["idioms_dict", "biblio_dict"])
def test_triple_count_equals_rows_times_columns(name):
    directory = FIXTURES / name
    expected = 0
    for table, columns in COLUMNS.items():
        lines = (directory / f"{table}.tsv").read_text("utf-8").splitlines()
        expected += len(lines) * columns
    assert len(to_triples(ingest_tables(directory))) == expected


def test_empty_store_maps_to_empty_triple_store():
    assert len(to_triples(DictionaryStore())) == 0


def test_lookup_all_unbound_returns_every_triple(idioms_triples):
    everything = idioms_triples.lookup()
    assert len(everything) == len(idioms_triples)
    assert len(set(everything)) == len(everything)


def test_lookup_by_lang_code_en(idioms_triples):
    found = idioms_triples.lookup(None, PrefixedName("wikpa", "lang_code"), Literal("en"))
    oracle = [
        t
        for t in idioms_triples.lookup()
        if render(t.predicate) == WIKPA_BASE + "lang_code" and t.object == Literal("en")
    ]
    assert found == oracle
    assert len(found) == 1
    assert found[0].subject == Iri(WIKPA_BASE + "language/1")


def test_lookup_fully_bound(idioms_triples):
    triple = idioms_triples.lookup()[0]
    assert idioms_triples.lookup(triple.subject, triple.predicate, triple.object) == [triple]
    assert idioms_triples.lookup(triple.subject, triple.predicate, Literal("no-such")) == []


def test_lookup_matches_filtered_full_scan(idioms_triples):
    everything = idioms_triples.lookup()
    samples = everything[:: max(1, len(everything) // 7)]
    for triple in samples:
        for mask in itertools.product([False, True], repeat=3):
            s = triple.subject if mask[0] else None
            p = triple.predicate if mask[1] else None
            o = triple.object if mask[2] else None
            expected = [
                t
                for t in everything
                if (s is None or t.subject == s)
                and (p is None or t.predicate == p)
                and (o is None or t.object == o)
            ]
            assert idioms_triples.lookup(s, p, o) == expected


def test_round_trip_reconstruction(idioms_store, idioms_triples):
    rebuilt = to_tables(idioms_triples)
    assert rebuilt.languages == idioms_store.languages
    assert rebuilt.pages == idioms_store.pages
    assert rebuilt.lang_pos == idioms_store.lang_pos
    assert rebuilt.meanings == idioms_store.meanings
    assert rebuilt.translation_rows == idioms_store.translation_rows
    assert rebuilt.translation_entries == idioms_store.translation_entries
    assert rebuilt.wiki_texts == idioms_store.wiki_texts


def test_term_constraints():
    with pytest.raises(TripleMapError):
        Triple(Literal("x"), Iri("p"), Literal("y"))
    with pytest.raises(TripleMapError):
        Triple(Iri("s"), Literal("p"), Literal("y"))
    with pytest.raises(TripleMapError):
        Triple(Iri("s"), Iri("p"), Variable("v"))
    with pytest.raises(TripleMapError):
        Variable("")


def test_expand_unknown_prefix():
    with pytest.raises(TripleMapError, match="unknown prefix"):
        expand(PrefixedName("nope", "x"), {"wikpa": WIKPA_BASE})


def test_duplicate_triples_collapse():
    t = Triple(Iri("s"), Iri("p"), Literal("o"))
    store = TripleStore([t, t, Triple(Iri("s"), Iri("p"), Literal("o"))])
    assert len(store) == 1
