import pytest

from conftest import FIXTURES
from lexalign.ontomodel import (
    EntityId,
    Kind,
    OntologyError,
    load_ontology,
    load_ontology_file,
)

EX = "http://example.org/x#"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
OWL_CLASS = "http://www.w3.org/2002/07/owl#Class"
OWL_OBJ = "http://www.w3.org/2002/07/owl#ObjectProperty"
LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
SUBCLASS = "http://www.w3.org/2000/01/rdf-schema#subClassOf"
DOMAIN = "http://www.w3.org/2000/01/rdf-schema#domain"
RANGE = "http://www.w3.org/2000/01/rdf-schema#range"


def lines(*triples):
    return "\n".join(triples) + "\n"


def clazz(name):
    return f"<{EX}{name}> <{RDF_TYPE}> <{OWL_CLASS}> ."


def test_load_class_with_label():
    onto = load_ontology(lines(clazz("Book"), f'<{EX}Book> <{LABEL}> "Livre" .'))
    assert len(onto.classes()) == 1
    book = onto.entity(EX + "Book")
    assert book.kind is Kind.CLASS
    assert onto.display_name(book) == "Livre"


def test_fixture_counts_match_line_scan(onto_fr, onto_en):
    for onto, path in ((onto_fr, "biblio_fr.nt"), (onto_en, "biblio_en.nt")):
        text = (FIXTURES / path).read_text("utf-8")
        for marker, kind in (
            (OWL_CLASS, Kind.CLASS),
            (OWL_OBJ, Kind.OBJECT_PROPERTY),
            ("DatatypeProperty", Kind.DATA_PROPERTY),
        ):
            expected = sum(
                1 for line in text.splitlines() if RDF_TYPE in line and marker in line
            )
            assert len(onto.by_kind(kind)) == expected


def test_domain_and_range_of_articles(onto_fr):
    articles = onto_fr.entity("http://example.org/biblio-fr#articles")
    assert onto_fr.domain[articles].local_name() == "Revue"
    assert onto_fr.range[articles].local_name() == "Article"


def test_properties_of_revue_includes_articles(onto_fr):
    revue = onto_fr.entity("http://example.org/biblio-fr#Revue")
    names = {p.local_name() for p in onto_fr.properties_of(revue)}
    assert "articles" in names


def test_properties_of_matches_brute_scan(onto_en):
    for cls in onto_en.classes():
        expected = {
            p for p, d in onto_en.domain.items() if d == cls
        } | {p for p, r in onto_en.range.items() if r == cls}
        assert onto_en.properties_of(cls) == expected


def test_direct_subclasses():
    onto = load_ontology(
        lines(
            clazz("Root"),
            clazz("A"),
            clazz("B"),
            clazz("Leaf"),
            f"<{EX}A> <{SUBCLASS}> <{EX}Root> .",
            f"<{EX}B> <{SUBCLASS}> <{EX}Root> .",
            f"<{EX}Leaf> <{SUBCLASS}> <{EX}A> .",
        )
    )
    root = onto.entity(EX + "Root")
    assert {c.local_name() for c in onto.direct_subclasses(root)} == {"A", "B"}
    assert onto.direct_subclasses(onto.entity(EX + "Leaf")) == set()


def test_subclass_cycle_is_error():
    with pytest.raises(OntologyError, match="cycle"):
        load_ontology(
            lines(
                clazz("A"),
                clazz("B"),
                f"<{EX}A> <{SUBCLASS}> <{EX}B> .",
                f"<{EX}B> <{SUBCLASS}> <{EX}A> .",
            )
        )


def test_display_name_falls_back_to_iri_fragment():
    onto = load_ontology(lines(clazz("Book")))
    assert onto.display_name(onto.entity(EX + "Book")) == "Book"


def test_display_name_slash_fallback():
    onto = load_ontology(f"<http://example.org/things/Car> <{RDF_TYPE}> <{OWL_CLASS}> .\n")
    assert onto.display_name(onto.entity("http://example.org/things/Car")) == "Car"


def test_unknown_entity_is_error(onto_fr):
    with pytest.raises(OntologyError, match="unknown"):
        onto_fr.display_name(EntityId("http://nowhere/#X", Kind.CLASS))
    with pytest.raises(OntologyError, match="unknown"):
        onto_fr.entity("http://nowhere/#X")


def test_unknown_predicate_warns_not_fails():
    onto = load_ontology(
        lines(clazz("Book"), f'<{EX}Book> <http://example.org/mystery> "x" .')
    )
    assert len(onto.classes()) == 1
    assert any("unknown predicate" in w for w in onto.warnings)


def test_first_label_wins_with_warning():
    onto = load_ontology(
        lines(clazz("Book"), f'<{EX}Book> <{LABEL}> "first" .', f'<{EX}Book> <{LABEL}> "second" .')
    )
    assert onto.display_name(onto.entity(EX + "Book")) == "first"
    assert any("extra label" in w for w in onto.warnings)


def test_label_on_undeclared_entity_warns_not_fails():
    # an ontology header: its type is unrecognized, its label must not kill the load
    onto = load_ontology(
        lines(
            clazz("Book"),
            f"<{EX}onto> <{RDF_TYPE}> <http://www.w3.org/2002/07/owl#Ontology> .",
            f'<{EX}onto> <{LABEL}> "about books" .',
        )
    )
    assert len(onto.classes()) == 1
    assert any("label on undeclared" in w for w in onto.warnings)


def test_blank_node_lines_skipped_with_warning():
    onto = load_ontology(lines(clazz("Book"), f"_:b1 <{RDF_TYPE}> <{OWL_CLASS}> ."))
    assert len(onto.classes()) == 1
    assert any("blank node" in w for w in onto.warnings)


def test_comments_and_empty_lines_ignored():
    onto = load_ontology("# header\n\n" + clazz("Book") + "\n")
    assert len(onto.classes()) == 1


def test_malformed_line_is_error():
    with pytest.raises(OntologyError, match="malformed"):
        load_ontology("<a> <b>\n")


def test_domain_on_undeclared_property_is_error():
    with pytest.raises(OntologyError, match="undeclared property"):
        load_ontology(lines(clazz("Book"), f"<{EX}mystery> <{DOMAIN}> <{EX}Book> ."))


def test_range_on_undeclared_class_is_error():
    text = lines(
        f"<{EX}p> <{RDF_TYPE}> <{OWL_OBJ}> .",
        f"<{EX}p> <{RANGE}> <{EX}Ghost> .",
    )
    with pytest.raises(OntologyError, match="undeclared class"):
        load_ontology(text)


def test_datatype_range_is_kept_as_iri(onto_fr):
    isbn = onto_fr.entity("http://example.org/biblio-fr#isbn")
    assert onto_fr.range[isbn] == "http://www.w3.org/2001/XMLSchema#string"


def test_conflicting_kind_declaration_is_error():
    with pytest.raises(OntologyError, match="declared both"):
        load_ontology(
            lines(clazz("Thing"), f"<{EX}Thing> <{RDF_TYPE}> <{OWL_OBJ}> .")
        )


def test_declaration_order_does_not_matter():
    onto = load_ontology(
        lines(
            f"<{EX}p> <{DOMAIN}> <{EX}Book> .",
            f"<{EX}p> <{RDF_TYPE}> <{OWL_OBJ}> .",
            clazz("Book"),
        )
    )
    assert onto.domain[onto.entity(EX + "p")].local_name() == "Book"


def test_load_ontology_file_missing(tmp_path):
    with pytest.raises(OntologyError, match="cannot read"):
        load_ontology_file(tmp_path / "missing.nt")
