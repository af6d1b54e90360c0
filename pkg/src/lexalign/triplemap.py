"""Forward mapping of the dictionary tables into an in-memory RDF view.

Each table row becomes one subject node `wikpa:<table>/<id>` with one
triple per column. Key columns map to integer-valued plain literals,
text columns to text literals. The store keeps SPO/POS/OSP indexes and
is immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .dictstore import (
    DictionaryStore,
    LangPosRow,
    LanguageRow,
    MeaningRow,
    PageRow,
    TranslationEntryRow,
    TranslationRow,
    WikiTextRow,
)
from .errors import LexalignError

WIKPA_PREFIX = "wikpa"
WIKPA_BASE = "http://wikokit.example/wikt/"
DEFAULT_PREFIXES = {WIKPA_PREFIX: WIKPA_BASE}


class TripleMapError(LexalignError):
    pass


@dataclass(frozen=True)
class Iri:
    value: str


@dataclass(frozen=True)
class PrefixedName:
    prefix: str
    local: str


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise TripleMapError("variable name must be non-empty")


Term = Union[Iri, PrefixedName, Literal, Variable]


def render(term: Term) -> str:
    """Stable text form of a term, used for result cells and sorting."""
    if isinstance(term, Iri):
        return term.value
    if isinstance(term, PrefixedName):
        return f"{term.prefix}:{term.local}"
    if isinstance(term, Literal):
        return term.text
    return f"?{term.name}"


def expand(term: Term, prefixes: dict[str, str]) -> Term:
    """Resolve a PrefixedName against the prefix table; other terms pass through."""
    if isinstance(term, PrefixedName):
        try:
            base = prefixes[term.prefix]
        except KeyError:
            raise TripleMapError(f"unknown prefix: {term.prefix!r}") from None
        return Iri(base + term.local)
    return term


@dataclass(frozen=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if isinstance(self.subject, (Literal, Variable)):
            raise TripleMapError("triple subject must not be a literal or variable")
        if not isinstance(self.predicate, (Iri, PrefixedName)):
            raise TripleMapError("triple predicate must be an IRI or prefixed name")
        if isinstance(self.object, Variable):
            raise TripleMapError("triple object must not be a variable")


def _sort_key(triple: Triple) -> tuple[str, str, str]:
    return (render(triple.subject), render(triple.predicate), render(triple.object))


class TripleStore:
    """A duplicate-free triple set with SPO, POS and OSP indexes."""

    def __init__(self, triples: Iterable[Triple], prefixes: dict[str, str] | None = None):
        self.prefixes = dict(DEFAULT_PREFIXES if prefixes is None else prefixes)
        self._triples: set[Triple] = set(triples)
        self._spo: dict[Term, dict[Term, set[Term]]] = {}
        self._pos: dict[Term, dict[Term, set[Term]]] = {}
        self._osp: dict[Term, dict[Term, set[Term]]] = {}
        for t in self._triples:
            self._spo.setdefault(t.subject, {}).setdefault(t.predicate, set()).add(t.object)
            self._pos.setdefault(t.predicate, {}).setdefault(t.object, set()).add(t.subject)
            self._osp.setdefault(t.object, {}).setdefault(t.subject, set()).add(t.predicate)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def expand(self, term: Term) -> Term:
        return expand(term, self.prefixes)

    def lookup(
        self,
        s: Optional[Term] = None,
        p: Optional[Term] = None,
        o: Optional[Term] = None,
    ) -> list[Triple]:
        """All triples matching the bound positions, byte-order sorted.

        Prefixed names are expanded against the store's prefix table
        before matching; None leaves a position unbound.
        """
        s = self.expand(s) if s is not None else None
        p = self.expand(p) if p is not None else None
        o = self.expand(o) if o is not None else None
        result: Iterable[Triple]
        if s is not None and p is not None and o is not None:
            # consult the index rather than constructing a Triple: bound
            # values may be literals in positions no stored triple allows
            if o in self._spo.get(s, {}).get(p, ()):
                result = [Triple(s, p, o)]
            else:
                result = []
        elif s is not None and p is not None:
            result = (Triple(s, p, obj) for obj in self._spo.get(s, {}).get(p, ()))
        elif p is not None and o is not None:
            result = (Triple(sub, p, o) for sub in self._pos.get(p, {}).get(o, ()))
        elif s is not None and o is not None:
            result = (Triple(s, pred, o) for pred in self._osp.get(o, {}).get(s, ()))
        elif s is not None:
            result = (
                Triple(s, pred, obj)
                for pred, objs in self._spo.get(s, {}).items()
                for obj in objs
            )
        elif p is not None:
            result = (
                Triple(sub, p, obj)
                for obj, subs in self._pos.get(p, {}).items()
                for sub in subs
            )
        elif o is not None:
            result = (
                Triple(sub, pred, o)
                for sub, preds in self._osp.get(o, {}).items()
                for pred in preds
            )
        else:
            result = self._triples
        return sorted(result, key=_sort_key)

    def count(self, s: Optional[Term] = None, p: Optional[Term] = None, o: Optional[Term] = None) -> int:
        return len(self.lookup(s, p, o))


def _subject(table: str, row_id: int) -> Iri:
    return Iri(f"{WIKPA_BASE}{table}/{row_id}")


def _pred(name: str) -> Iri:
    return Iri(WIKPA_BASE + name)


# column order mirrors the TSV files
TABLE_PREDICATES = {
    "language": ("lang_id", "lang_code", "lang_name"),
    "page": ("page_id", "page_page_title"),
    "lang_pos": ("lang_pos_id", "lang_pos_page_id", "lang_pos_lang_id"),
    "meaning": ("meaning_id", "meaning_lang_pos_id"),
    "translation": ("translation_id", "translation_lang_pos_id", "translation_meaning_id"),
    "translation_entry": (
        "translation_entry_id",
        "translation_entry_translation_id",
        "translation_entry_lang_id",
        "translation_entry_wiki_text_id",
    ),
    "wiki_text": ("wiki_text_id", "wiki_text_text"),
}


def to_triples(store: DictionaryStore) -> TripleStore:
    """Map every table row to triples under the `wikpa:` vocabulary."""
    triples: list[Triple] = []

    def emit(table: str, row_id: int, values: tuple) -> None:
        subject = _subject(table, row_id)
        for pred_name, value in zip(TABLE_PREDICATES[table], values):
            triples.append(Triple(subject, _pred(pred_name), Literal(str(value))))

    for r in store.languages.values():
        emit("language", r.lang_id, (r.lang_id, r.lang_code, r.lang_name))
    for r in store.pages.values():
        emit("page", r.page_id, (r.page_id, r.page_title))
    for r in store.lang_pos.values():
        emit("lang_pos", r.lang_pos_id, (r.lang_pos_id, r.page_id, r.lang_id))
    for r in store.meanings.values():
        emit("meaning", r.meaning_id, (r.meaning_id, r.lang_pos_id))
    for r in store.translation_rows.values():
        emit("translation", r.translation_id, (r.translation_id, r.lang_pos_id, r.meaning_id))
    for r in store.translation_entries.values():
        emit(
            "translation_entry",
            r.translation_entry_id,
            (r.translation_entry_id, r.translation_id, r.lang_id, r.wiki_text_id),
        )
    for r in store.wiki_texts.values():
        emit("wiki_text", r.wiki_text_id, (r.wiki_text_id, r.text))
    return TripleStore(triples)


def to_tables(triples: TripleStore) -> DictionaryStore:
    """Rebuild the dictionary tables from a mapped TripleStore.

    Inverse of to_triples(); used to check the mapping is lossless.
    """
    by_subject: dict[tuple[str, int], dict[str, str]] = {}
    for t in triples.lookup():
        if not isinstance(t.subject, Iri) or not t.subject.value.startswith(WIKPA_BASE):
            raise TripleMapError(f"foreign subject: {render(t.subject)}")
        table, _, row_id = t.subject.value[len(WIKPA_BASE) :].partition("/")
        pred = t.predicate.value[len(WIKPA_BASE) :] if isinstance(t.predicate, Iri) else ""
        if not isinstance(t.object, Literal):
            raise TripleMapError(f"non-literal object: {render(t.object)}")
        by_subject.setdefault((table, int(row_id)), {})[pred] = t.object.text

    tables: dict[str, dict[int, object]] = {name: {} for name in TABLE_PREDICATES}
    builders = {
        "language": lambda v: LanguageRow(int(v[0]), v[1], v[2]),
        "page": lambda v: PageRow(int(v[0]), v[1]),
        "lang_pos": lambda v: LangPosRow(*(int(x) for x in v)),
        "meaning": lambda v: MeaningRow(*(int(x) for x in v)),
        "translation": lambda v: TranslationRow(*(int(x) for x in v)),
        "translation_entry": lambda v: TranslationEntryRow(*(int(x) for x in v)),
        "wiki_text": lambda v: WikiTextRow(int(v[0]), v[1]),
    }
    for (table, row_id), props in sorted(by_subject.items()):
        if table not in builders:
            raise TripleMapError(f"unknown table in subject: {table!r}")
        try:
            values = [props[p] for p in TABLE_PREDICATES[table]]
        except KeyError as exc:
            raise TripleMapError(f"{table}/{row_id}: missing column triple {exc}") from None
        tables[table][row_id] = builders[table](values)
    return DictionaryStore(
        languages=tables["language"],
        pages=tables["page"],
        lang_pos=tables["lang_pos"],
        meanings=tables["meaning"],
        translation_rows=tables["translation"],
        translation_entries=tables["translation_entry"],
        wiki_texts=tables["wiki_text"],
    )
