"""In-memory relational model of the machine-readable dictionary.

Seven linked tables (language, page, lang_pos, meaning, translation,
translation_entry, wiki_text) are ingested from headerless TSV files and
queried for translations in either direction. The store is immutable
after ingest; concurrent readers are safe.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import LexalignError

TABLE_NAMES = (
    "language",
    "page",
    "lang_pos",
    "meaning",
    "translation",
    "translation_entry",
    "wiki_text",
)

# columns per table, in file order
_TABLE_COLUMNS = {
    "language": 3,
    "page": 2,
    "lang_pos": 3,
    "meaning": 2,
    "translation": 3,
    "translation_entry": 4,
    "wiki_text": 2,
}

# filled in below, after the row dataclasses exist
_TABLE_TYPES: dict[str, type] = {}


class DictionaryError(LexalignError):
    pass


class IngestError(DictionaryError):
    """Raised on missing files, malformed lines or dangling references."""


class UnknownLanguageError(DictionaryError):
    """Raised when a lookup names a language code the store does not hold."""

    def __init__(self, code: str):
        super().__init__(f"unknown language code: {code!r}")
        self.code = code


@dataclass(frozen=True)
class LanguageRow:
    lang_id: int
    lang_code: str
    lang_name: str


@dataclass(frozen=True)
class PageRow:
    page_id: int
    page_title: str


@dataclass(frozen=True)
class LangPosRow:
    lang_pos_id: int
    page_id: int
    lang_id: int


@dataclass(frozen=True)
class MeaningRow:
    meaning_id: int
    lang_pos_id: int


@dataclass(frozen=True)
class TranslationRow:
    translation_id: int
    lang_pos_id: int
    meaning_id: int


@dataclass(frozen=True)
class TranslationEntryRow:
    translation_entry_id: int
    translation_id: int
    lang_id: int
    wiki_text_id: int


@dataclass(frozen=True)
class WikiTextRow:
    wiki_text_id: int
    text: str


_TABLE_TYPES.update(
    language=LanguageRow,
    page=PageRow,
    lang_pos=LangPosRow,
    meaning=MeaningRow,
    translation=TranslationRow,
    translation_entry=TranslationEntryRow,
    wiki_text=WikiTextRow,
)


@dataclass(frozen=True)
class StoreStats:
    entry_count: int
    entries_by_language: dict[str, int]
    translation_entry_count: int
    translation_pairs: dict[tuple[str, str], int]


@dataclass
class DictionaryStore:
    """The seven row tables keyed by primary id, plus lookup indexes."""

    languages: dict[int, LanguageRow] = field(default_factory=dict)
    pages: dict[int, PageRow] = field(default_factory=dict)
    lang_pos: dict[int, LangPosRow] = field(default_factory=dict)
    meanings: dict[int, MeaningRow] = field(default_factory=dict)
    translation_rows: dict[int, TranslationRow] = field(default_factory=dict)
    translation_entries: dict[int, TranslationEntryRow] = field(default_factory=dict)
    wiki_texts: dict[int, WikiTextRow] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._build_indexes()

    def _build_indexes(self) -> None:
        self._lang_by_code: dict[str, LanguageRow] = {}
        for lang in self.languages.values():
            self._lang_by_code[lang.lang_code] = lang
        self._pages_by_title: dict[str, list[int]] = defaultdict(list)
        for page in self.pages.values():
            self._pages_by_title[page.page_title].append(page.page_id)
        self._lang_pos_by_page: dict[int, list[int]] = defaultdict(list)
        for lp in self.lang_pos.values():
            self._lang_pos_by_page[lp.page_id].append(lp.lang_pos_id)
        self._translations_by_lang_pos: dict[int, list[int]] = defaultdict(list)
        for tr in self.translation_rows.values():
            self._translations_by_lang_pos[tr.lang_pos_id].append(tr.translation_id)
        self._entries_by_translation: dict[int, list[int]] = defaultdict(list)
        self._entries_by_text: dict[str, list[int]] = defaultdict(list)
        for entry in self.translation_entries.values():
            self._entries_by_translation[entry.translation_id].append(
                entry.translation_entry_id
            )
            # dangling refs are reported by verify_integrity, not here
            wiki_text = self.wiki_texts.get(entry.wiki_text_id)
            if wiki_text is not None:
                self._entries_by_text[wiki_text.text].append(entry.translation_entry_id)

    def language_by_code(self, code: str) -> LanguageRow:
        try:
            return self._lang_by_code[code]
        except KeyError:
            raise UnknownLanguageError(code) from None

    def translations(self, headword: str, src_lang: str, tgt_lang: str) -> list[str]:
        """All target-language terms listed under `headword` in `src_lang`.

        Deduplicated and sorted by UTF-8 byte order. Unknown language
        codes raise; an absent headword yields an empty list.
        """
        src = self.language_by_code(src_lang)
        tgt = self.language_by_code(tgt_lang)
        terms: set[str] = set()
        for page_id in self._pages_by_title.get(headword, ()):
            for lp_id in self._lang_pos_by_page[page_id]:
                if self.lang_pos[lp_id].lang_id != src.lang_id:
                    continue
                for tr_id in self._translations_by_lang_pos[lp_id]:
                    for entry_id in self._entries_by_translation[tr_id]:
                        entry = self.translation_entries[entry_id]
                        if entry.lang_id == tgt.lang_id:
                            terms.add(self.wiki_texts[entry.wiki_text_id].text)
        return sorted(terms)

    def reverse_translations(self, term: str, term_lang: str, entry_lang: str) -> list[str]:
        """All `entry_lang` headwords listing `term` as a `term_lang` translation.

        The exact inverse of translations(): h is returned iff term is in
        translations(h, entry_lang, term_lang).
        """
        tlang = self.language_by_code(term_lang)
        elang = self.language_by_code(entry_lang)
        headwords: set[str] = set()
        for entry_id in self._entries_by_text.get(term, ()):
            entry = self.translation_entries[entry_id]
            if entry.lang_id != tlang.lang_id:
                continue
            translation = self.translation_rows[entry.translation_id]
            lp = self.lang_pos[translation.lang_pos_id]
            if lp.lang_id != elang.lang_id:
                continue
            headwords.add(self.pages[lp.page_id].page_title)
        return sorted(headwords)

    def stats(self) -> StoreStats:
        entries_by_language: dict[str, int] = defaultdict(int)
        for lp in self.lang_pos.values():
            entries_by_language[self.languages[lp.lang_id].lang_code] += 1
        pairs: dict[tuple[str, str], int] = defaultdict(int)
        for entry in self.translation_entries.values():
            translation = self.translation_rows[entry.translation_id]
            src_lang = self.languages[self.lang_pos[translation.lang_pos_id].lang_id]
            tgt_lang = self.languages[entry.lang_id]
            pairs[(src_lang.lang_code, tgt_lang.lang_code)] += 1
        return StoreStats(
            entry_count=len(self.lang_pos),
            entries_by_language=dict(entries_by_language),
            translation_entry_count=len(self.translation_entries),
            translation_pairs=dict(pairs),
        )

    def verify_integrity(self) -> None:
        """Full-scan referential integrity check; raises IngestError on the
        first violation."""
        codes: set[str] = set()
        for lang in self.languages.values():
            if not lang.lang_code:
                raise IngestError(f"language {lang.lang_id}: empty lang_code")
            if lang.lang_code in codes:
                raise IngestError(f"language {lang.lang_id}: duplicate code {lang.lang_code!r}")
            codes.add(lang.lang_code)
        for page in self.pages.values():
            if not page.page_title:
                raise IngestError(f"page {page.page_id}: empty page_title")
        for wt in self.wiki_texts.values():
            if not wt.text:
                raise IngestError(f"wiki_text {wt.wiki_text_id}: empty text")
        for lp in self.lang_pos.values():
            if lp.page_id not in self.pages:
                raise IngestError(f"lang_pos {lp.lang_pos_id}: unknown page_id {lp.page_id}")
            if lp.lang_id not in self.languages:
                raise IngestError(f"lang_pos {lp.lang_pos_id}: unknown lang_id {lp.lang_id}")
        for meaning in self.meanings.values():
            if meaning.lang_pos_id not in self.lang_pos:
                raise IngestError(
                    f"meaning {meaning.meaning_id}: unknown lang_pos_id {meaning.lang_pos_id}"
                )
        for tr in self.translation_rows.values():
            if tr.lang_pos_id not in self.lang_pos:
                raise IngestError(
                    f"translation {tr.translation_id}: unknown lang_pos_id {tr.lang_pos_id}"
                )
            meaning = self.meanings.get(tr.meaning_id)
            if meaning is None:
                raise IngestError(
                    f"translation {tr.translation_id}: unknown meaning_id {tr.meaning_id}"
                )
            if meaning.lang_pos_id != tr.lang_pos_id:
                raise IngestError(
                    f"translation {tr.translation_id}: meaning {tr.meaning_id} belongs to "
                    f"lang_pos {meaning.lang_pos_id}, not {tr.lang_pos_id}"
                )
        for entry in self.translation_entries.values():
            eid = entry.translation_entry_id
            if entry.translation_id not in self.translation_rows:
                raise IngestError(
                    f"translation_entry {eid}: unknown translation_id {entry.translation_id}"
                )
            if entry.lang_id not in self.languages:
                raise IngestError(f"translation_entry {eid}: unknown lang_id {entry.lang_id}")
            if entry.wiki_text_id not in self.wiki_texts:
                raise IngestError(
                    f"translation_entry {eid}: unknown wiki_text_id {entry.wiki_text_id}"
                )


def _parse_table(path: Path, columns: int) -> list[tuple[int, list[str]]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                raise IngestError(f"{path.name}:{line_no}: blank line")
            cells = line.split("\t")
            if len(cells) != columns:
                raise IngestError(
                    f"{path.name}:{line_no}: expected {columns} columns, got {len(cells)}"
                )
            rows.append((line_no, cells))
    return rows


def _int_cell(path: Path, line_no: int, value: str, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise IngestError(f"{path.name}:{line_no}: {what} is not an integer: {value!r}") from None


def ingest_tables(directory: str | Path) -> DictionaryStore:
    """Load the seven TSV tables from `directory` and verify integrity.

    Missing files, malformed lines and dangling references raise
    IngestError naming the file and line.
    """
    directory = Path(directory)
    raw: dict[str, list[tuple[int, list[str]]]] = {}
    for name in TABLE_NAMES:
        path = directory / f"{name}.tsv"
        if not path.is_file():
            raise IngestError(f"missing table file: {path}")
        raw[name] = _parse_table(path, _TABLE_COLUMNS[name])

    tables: dict[str, dict[int, object]] = {}
    for name in TABLE_NAMES:
        path = directory / f"{name}.tsv"
        row_type = _TABLE_TYPES[name]
        field_list = fields(row_type)
        key_name = field_list[0].name
        rows: dict[int, object] = {}
        for line_no, cells in raw[name]:
            values = [
                _int_cell(path, line_no, cell, f.name) if f.type == "int" else cell
                for cell, f in zip(cells, field_list)
            ]
            row = row_type(*values)
            key = values[0]
            if key in rows:
                raise IngestError(f"{path.name}:{line_no}: duplicate {key_name} {key}")
            rows[key] = row
        tables[name] = rows

    store = DictionaryStore(
        languages=tables["language"],
        pages=tables["page"],
        lang_pos=tables["lang_pos"],
        meanings=tables["meaning"],
        translation_rows=tables["translation"],
        translation_entries=tables["translation_entry"],
        wiki_texts=tables["wiki_text"],
    )
    store.verify_integrity()
    return store


def save_snapshot(store: DictionaryStore, path: str | Path) -> None:
    """Serialize the store to a single JSON file (the CLI's store format)."""
    payload = {
        "language": [[r.lang_id, r.lang_code, r.lang_name] for r in store.languages.values()],
        "page": [[r.page_id, r.page_title] for r in store.pages.values()],
        "lang_pos": [[r.lang_pos_id, r.page_id, r.lang_id] for r in store.lang_pos.values()],
        "meaning": [[r.meaning_id, r.lang_pos_id] for r in store.meanings.values()],
        "translation": [
            [r.translation_id, r.lang_pos_id, r.meaning_id] for r in store.translation_rows.values()
        ],
        "translation_entry": [
            [r.translation_entry_id, r.translation_id, r.lang_id, r.wiki_text_id]
            for r in store.translation_entries.values()
        ],
        "wiki_text": [[r.wiki_text_id, r.text] for r in store.wiki_texts.values()],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, sort_keys=True)


def load_snapshot(path: str | Path) -> DictionaryStore:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IngestError(f"cannot read store snapshot {path}: {exc}") from exc
    try:
        store = DictionaryStore(
            languages={r[0]: LanguageRow(*r) for r in payload["language"]},
            pages={r[0]: PageRow(*r) for r in payload["page"]},
            lang_pos={r[0]: LangPosRow(*r) for r in payload["lang_pos"]},
            meanings={r[0]: MeaningRow(*r) for r in payload["meaning"]},
            translation_rows={r[0]: TranslationRow(*r) for r in payload["translation"]},
            translation_entries={
                r[0]: TranslationEntryRow(*r) for r in payload["translation_entry"]
            },
            wiki_texts={r[0]: WikiTextRow(*r) for r in payload["wiki_text"]},
        )
    except (KeyError, TypeError) as exc:
        raise IngestError(f"malformed store snapshot {path}: {exc}") from exc
    store.verify_integrity()
    return store


def open_store(path: str | Path) -> DictionaryStore:
    """Open either a TSV table directory or a JSON snapshot file."""
    path = Path(path)
    if path.is_dir():
        return ingest_tables(path)
    return load_snapshot(path)
