"""Label tokenization and translation through a pluggable translator.

Ontology labels are frequently concatenated ("dateDePublication",
"Extrait-Compilation"); tokenize() splits them at lower-to-upper case
boundaries, hyphens, underscores and spaces. translate_label() looks up
the whole label and each token, trying the original spelling first and
the lowercased form second, because dictionary headwords are lowercase
lemmas. Candidates from different tokens are never recombined into new
compounds, and inflected forms are not reduced to lemmas; both
limitations are deliberate and covered by tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from .dictstore import DictionaryStore
from .errors import LexalignError
from .lexiserve import client_reverse_translate, client_translate


class LabelError(LexalignError):
    pass


class Translator(Protocol):
    """Behavioral contract: a deduplicated candidate list, empty when the
    word is absent (never a fabricated echo of the input)."""

    def translate(self, word: str, from_lang: str, to_lang: str) -> list[str]: ...


@dataclass
class TranslatedLabel:
    original: str
    tokens: list[str]
    whole_label_candidates: list[str]
    per_token_candidates: list[list[str]]
    fallback_used: bool

    def candidate_keys(self) -> list[str]:
        """All strings usable for matching: whole-label candidates, each
        per-token candidate on its own, and the original when nothing
        translated. Deduplicated, order of first appearance."""
        keys: list[str] = []
        seen: set[str] = set()
        for candidate in self.whole_label_candidates:
            if candidate not in seen:
                seen.add(candidate)
                keys.append(candidate)
        for candidates in self.per_token_candidates:
            for candidate in candidates:
                if candidate not in seen:
                    seen.add(candidate)
                    keys.append(candidate)
        if self.fallback_used and self.original not in seen:
            keys.append(self.original)
        return keys


def tokenize(label: str) -> list[str]:
    """Split at lower-to-upper boundaries, '-', '_' and spaces; lowercase.

    "dateDePublication" -> ["date", "de", "publication"]
    """
    if not label:
        raise LabelError("cannot tokenize an empty label")
    words: list[str] = []
    current: list[str] = []
    prev = ""
    for ch in label:
        if ch in "-_ \t":
            if current:
                words.append("".join(current))
                current = []
            prev = ""
            continue
        if prev and prev.islower() and ch.isupper() and current:
            words.append("".join(current))
            current = []
        current.append(ch)
        prev = ch
    if current:
        words.append("".join(current))
    return [w.lower() for w in words if w]


def _lookup_with_case_fallback(
    translator: Translator, word: str, from_lang: str, to_lang: str
) -> list[str]:
    candidates = set(translator.translate(word, from_lang, to_lang))
    lowered = word.lower()
    if lowered != word:
        candidates.update(translator.translate(lowered, from_lang, to_lang))
    return sorted(candidates)


def translate_label(
    label: str, translator: Translator, from_lang: str, to_lang: str
) -> TranslatedLabel:
    """Translate the whole label and each of its tokens.

    When every candidate list comes back empty, the original label is
    flagged as the matching key (fallback_used), mirroring how untranslatable
    identifiers such as "isbn" are still usable for exact matching.
    """
    tokens = tokenize(label)
    whole = _lookup_with_case_fallback(translator, label, from_lang, to_lang)
    per_token = [
        _lookup_with_case_fallback(translator, token, from_lang, to_lang) for token in tokens
    ]
    fallback = not whole and all(not c for c in per_token)
    return TranslatedLabel(
        original=label,
        tokens=tokens,
        whole_label_candidates=whole,
        per_token_candidates=per_token,
        fallback_used=fallback,
    )


def token_sequence_match(
    tokens_a: list[str],
    tokens_b: list[str],
    pair_similarity,
    threshold: float,
) -> float | None:
    """Complete one-to-one cover of two token lists.

    Every token on each side must pair with a distinct token on the
    other side at similarity >= threshold; the returned score is the
    smallest pairwise similarity in the best such cover (None when no
    cover exists). Lists of different lengths never match, which is what
    keeps a lone candidate like "short" from claiming "shortName".
    """
    if len(tokens_a) != len(tokens_b) or not tokens_a:
        return None
    n = len(tokens_a)
    sims = [[pair_similarity(a, b) for b in tokens_b] for a in tokens_a]

    best: float | None = None
    used = [False] * n

    def assign(i: int, current_min: float) -> None:
        nonlocal best
        if i == n:
            if best is None or current_min > best:
                best = current_min
            return
        for j in range(n):
            if used[j] or sims[i][j] < threshold:
                continue
            used[j] = True
            assign(i + 1, min(current_min, sims[i][j]))
            used[j] = False

    assign(0, 1.0)
    return best


class DictionaryTranslator:
    """Dictionary-backed translator.

    Combines the forward lookup (headword in from_lang listing to_lang
    terms) with the reverse lookup (to_lang headwords listing the word as
    a from_lang translation), so it works no matter which side of the
    dictionary the requested direction lives on.
    """

    def __init__(self, store: DictionaryStore):
        self._store = store

    def translate(self, word: str, from_lang: str, to_lang: str) -> list[str]:
        forward = self._store.translations(word, from_lang, to_lang)
        backward = self._store.reverse_translations(word, from_lang, to_lang)
        return sorted(set(forward) | set(backward))


class EndpointTranslator:
    """Same contract as DictionaryTranslator, but over the HTTP service."""

    def __init__(self, endpoint: str, timeout_ms: int = 5000):
        self._endpoint = endpoint
        self._timeout_ms = timeout_ms

    def translate(self, word: str, from_lang: str, to_lang: str) -> list[str]:
        forward = client_translate(self._endpoint, word, from_lang, to_lang, self._timeout_ms)
        backward = client_reverse_translate(
            self._endpoint, word, from_lang, to_lang, self._timeout_ms
        )
        return sorted(set(forward) | set(backward))


class StaticTableTranslator:
    """Fixed lookup table, used in tests as the stand-in for an online
    translation API. Rows: from_lang, to_lang, word, translation."""

    def __init__(self, rows: list[tuple[str, str, str, str]]):
        self._table: dict[tuple[str, str, str], set[str]] = {}
        for from_lang, to_lang, word, translation in rows:
            self._table.setdefault((from_lang, to_lang, word), set()).add(translation)

    @classmethod
    def from_file(cls, path: str | Path) -> "StaticTableTranslator":
        rows = []
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise LabelError(f"cannot read translation table {path}: {exc}") from exc
        for line_no, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            cells = line.split("\t")
            if len(cells) != 4:
                raise LabelError(f"{path.name}:{line_no}: expected 4 columns, got {len(cells)}")
            rows.append((cells[0], cells[1], cells[2], cells[3]))
        return cls(rows)

    def translate(self, word: str, from_lang: str, to_lang: str) -> list[str]:
        return sorted(self._table.get((from_lang, to_lang, word), ()))
