"""Thesaurus taxonomy with information content and Jiang-Conrath similarity.

The file format is TSV with columns

    synset_id    word1|word2|...    hypernym_id1|...    value    mode    [gloss]

where mode is "freq" or "ic" and must be the same on every row. In freq
mode each synset's count is propagated to all of its ancestors and
IC(s) = -ln(cum(s) / cum(root)); freq mode therefore requires a single
root. In ic mode the column is taken as the information content
directly. Either way the result must satisfy IC(root) = 0 and
IC(child) >= IC(parent) along every hypernym edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import LexalignError

JCN_MAX = 1e9
DENOM_EPS = 1e-9
_MONOTONE_EPS = 1e-12


class ThesaurusError(LexalignError):
    pass


@dataclass(frozen=True)
class Synset:
    id: str
    words: frozenset[str]
    hypernyms: tuple[str, ...]
    gloss: str = ""


class Thesaurus:
    def __init__(self, synsets: dict[str, Synset], ic: dict[str, float]):
        self.synsets = synsets
        self.ic = ic
        self.word_index: dict[str, set[str]] = {}
        for synset in synsets.values():
            for word in synset.words:
                self.word_index.setdefault(word, set()).add(synset.id)
        self.roots = sorted(s.id for s in synsets.values() if not s.hypernyms)
        self._ancestors_cache: dict[str, frozenset[str]] = {}

    def synset(self, synset_id: str) -> Synset:
        try:
            return self.synsets[synset_id]
        except KeyError:
            raise ThesaurusError(f"unknown synset: {synset_id}") from None

    def ancestors_or_self(self, synset_id: str) -> frozenset[str]:
        cached = self._ancestors_cache.get(synset_id)
        if cached is not None:
            return cached
        seen: set[str] = set()
        stack = [self.synset(synset_id).id]
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            stack.extend(self.synsets[current].hypernyms)
        result = frozenset(seen)
        self._ancestors_cache[synset_id] = result
        return result


def lcs(thesaurus: Thesaurus, a: str, b: str) -> Optional[str]:
    """Common subsumer of both synsets with maximal IC; ties break toward
    the smallest id; None when the synsets share no ancestor."""
    common = thesaurus.ancestors_or_self(a) & thesaurus.ancestors_or_self(b)
    if not common:
        return None
    return max(common, key=lambda sid: (thesaurus.ic[sid], _NegStr(sid)))


class _NegStr:
    """Orders strings descending inside a max(); used for smallest-id ties."""

    __slots__ = ("value",)

    def __init__(self, value: str):
        self.value = value

    def __lt__(self, other: "_NegStr") -> bool:
        return self.value > other.value


def jcn_similarity(thesaurus: Thesaurus, a: str, b: str) -> float:
    """1 / (IC(a) + IC(b) - 2 * IC(lcs)); capped at JCN_MAX when the
    denominator vanishes, 0 when there is no common subsumer."""
    subsumer = lcs(thesaurus, a, b)
    if subsumer is None:
        return 0.0
    denominator = thesaurus.ic[a] + thesaurus.ic[b] - 2 * thesaurus.ic[subsumer]
    if denominator <= DENOM_EPS:
        return JCN_MAX
    return 1.0 / denominator


def lexical_match(thesaurus: Thesaurus, w1: str, w2: str) -> float:
    """Best Jiang-Conrath score over all sense pairs of the two words;
    0 when either word is not in the thesaurus."""
    senses1 = thesaurus.word_index.get(w1)
    senses2 = thesaurus.word_index.get(w2)
    if not senses1 or not senses2:
        return 0.0
    return max(jcn_similarity(thesaurus, s1, s2) for s1 in sorted(senses1) for s2 in sorted(senses2))


def _parse_rows(path: Path) -> tuple[list[tuple[int, Synset, float]], str]:
    rows: list[tuple[int, Synset, float]] = []
    mode: Optional[str] = None
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ThesaurusError(f"cannot read thesaurus {path}: {exc}") from exc
    for line_no, line in enumerate(lines, start=1):
        if not line.strip() or line.startswith("#"):
            continue
        cells = line.split("\t")
        if len(cells) not in (5, 6):
            raise ThesaurusError(f"{path.name}:{line_no}: expected 5 or 6 columns, got {len(cells)}")
        synset_id, words_cell, hypernyms_cell, value_cell, row_mode = cells[:5]
        gloss = cells[5] if len(cells) == 6 else ""
        if row_mode not in ("freq", "ic"):
            raise ThesaurusError(f"{path.name}:{line_no}: mode must be 'freq' or 'ic'")
        if mode is None:
            mode = row_mode
        elif row_mode != mode:
            raise ThesaurusError(f"{path.name}:{line_no}: mixed modes ({mode} vs {row_mode})")
        words = frozenset(w for w in words_cell.split("|") if w)
        if not words:
            raise ThesaurusError(f"{path.name}:{line_no}: synset {synset_id} has no words")
        hypernyms = tuple(h for h in hypernyms_cell.split("|") if h)
        try:
            value = float(value_cell)
        except ValueError:
            raise ThesaurusError(
                f"{path.name}:{line_no}: value is not a number: {value_cell!r}"
            ) from None
        rows.append((line_no, Synset(synset_id, words, hypernyms, gloss), value))
    if mode is None:
        raise ThesaurusError(f"{path.name}: empty thesaurus")
    return rows, mode


def load_thesaurus(path: str | Path) -> Thesaurus:
    path = Path(path)
    rows, mode = _parse_rows(path)

    synsets: dict[str, Synset] = {}
    values: dict[str, float] = {}
    for line_no, synset, value in rows:
        if synset.id in synsets:
            raise ThesaurusError(f"{path.name}:{line_no}: duplicate synset id {synset.id}")
        synsets[synset.id] = synset
        values[synset.id] = value
    for line_no, synset, _ in rows:
        for hypernym in synset.hypernyms:
            if hypernym not in synsets:
                raise ThesaurusError(
                    f"{path.name}:{line_no}: dangling hypernym {hypernym!r} on {synset.id}"
                )

    _check_dag(synsets, path.name)

    if mode == "freq":
        ic = _ic_from_frequencies(synsets, values, path.name)
    else:
        ic = dict(values)

    thesaurus = Thesaurus(synsets, ic)
    if not thesaurus.roots:
        raise ThesaurusError(f"{path.name}: no root synset")
    for root in thesaurus.roots:
        if abs(ic[root]) > _MONOTONE_EPS:
            raise ThesaurusError(f"{path.name}: root {root} must have IC 0, got {ic[root]}")
    for synset in synsets.values():
        if ic[synset.id] < 0:
            raise ThesaurusError(f"{path.name}: negative IC on {synset.id}")
        for hypernym in synset.hypernyms:
            if ic[synset.id] < ic[hypernym] - _MONOTONE_EPS:
                raise ThesaurusError(
                    f"{path.name}: IC({synset.id}) < IC({hypernym}) breaks monotonicity"
                )
    return thesaurus


def _check_dag(synsets: dict[str, Synset], filename: str) -> None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {sid: WHITE for sid in synsets}

    def visit(sid: str) -> None:
        color[sid] = GRAY
        for hypernym in synsets[sid].hypernyms:
            if color[hypernym] == GRAY:
                raise ThesaurusError(f"{filename}: hypernym cycle through {hypernym}")
            if color[hypernym] == WHITE:
                visit(hypernym)
        color[sid] = BLACK

    for sid in sorted(synsets):
        if color[sid] == WHITE:
            visit(sid)


def _ic_from_frequencies(
    synsets: dict[str, Synset], freqs: dict[str, float], filename: str
) -> dict[str, float]:
    for sid, freq in freqs.items():
        if freq < 0:
            raise ThesaurusError(f"{filename}: negative frequency on {sid}")
    roots = [sid for sid, s in synsets.items() if not s.hypernyms]
    if len(roots) != 1:
        raise ThesaurusError(
            f"{filename}: frequency mode requires exactly one root, found {len(roots)}"
        )

    cumulative = {sid: 0.0 for sid in synsets}
    ancestor_sets: dict[str, frozenset[str]] = {}

    def ancestors_or_self(sid: str) -> frozenset[str]:
        cached = ancestor_sets.get(sid)
        if cached is not None:
            return cached
        seen: set[str] = set()
        stack = [sid]
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            stack.extend(synsets[current].hypernyms)
        result = frozenset(seen)
        ancestor_sets[sid] = result
        return result

    for sid, freq in freqs.items():
        for ancestor in ancestors_or_self(sid):
            cumulative[ancestor] += freq

    total = cumulative[roots[0]]
    if total <= 0:
        raise ThesaurusError(f"{filename}: total frequency must be positive")
    return {sid: -math.log(cumulative[sid] / total) if cumulative[sid] > 0 else math.inf
            for sid in synsets}
