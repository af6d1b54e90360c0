"""End-to-end alignment pipeline and its evaluation.

Stages: translate every left-ontology display name, then run the string
stage (Jaro-Winkler over token sequences), the lexical stage (thesaurus
similarity on pairs the string stage left unmatched), and the structural
stage (shared-triple and subclass rules seeded by the earlier stages,
plus expanding-tree scores). Scores are aggregated by taking the maximum
per entity pair, and a greedy one-to-one selection by descending score
(ties by IRI byte order) produces the final alignment. Everything is
deterministic.

Only pairs of the same entity kind (class/class, property/property of
the same flavor, individual/individual) are ever compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional

from .errors import LexalignError
from .labelkit import TranslatedLabel, Translator, token_sequence_match, tokenize, translate_label
from .ontomodel import EntityId, Kind, Ontology
from .strsim import DEFAULT_SW_SCORING, jaro_winkler, sw_normalized
from .structsim import (
    DEFAULT_EXPANSION,
    ExpansionConfig,
    default_name_matcher,
    expand_tree,
    subclass_rule,
    tree_similarity,
    triple_rule,
)
from .taxsim import Thesaurus, lexical_match

SOURCE_STRING = "string"
SOURCE_LEXICAL = "lexical"
SOURCE_STRUCTURE = "structure"
_SOURCE_PRIORITY = {SOURCE_STRING: 0, SOURCE_LEXICAL: 1, SOURCE_STRUCTURE: 2}


class AlignerError(LexalignError):
    pass


class AlignmentFormatError(AlignerError):
    pass


@dataclass(frozen=True)
class Correspondence:
    left: EntityId
    right: EntityId
    score: float
    source: str = SOURCE_STRING

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise AlignerError(f"correspondence score out of range: {self.score}")


class Alignment:
    """A set of correspondences that is one-to-one on both sides."""

    def __init__(self, correspondences: Iterable[Correspondence] = ()):
        ordered = sorted(correspondences, key=lambda c: (c.left.iri, c.right.iri))
        lefts: set[str] = set()
        rights: set[str] = set()
        for corr in ordered:
            if corr.left.iri in lefts:
                raise AlignerError(f"entity aligned twice on the left: {corr.left.iri}")
            if corr.right.iri in rights:
                raise AlignerError(f"entity aligned twice on the right: {corr.right.iri}")
            lefts.add(corr.left.iri)
            rights.add(corr.right.iri)
        self.correspondences: tuple[Correspondence, ...] = tuple(ordered)

    def __iter__(self):
        return iter(self.correspondences)

    def __len__(self) -> int:
        return len(self.correspondences)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Alignment):
            return NotImplemented
        return self.correspondences == other.correspondences

    def __repr__(self) -> str:
        return f"Alignment({len(self.correspondences)} correspondences)"

    def pairs(self) -> set[tuple[str, str]]:
        return {(c.left.iri, c.right.iri) for c in self.correspondences}


@dataclass(frozen=True)
class MatchConfig:
    source_lang: str
    target_lang: str
    jw_threshold: float = 0.9
    jcn_threshold: float = 1.0
    sw_enabled: bool = False
    structure_enabled: bool = True
    expansion: ExpansionConfig = DEFAULT_EXPANSION

    def __post_init__(self) -> None:
        if self.jw_threshold <= 0 or self.jcn_threshold <= 0:
            raise AlignerError("thresholds must be positive")


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    aligned: int
    reference: int
    common: int

    def summary(self) -> str:
        return (
            f"precision={self.precision:.2f} recall={self.recall:.2f} "
            f"|A|={self.aligned} |R|={self.reference} |R∩A|={self.common}"
        )


def evaluate(alignment: Alignment, reference: Alignment) -> Metrics:
    """Precision |R∩A|/|A| and recall |R∩A|/|R| on exact IRI pairs,
    ignoring scores. Rounding happens only in summary()."""
    a_pairs = alignment.pairs()
    r_pairs = reference.pairs()
    common = len(a_pairs & r_pairs)
    precision = common / len(a_pairs) if a_pairs else 0.0
    recall = common / len(r_pairs) if r_pairs else 0.0
    return Metrics(precision, recall, len(a_pairs), len(r_pairs), common)


def _token_similarity(cfg: MatchConfig) -> Callable[[str, str], float]:
    if not cfg.sw_enabled:
        return jaro_winkler

    def sim(a: str, b: str) -> float:
        return max(jaro_winkler(a, b), sw_normalized(a, b, DEFAULT_SW_SCORING))

    return sim


def _translated(o1: Ontology, translator: Translator, cfg: MatchConfig) -> dict[str, TranslatedLabel]:
    """Translate every left-entity display name once; keyed by IRI."""
    out: dict[str, TranslatedLabel] = {}
    for iri in sorted(o1.entities):
        entity = o1.entities[iri]
        name = o1.display_name(entity)
        out[iri] = translate_label(name, translator, cfg.source_lang, cfg.target_lang)
    return out


def _kind_pairs(o1: Ontology, o2: Ontology) -> list[tuple[EntityId, EntityId]]:
    pairs = []
    for kind in Kind:
        for e1 in o1.by_kind(kind):
            for e2 in o2.by_kind(kind):
                pairs.append((e1, e2))
    return pairs


def string_correspondences(
    o1: Ontology,
    o2: Ontology,
    translations: dict[str, TranslatedLabel],
    cfg: MatchConfig,
) -> list[Correspondence]:
    """Best token-sequence score over all candidate keys per pair."""
    sim = _token_similarity(cfg)
    key_tokens: dict[str, list[list[str]]] = {
        iri: [tokenize(key) for key in tl.candidate_keys()] for iri, tl in translations.items()
    }
    name_tokens2 = {e.iri: tokenize(o2.display_name(e)) for e in o2.entities.values()}

    out = []
    for e1, e2 in _kind_pairs(o1, o2):
        best: Optional[float] = None
        for tokens in key_tokens[e1.iri]:
            score = token_sequence_match(tokens, name_tokens2[e2.iri], sim, cfg.jw_threshold)
            if score is not None and (best is None or score > best):
                best = score
        if best is not None:
            out.append(Correspondence(e1, e2, min(best, 1.0), SOURCE_STRING))
    return out


def _jcn_to_score(value: float) -> float:
    # monotone map of the unbounded similarity into [0, 1)
    return value / (1.0 + value)


def lexical_correspondences(
    o1: Ontology,
    o2: Ontology,
    translations: dict[str, TranslatedLabel],
    cfg: MatchConfig,
    thesaurus: Thesaurus,
    skip: set[tuple[str, str]],
) -> list[Correspondence]:
    """Thesaurus similarity for pairs the string stage did not cover."""
    out = []
    name2 = {e.iri: " ".join(tokenize(o2.display_name(e))) for e in o2.entities.values()}
    for e1, e2 in _kind_pairs(o1, o2):
        if (e1.iri, e2.iri) in skip:
            continue
        best = 0.0
        for key in translations[e1.iri].candidate_keys():
            value = lexical_match(thesaurus, " ".join(tokenize(key)), name2[e2.iri])
            best = max(best, value)
        if best >= cfg.jcn_threshold:
            out.append(Correspondence(e1, e2, _jcn_to_score(best), SOURCE_LEXICAL))
    return out


def structural_correspondences(
    o1: Ontology,
    o2: Ontology,
    translations: dict[str, TranslatedLabel],
    cfg: MatchConfig,
    seed: Alignment,
) -> list[Correspondence]:
    """Rule-based pairs at score 1.0 plus expanding-tree scores for
    class pairs with any overlap."""
    raw_matcher = default_name_matcher(cfg.expansion.label_matcher_threshold)
    seed_pairs = seed.pairs()

    out = []
    seen: set[tuple[str, str]] = set()
    for left, right in triple_rule(o1, o2, seed_pairs, raw_matcher) + subclass_rule(
        o1, o2, seed_pairs, raw_matcher
    ):
        if (left.iri, right.iri) not in seen:
            seen.add((left.iri, right.iri))
            out.append(Correspondence(left, right, 1.0, SOURCE_STRUCTURE))

    # tree comparison translates left-side node names through the same cache
    keys_by_name: dict[str, list[list[str]]] = {}
    for iri, tl in translations.items():
        name = o1.display_name(o1.entities[iri])
        keys_by_name.setdefault(name, [])
        for key in tl.candidate_keys():
            keys_by_name[name].append(tokenize(key))

    def translated_matcher(a_name: str, b_name: str) -> bool:
        b_tokens = tokenize(b_name)
        for tokens in keys_by_name.get(a_name, [tokenize(a_name)]):
            if token_sequence_match(tokens, b_tokens, jaro_winkler, cfg.expansion.label_matcher_threshold) is not None:
                return True
        return False

    trees1 = {c.iri: expand_tree(o1, c, cfg.expansion) for c in o1.classes()}
    trees2 = {c.iri: expand_tree(o2, c, cfg.expansion) for c in o2.classes()}
    for c1 in o1.classes():
        for c2 in o2.classes():
            score = tree_similarity(trees1[c1.iri], trees2[c2.iri], translated_matcher)
            if score > 0:
                out.append(Correspondence(c1, c2, score, SOURCE_STRUCTURE))
    return out


def aggregate(correspondences: Iterable[Correspondence]) -> list[Correspondence]:
    """Keep the maximum score per (left, right) pair; on ties the earlier
    pipeline stage wins the source tag."""
    best: dict[tuple[str, str], Correspondence] = {}
    for corr in correspondences:
        key = (corr.left.iri, corr.right.iri)
        current = best.get(key)
        if (
            current is None
            or corr.score > current.score
            or (
                corr.score == current.score
                and _SOURCE_PRIORITY[corr.source] < _SOURCE_PRIORITY[current.source]
            )
        ):
            best[key] = corr
    return [best[key] for key in sorted(best)]


def greedy_one_to_one(correspondences: Iterable[Correspondence]) -> Alignment:
    """Select by descending score, ties by (left IRI, right IRI) bytes."""
    pool = aggregate(correspondences)
    pool.sort(key=lambda c: (-c.score, c.left.iri, c.right.iri))
    lefts: set[str] = set()
    rights: set[str] = set()
    chosen = []
    for corr in pool:
        if corr.left.iri in lefts or corr.right.iri in rights:
            continue
        lefts.add(corr.left.iri)
        rights.add(corr.right.iri)
        chosen.append(corr)
    return Alignment(chosen)


def align(
    o1: Ontology,
    o2: Ontology,
    translator: Translator,
    cfg: MatchConfig,
    thesaurus: Optional[Thesaurus] = None,
) -> Alignment:
    """Run the full pipeline and return the one-to-one alignment."""
    translations = _translated(o1, translator, cfg)
    string_stage = string_correspondences(o1, o2, translations, cfg)
    lexical_stage: list[Correspondence] = []
    if thesaurus is not None:
        covered = {(c.left.iri, c.right.iri) for c in string_stage}
        lexical_stage = lexical_correspondences(o1, o2, translations, cfg, thesaurus, covered)
    structural_stage: list[Correspondence] = []
    if cfg.structure_enabled:
        seed = greedy_one_to_one(string_stage + lexical_stage)
        structural_stage = structural_correspondences(o1, o2, translations, cfg, seed)
    return greedy_one_to_one(string_stage + lexical_stage + structural_stage)


def write_alignment(alignment: Alignment, path: str | Path) -> None:
    """TSV rows `left<TAB>right<TAB>score` with 4-decimal scores, sorted
    by left IRI."""
    lines = [
        f"{c.left.iri}\t{c.right.iri}\t{c.score:.4f}"
        for c in sorted(alignment, key=lambda c: c.left.iri)
    ]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def read_alignment(
    path: str | Path,
    o1: Optional[Ontology] = None,
    o2: Optional[Ontology] = None,
) -> Alignment:
    """Read an alignment TSV back.

    With ontologies given, IRIs must resolve and entities keep their
    kinds; without them, bare EntityIds with kind None are built, which
    is all evaluation needs.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise AlignmentFormatError(f"cannot read alignment {path}: {exc}") from exc
    correspondences = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != 3:
            raise AlignmentFormatError(
                f"{path.name}:{line_no}: expected 3 columns, got {len(cells)}"
            )
        left_iri, right_iri, score_text = cells
        try:
            score = float(score_text)
        except ValueError:
            raise AlignmentFormatError(
                f"{path.name}:{line_no}: score is not a number: {score_text!r}"
            ) from None
        if not 0.0 <= score <= 1.0:
            raise AlignmentFormatError(
                f"{path.name}:{line_no}: score out of range: {score_text}"
            )
        if o1 is not None:
            left = o1.entity(left_iri)
        else:
            left = EntityId(left_iri, None)
        if o2 is not None:
            right = o2.entity(right_iri)
        else:
            right = EntityId(right_iri, None)
        correspondences.append(Correspondence(left, right, score))
    return Alignment(correspondences)
