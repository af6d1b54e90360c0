"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from pathlib import Path

import pytest

from lexalign import dictstore, labelkit, ontomodel, taxsim, triplemap
from lexalign.sparqlet import Query, ResultTable, TriplePattern
from lexalign.strsim import SwScoring
from lexalign.triplemap import TripleStore, Variable, render

FIXTURES = Path(__file__).parent / "fixtures"

# the seven answers to the rain-cats-and-dogs translation query
IDIOM_ROWS = {
    ("cmn", "Mandarin", "傾盆大雨"),
    ("cs", "Czech", "lít jako z konve"),
    ("fr", "French", "pleuvoir des cordes"),
    ("fr", "French", "pleuvoir à verse"),
    ("fr", "French", "pleuvoir des hallebardes"),
    ("ru", "Russian", "лить как из ведра"),
    ("sv", "Swedish", "ösregna"),
}


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def idioms_store():
    return dictstore.ingest_tables(FIXTURES / "idioms_dict")


@pytest.fixture(scope="session")
def biblio_store():
    return dictstore.ingest_tables(FIXTURES / "biblio_dict")


@pytest.fixture(scope="session")
def idioms_triples(idioms_store):
    return triplemap.to_triples(idioms_store)


@pytest.fixture(scope="session")
def translation_query_text() -> str:
    return (FIXTURES / "translations_query.rq").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def onto_fr():
    return ontomodel.load_ontology_file(FIXTURES / "biblio_fr.nt")


@pytest.fixture(scope="session")
def onto_en():
    return ontomodel.load_ontology_file(FIXTURES / "biblio_en.nt")


@pytest.fixture(scope="session")
def thesaurus():
    return taxsim.load_thesaurus(FIXTURES / "mini_thesaurus_ic.tsv")


@pytest.fixture(scope="session")
def dict_translator(biblio_store):
    return labelkit.DictionaryTranslator(biblio_store)


class IdentityTranslator:
    """Test double: every word is its own translation."""

    def translate(self, word, from_lang, to_lang):
        return [word]


# --------------------------------------------------------------------------
# independent oracles


def brute_force_evaluate(query: Query, store: TripleStore) -> ResultTable:
    """Enumerate every assignment of the query's variables to store terms
    and keep those satisfying all patterns. Small stores only."""
    triples = store.lookup()
    facts = {(t.subject, t.predicate, t.object) for t in triples}
    terms = sorted(
        {t for tr in triples for t in (tr.subject, tr.predicate, tr.object)}, key=render
    )
    variables = sorted(
        {
            term.name
            for p in query.patterns
            for term in (p.subject, p.predicate, p.object)
            if isinstance(term, Variable)
        }
    )
    expanded = [
        tuple(store.expand(t) for t in (p.subject, p.predicate, p.object))
        for p in query.patterns
    ]

    rows = []
    for combo in itertools.product(terms, repeat=len(variables)):
        binding = dict(zip(variables, combo))
        ok = True
        for s, p, o in expanded:
            fact = (
                binding[s.name] if isinstance(s, Variable) else s,
                binding[p.name] if isinstance(p, Variable) else p,
                binding[o.name] if isinstance(o, Variable) else o,
            )
            if fact not in facts:
                ok = False
                break
        if ok:
            rows.append(tuple(render(binding[v.name]) for v in query.select_vars))
    rows.sort()
    if query.limit is not None:
        rows = rows[: query.limit]
    return ResultTable(header=[v.name for v in query.select_vars], rows=rows)


def random_query(store: TripleStore, rng: random.Random, max_patterns: int = 4) -> Query:
    """Build a satisfiable-looking conjunctive query by sampling triples
    and variable-izing positions from a three-name pool."""
    triples = store.lookup()
    pattern_count = rng.randint(1, max_patterns)
    pool = ["v0", "v1", "v2"]
    # mostly 1-2 variables; the all-assignments oracle is cubic in terms
    var_budget = rng.choice([1, 1, 2, 2, 2, 3])
    names = pool[:var_budget]
    patterns = []
    used_vars: set[str] = set()
    for _ in range(pattern_count):
        triple = rng.choice(triples)
        subject, predicate, obj = triple.subject, triple.predicate, triple.object
        positions = []
        if rng.random() < 0.7:
            positions.append("s")
        if rng.random() < 0.3:
            positions.append("p")
        if rng.random() < 0.5:
            positions.append("o")
        for pos in positions:
            name = rng.choice(names)
            used_vars.add(name)
            if pos == "s":
                subject = Variable(name)
            elif pos == "p":
                predicate = Variable(name)
            else:
                obj = Variable(name)
        patterns.append(TriplePattern(subject, predicate, obj))
    if not used_vars:
        # force at least one variable so SELECT has something to bind
        name = names[0]
        used_vars.add(name)
        first = patterns[0]
        patterns[0] = TriplePattern(Variable(name), first.predicate, first.object)
    select = [Variable(n) for n in sorted(used_vars)]
    rng.shuffle(select)
    select = select[: rng.randint(1, len(select))]
    limit = rng.choice([None, None, None, 2, 5])
    return Query(tuple(select), tuple(patterns), limit)


@lru_cache(maxsize=None)
def _global_alignment(a: str, b: str, scoring: SwScoring) -> int:
    """Plain recursive Needleman-Wunsch score of two whole strings."""
    if not a:
        return len(b) * scoring.gap
    if not b:
        return len(a) * scoring.gap
    sub = scoring.match if a[0] == b[0] else scoring.mismatch
    return max(
        sub + _global_alignment(a[1:], b[1:], scoring),
        scoring.gap + _global_alignment(a[1:], b, scoring),
        scoring.gap + _global_alignment(a, b[1:], scoring),
    )


def exhaustive_local_alignment(s1: str, s2: str, scoring: SwScoring) -> int:
    """Best global alignment over every pair of substrings; the slow but
    obviously-correct counterpart of the Smith-Waterman recurrence."""
    best = 0
    subs1 = {s1[i:j] for i in range(len(s1)) for j in range(i + 1, len(s1) + 1)}
    subs2 = {s2[i:j] for i in range(len(s2)) for j in range(i + 1, len(s2) + 1)}
    for a in subs1:
        for b in subs2:
            score = _global_alignment(a, b, scoring)
            if score > best:
                best = score
    return best


def all_strings(alphabet: str, max_len: int) -> list[str]:
    out = [""]
    for length in range(1, max_len + 1):
        out.extend("".join(chars) for chars in itertools.product(alphabet, repeat=length))
    return out
