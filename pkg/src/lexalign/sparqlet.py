"""Parser and evaluator for a small SPARQL subset.

Grammar (whitespace and newline insensitive):

    query  := "SELECT" var+ "WHERE" "{" group ("." group)* "."? "}" ("LIMIT" INT)?
    group  := subject pv (";" pv)*
    pv     := predicate object
    subject, object := var | prefixedName | literal   (subject never literal)
    predicate       := var | prefixedName
    var    := "?" NAME
    prefixedName := NAME ":" NAME
    literal := '"' chars '"'

Predicate-object lists introduced by ";" are expanded into full triple
patterns sharing the group subject. Evaluation is a natural join over
shared variables with set semantics on full bindings; rows are sorted
lexicographically by cell before LIMIT is applied, so results are
deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import LexalignError
from .triplemap import (
    DEFAULT_PREFIXES,
    Literal,
    PrefixedName,
    Term,
    TripleStore,
    Variable,
    render,
)


class QueryParseError(LexalignError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class TriplePattern:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if isinstance(self.predicate, Literal):
            raise LexalignError("triple pattern predicate must not be a literal")
        if isinstance(self.subject, Literal):
            raise LexalignError("triple pattern subject must not be a literal")


@dataclass(frozen=True)
class Query:
    select_vars: tuple[Variable, ...]
    patterns: tuple[TriplePattern, ...]
    limit: Optional[int] = None


@dataclass
class ResultTable:
    header: list[str]
    rows: list[tuple[str, ...]] = field(default_factory=list)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<pname>[A-Za-z_][A-Za-z0-9_]*:[A-Za-z_][A-Za-z0-9_]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<literal>"[^"]*")
  | (?P<punct>[{};.])
""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line = 1
    col = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QueryParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup or ""
        chunk = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], prefixes: dict[str, str]):
        self.tokens = tokens
        self.pos = 0
        self.prefixes = prefixes

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None) -> None:
        tok = tok or self.peek()
        raise QueryParseError(message, tok.line, tok.column)

    def expect_keyword(self, word: str) -> None:
        tok = self.next()
        if tok.kind != "name" or tok.text.upper() != word:
            self.fail(f"expected {word}", tok)

    def expect_punct(self, char: str) -> None:
        tok = self.next()
        if tok.kind != "punct" or tok.text != char:
            self.fail(f"expected {char!r}", tok)

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "name" and tok.text.upper() == word

    def at_punct(self, char: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text == char

    def parse_term(self, *, allow_literal: bool) -> Term:
        tok = self.next()
        if tok.kind == "var":
            return Variable(tok.text[1:])
        if tok.kind == "pname":
            prefix, local = tok.text.split(":", 1)
            if prefix not in self.prefixes:
                self.fail(f"unknown prefix: {prefix!r}", tok)
            return PrefixedName(prefix, local)
        if tok.kind == "literal":
            if not allow_literal:
                self.fail("literal not allowed here", tok)
            return Literal(tok.text[1:-1])
        self.fail("expected variable, prefixed name or literal", tok)
        raise AssertionError("unreachable")

    def parse_group(self) -> list[TriplePattern]:
        subject = self.parse_term(allow_literal=False)
        patterns = []
        while True:
            predicate = self.parse_term(allow_literal=False)
            obj = self.parse_term(allow_literal=True)
            patterns.append(TriplePattern(subject, predicate, obj))
            if self.at_punct(";"):
                self.next()
                continue
            break
        return patterns

    def parse_query(self) -> Query:
        self.expect_keyword("SELECT")
        select_vars = []
        while self.peek().kind == "var":
            select_vars.append(Variable(self.next().text[1:]))
        if not select_vars:
            self.fail("SELECT needs at least one variable")
        self.expect_keyword("WHERE")
        self.expect_punct("{")
        patterns: list[TriplePattern] = []
        while not self.at_punct("}"):
            where_tok = self.peek()
            if where_tok.kind == "eof":
                self.fail("unterminated WHERE block", where_tok)
            patterns.extend(self.parse_group())
            if self.at_punct("."):
                self.next()
            elif not self.at_punct("}"):
                self.fail("expected '.' or '}' after group")
        self.expect_punct("}")
        limit = None
        if self.at_keyword("LIMIT"):
            self.next()
            tok = self.next()
            if tok.kind != "int":
                self.fail("expected integer after LIMIT", tok)
            limit = int(tok.text)
            if limit <= 0:
                self.fail("LIMIT must be positive", tok)
        tok = self.peek()
        if tok.kind != "eof":
            self.fail("trailing input after query", tok)
        used = {
            term.name
            for p in patterns
            for term in (p.subject, p.predicate, p.object)
            if isinstance(term, Variable)
        }
        for var in select_vars:
            if var.name not in used:
                self.fail(f"select variable ?{var.name} not used in WHERE")
        return Query(tuple(select_vars), tuple(patterns), limit)


def parse_query(text: str, prefixes: dict[str, str] | None = None) -> Query:
    """Parse `text`; prefixed names are checked against `prefixes`
    (default: the wikpa binding). Errors carry line and column."""
    parser = _Parser(_tokenize(text), DEFAULT_PREFIXES if prefixes is None else prefixes)
    return parser.parse_query()


def print_query(query: Query) -> str:
    """Canonical one-pattern-per-group rendering; parse(print(q)) == q."""
    parts = ["SELECT"]
    parts.extend(f"?{v.name}" for v in query.select_vars)
    parts.append("WHERE {")
    for p in query.patterns:
        parts.append(f"{_print_term(p.subject)} {_print_term(p.predicate)} {_print_term(p.object)} .")
    parts.append("}")
    if query.limit is not None:
        parts.append(f"LIMIT {query.limit}")
    return " ".join(parts)


def _print_term(term: Term) -> str:
    if isinstance(term, Literal):
        return f'"{term.text}"'
    return render(term)


def _bound_count(pattern: TriplePattern) -> int:
    return sum(
        not isinstance(t, Variable) for t in (pattern.subject, pattern.predicate, pattern.object)
    )


def plan_order(query: Query, store: TripleStore | None = None) -> list[TriplePattern]:
    """Patterns reordered by ascending estimated match count.

    More bound terms first; ties broken by the actual index cardinality
    when a store is given, then by original position (stable). Any order
    evaluates to the same result; this one just starts from the most
    selective patterns.
    """

    def cardinality(pattern: TriplePattern) -> int:
        if store is None:
            return 0
        args = [
            None if isinstance(t, Variable) else t
            for t in (pattern.subject, pattern.predicate, pattern.object)
        ]
        return store.count(*args)

    keyed = [
        (-_bound_count(p), cardinality(p), idx, p) for idx, p in enumerate(query.patterns)
    ]
    keyed.sort(key=lambda item: item[:3])
    return [p for _, _, _, p in keyed]


def _match_pattern(
    pattern: TriplePattern, binding: dict[str, Term], store: TripleStore
) -> list[dict[str, Term]]:
    def resolve(term: Term) -> Term | None:
        if isinstance(term, Variable):
            bound = binding.get(term.name)
            return bound
        return store.expand(term)

    s, p, o = resolve(pattern.subject), resolve(pattern.predicate), resolve(pattern.object)
    extensions = []
    for triple in store.lookup(s, p, o):
        ext = dict(binding)
        ok = True
        for term, value in (
            (pattern.subject, triple.subject),
            (pattern.predicate, triple.predicate),
            (pattern.object, triple.object),
        ):
            if isinstance(term, Variable):
                seen = ext.get(term.name)
                if seen is None:
                    ext[term.name] = value
                elif seen != value:
                    ok = False
                    break
        if ok:
            extensions.append(ext)
    return extensions


def evaluate(query: Query, store: TripleStore) -> ResultTable:
    """Solve the conjunctive pattern, project, sort rows, apply LIMIT."""
    solutions: list[dict[str, Term]] = [{}]
    for pattern in plan_order(query, store):
        next_solutions: list[dict[str, Term]] = []
        for binding in solutions:
            next_solutions.extend(_match_pattern(pattern, binding, store))
        solutions = next_solutions
        if not solutions:
            break

    distinct = {frozenset((k, v) for k, v in sol.items()): sol for sol in solutions}
    rows = [
        tuple(render(sol[v.name]) for v in query.select_vars) for sol in distinct.values()
    ]
    rows.sort()
    if query.limit is not None:
        rows = rows[: query.limit]
    return ResultTable(header=[v.name for v in query.select_vars], rows=rows)
