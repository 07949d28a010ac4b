# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
SPARQL Scaffold Parser.

Finds and parses the query a model writes in Step 1 of the SPARQL CoT
prompt. The query is a reasoning scaffold and is never executed; the parse
is used to check that the model followed the template.

Grammar
-------

    query   : SELECT [DISTINCT] (?var+ | *) [WHERE] group
    group   : { (FILTER (...) | { query } | OPTIONAL group | triple)* }
    triple  : term term term [.]
    term    : ?var | <iri> | prefix:name | "literal" | number | name

Examples
--------

    * SELECT ?answer WHERE { ?x name "Paradise Creek" . ?x tributaryOf ?answer . }

    * select distinct ?y { ?x bornIn ?y }

"""
import logging

from dataclasses import dataclass

from pyparsing import alphanums
from pyparsing import alphas
from pyparsing import CaselessKeyword
from pyparsing import CharsNotIn
from pyparsing import Combine
from pyparsing import Forward
from pyparsing import Group
from pyparsing import Literal
from pyparsing import nestedExpr
from pyparsing import OneOrMore
from pyparsing import Optional
from pyparsing import ParseException
from pyparsing import QuotedString
from pyparsing import Regex
from pyparsing import Suppress
from pyparsing import Word
from pyparsing import ZeroOrMore

logger = logging.getLogger(__name__)

MAX_TRIPLE_PATTERNS = 4

TERM_VARIABLE = "variable"
TERM_IRI = "iri"
TERM_LITERAL = "literal"
TERM_NAME = "name"


@dataclass(frozen=True)
class SparqlTerm:
    kind: str
    text: str

    def __str__(self):
        if self.kind == TERM_LITERAL:
            return '"{}"'.format(self.text)

        return self.text


@dataclass(frozen=True)
class SparqlScaffold:
    text: str
    variables: tuple
    triples: tuple
    has_filter: bool
    has_subquery: bool
    uses_iris: bool

    @property
    def compliant(self):
        """Tell whether the query follows the template constraints.
        """
        return (0 < len(self.triples) <= MAX_TRIPLE_PATTERNS and
                not self.has_filter and not self.has_subquery and not self.uses_iris)

    def violations(self):
        violations = []

        if not self.triples:
            violations.append("no triple patterns")

        if len(self.triples) > MAX_TRIPLE_PATTERNS:
            violations.append("{} triple patterns".format(len(self.triples)))

        if self.has_filter:
            violations.append("FILTER")

        if self.has_subquery:
            violations.append("subquery")

        if self.uses_iris:
            violations.append("URIs")

        return violations


class _Filter(object):
    pass


class _Select(object):

    def __init__(self, variables, body):
        self.variables = variables
        self.body = body


class _SubQuery(object):

    def __init__(self, select):
        self.select = select


def _term(kind):
    def parse_term(string, location, tokens):
        return [SparqlTerm(kind, tokens[0])]

    return parse_term


def parse_triple(string, location, tokens):
    """Parse triple pattern.
    """
    return [tuple(tokens[0])]


def parse_select(string, location, tokens):
    """Parse select query.
    """
    variables = tuple(t.text for t in tokens.get("variables", []) if isinstance(t, SparqlTerm))

    return [_Select(variables, list(tokens.get("body", [])))]


# ============================================================================ #
select_kw = CaselessKeyword("SELECT")
where_kw = CaselessKeyword("WHERE")
filter_kw = CaselessKeyword("FILTER")
optional_kw = CaselessKeyword("OPTIONAL")
distinct_kw = CaselessKeyword("DISTINCT")

keyword = select_kw | where_kw | filter_kw | optional_kw | distinct_kw

variable = Combine(Literal("?") + Word(alphanums + "_")).setParseAction(_term(TERM_VARIABLE))
iri = Combine(Literal("<") + CharsNotIn(">\n") + Literal(">")).setParseAction(_term(TERM_IRI))
prefixed_name = Combine(
    Word(alphas, alphanums + "_-") + Literal(":") + Optional(Word(alphanums + "_-"))
).setParseAction(_term(TERM_IRI))
literal = (QuotedString('"', escChar="\\") | QuotedString("'", escChar="\\")).setParseAction(_term(TERM_LITERAL))
number = Regex(r"-?\d+(\.\d+)?(?![\w:])").setParseAction(_term(TERM_LITERAL))
name = (~keyword + Word(alphanums + "_-")).setParseAction(_term(TERM_NAME))

term = variable | iri | literal | prefixed_name | number | name

triple = (Group(term + term + term) + Suppress(Optional(Literal(".")))).setParseAction(parse_triple)

filter_clause = (filter_kw + nestedExpr("(", ")")).setParseAction(lambda s, l, t: [_Filter()])

query = Forward()
group = Forward()

subquery = (Suppress("{") + query + Suppress("}")).setParseAction(lambda s, l, t: [_SubQuery(t[0])])
optional_clause = Suppress(optional_kw) + group

group <<= Suppress("{") + ZeroOrMore(filter_clause | subquery | optional_clause | triple) + Suppress("}")

query <<= (
    Suppress(select_kw) +
    Suppress(Optional(distinct_kw)) +
    Group(OneOrMore(variable) | Literal("*"))("variables") +
    Suppress(Optional(where_kw)) +
    Group(group)("body")
).setParseAction(parse_select)


def _walk(select, state):
    for item in select.body:
        if isinstance(item, _Filter):
            state["filter"] = True
        elif isinstance(item, _SubQuery):
            state["subquery"] = True

            _walk(item.select, state)
        elif isinstance(item, tuple):
            state["triples"].append(item)


def parse_sparql_scaffold(raw):
    """Return the first SPARQL query found in a model response, or None.
    """
    if not raw:
        return None

    try:
        for tokens, start, end in query.scanString(raw):
            select = tokens[0]

            state = {"filter": False, "subquery": False, "triples": []}

            _walk(select, state)

            triples = tuple(state["triples"])

            return SparqlScaffold(
                text=raw[start:end],
                variables=select.variables,
                triples=triples,
                has_filter=state["filter"],
                has_subquery=state["subquery"],
                uses_iris=any(t.kind == TERM_IRI for triple in triples for t in triple),
            )
    except ParseException:
        logger.debug("Failed to parse SPARQL scaffold", exc_info=True)

    return None
