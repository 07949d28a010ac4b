# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
Retrieved Context Model.

A retrieved context has four sections. `render_context` is the only place
where a context becomes prompt text, so prompts, fallback output and token
accounting agree byte for byte.

Rendering
---------

    -- Entities --
    <entity text>
    ...

    -- Relationships --
    <relationship text>
    ...

    -- Reports --
    <report text>

    -- Sources --
    <chunk text>

Empty sections are left out.

"""
import json
import logging

from dataclasses import dataclass
from dataclasses import field

logger = logging.getLogger(__name__)

QUESTION_TYPES = (
    "bridge",
    "comparison",
    "inference",
    "compositional",
    "bridge_comparison",
)

MIN_HOPS = 2
MAX_HOPS = 4

ENTITIES_HEADER = "-- Entities --"
RELATIONSHIPS_HEADER = "-- Relationships --"
REPORTS_HEADER = "-- Reports --"
SOURCES_HEADER = "-- Sources --"

SECTION_SEPARATOR = "\n\n"
ITEM_SEPARATOR = "\n"


class ContextParseError(Exception):

    def __init__(self, path, line, reason):
        super(ContextParseError, self).__init__(
            "{}:{}: {}".format(path, line, reason))

        self.path = path
        self.line = line


class ContextValidationError(Exception):
    pass


@dataclass(frozen=True)
class QuestionRecord:
    id: str
    text: str
    gold_answers: tuple
    qtype: str = None
    hops: int = None

    def __post_init__(self):
        if not self.gold_answers:
            raise ContextValidationError("question {}: no gold answers".format(self.id))

        if self.hops is not None and not MIN_HOPS <= self.hops <= MAX_HOPS:
            raise ContextValidationError("question {}: hops {} out of range".format(self.id, self.hops))


@dataclass(frozen=True)
class RetrievedContext:
    question_id: str
    entity_descriptions: tuple = field(default_factory=tuple)
    relationship_descriptions: tuple = field(default_factory=tuple)
    community_reports: tuple = field(default_factory=tuple)
    text_chunks: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.is_empty():
            raise ContextValidationError("context {} is empty".format(self.question_id))

    def is_empty(self):
        return not (self.entity_descriptions or self.relationship_descriptions or
                    self.community_reports or self.text_chunks)

    def referenced_entities(self):
        ids = set(entity_id for entity_id, _ in self.entity_descriptions)

        for source, target, _ in self.relationship_descriptions:
            ids.add(source)
            ids.add(target)

        return ids

    def referenced_chunks(self):
        return set(chunk_id for chunk_id, _ in self.text_chunks)


# Rendering
# ============================================================================ #
def render_block(header, items):
    return header + ITEM_SEPARATOR + ITEM_SEPARATOR.join(items)


def render_context(ctx):
    """Render a retrieved context as prompt text.
    """
    sections = [
        (ENTITIES_HEADER, [text for _, text in ctx.entity_descriptions]),
        (RELATIONSHIPS_HEADER, [text for _, _, text in ctx.relationship_descriptions]),
        (REPORTS_HEADER, list(ctx.community_reports)),
        (SOURCES_HEADER, [text for _, text in ctx.text_chunks]),
    ]

    return SECTION_SEPARATOR.join(render_block(header, items) for header, items in sections if items)


# Parsing
# ============================================================================ #
def _context_from_record(record):
    return RetrievedContext(
        question_id=str(record["question_id"]),
        entity_descriptions=tuple(
            (str(e["id"]), str(e["text"])) for e in record.get("entities", [])
        ),
        relationship_descriptions=tuple(
            (str(r["source"]), str(r["target"]), str(r["text"])) for r in record.get("relationships", [])
        ),
        community_reports=tuple(str(r) for r in record.get("reports", [])),
        text_chunks=tuple(
            (str(c["id"]), str(c["text"])) for c in record.get("chunks", [])
        ),
    )


def _read_records(path):
    """Yield (line number, record) for every non-blank line of a JSONL file.
    """
    with open(path, "rb") as f:
        for lineno, raw in enumerate(f, 1):
            try:
                line = raw.decode("utf-8").strip()
            except UnicodeDecodeError as e:
                raise ContextParseError(path, lineno, "invalid UTF-8 ({})".format(e))

            if not line:
                continue

            try:
                record = json.loads(line)
            except ValueError as e:
                raise ContextParseError(path, lineno, "invalid JSON ({})".format(e))

            if not isinstance(record, dict):
                raise ContextParseError(path, lineno, "expected a JSON object")

            yield lineno, record


def parse_context(path, graph=None):
    """Parse a contexts.jsonl file.

    When `graph` is given, every referenced entity and chunk id must resolve
    against it.
    """
    contexts = []

    for lineno, record in _read_records(path):
        if "question_id" not in record:
            raise ContextParseError(path, lineno, "missing key 'question_id'")

        try:
            ctx = _context_from_record(record)
        except (KeyError, TypeError) as e:
            raise ContextParseError(path, lineno, "malformed section item ({})".format(e))
        except ContextValidationError as e:
            raise ContextValidationError("{}:{}: {}".format(path, lineno, e))

        if graph is not None:
            validate_context(ctx, graph)

        contexts.append(ctx)

    logger.info("Loaded %d contexts from %s", len(contexts), path)

    return contexts


def validate_context(ctx, graph):
    """Check that a context only references ids known to the graph.
    """
    unknown = set(e for e in ctx.referenced_entities() if e not in graph.entities)
    unknown |= set(c for c in ctx.referenced_chunks() if c not in graph.chunks)

    if unknown:
        raise ContextValidationError("context {} references unknown ids: {}".format(
            ctx.question_id, ", ".join(sorted(unknown))))


def serialize_context(ctx):
    """Return the contexts.jsonl line of a context.
    """
    record = {
        "question_id": ctx.question_id,
        "entities": [{"id": i, "text": t} for i, t in ctx.entity_descriptions],
        "relationships": [{"source": s, "target": d, "text": t} for s, d, t in ctx.relationship_descriptions],
        "reports": list(ctx.community_reports),
        "chunks": [{"id": i, "text": t} for i, t in ctx.text_chunks],
    }

    return json.dumps(record, ensure_ascii=False)


def parse_questions(path):
    """Parse a questions.jsonl file.
    """
    questions = []

    for lineno, record in _read_records(path):
        for key in ("id", "text", "answers"):
            if key not in record:
                raise ContextParseError(path, lineno, "missing key '{}'".format(key))

        answers = record["answers"]

        if isinstance(answers, str):
            answers = [answers]

        if not isinstance(answers, list):
            raise ContextParseError(path, lineno, "answers must be a string or a list")

        qtype = record.get("type")

        if qtype is not None and qtype not in QUESTION_TYPES:
            raise ContextParseError(path, lineno, "unknown question type '{}'".format(qtype))

        hops = record.get("hops")

        if hops is not None:
            try:
                hops = int(hops)
            except (TypeError, ValueError):
                raise ContextParseError(path, lineno, "hops must be an integer, got {!r}".format(hops))

        try:
            questions.append(QuestionRecord(
                id=str(record["id"]),
                text=str(record["text"]),
                gold_answers=tuple(str(a) for a in answers),
                qtype=qtype,
                hops=hops,
            ))
        except ContextValidationError as e:
            raise ContextParseError(path, lineno, str(e))

    logger.info("Loaded %d questions from %s", len(questions), path)

    return questions
