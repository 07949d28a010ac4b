# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
Seed Entity Matching.

Anchors question entities in the knowledge graph with three string
heuristics, in priority order:

    exact      : the entity name is a case-insensitive substring of the question
    multi_word : every content word of a multi-word entity name is a question word
    partial    : a question word (>= 5 chars, not a stop word) is a substring of
                 the entity name

An entity is reported once, under the first heuristic that fires.

"""
import logging
import os
import re

from dataclasses import dataclass

logger = logging.getLogger(__name__)

SEED_EXACT = "exact"
SEED_MULTI_WORD = "multi_word"
SEED_PARTIAL = "partial"

SEED_HEURISTICS = (SEED_EXACT, SEED_MULTI_WORD, SEED_PARTIAL)

MIN_CONTENT_WORD_LENGTH = 2
MIN_PARTIAL_WORD_LENGTH = 5

DEFAULT_STOPWORDS_PATH = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))),
    "data", "stopwords.txt")

_WORD_RE = re.compile(r"[^\W_]+")


@dataclass(frozen=True)
class SeedMatch:
    entity_id: str
    heuristic: str
    matched_span: str


class StopWordPolicy(object):

    """Stop-word set used for content-word extraction.
    """

    def __init__(self, words):
        words = frozenset(w.strip().lower() for w in words if w.strip())

        if not words:
            raise ValueError("stop-word set must not be empty")

        self._words = words

    @property
    def words(self):
        return self._words

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="utf-8") as f:
            words = [line for line in f if not line.startswith("#")]

        return cls(words)

    @classmethod
    def default(cls):
        return cls.from_file(DEFAULT_STOPWORDS_PATH)

    def is_stop_word(self, word):
        return word.lower() in self._words

    def content_words(self, text):
        """Return the content words of text, in order, without duplicates.
        """
        words = []

        for word in segment(text):
            if len(word) < MIN_CONTENT_WORD_LENGTH or word in self._words:
                continue

            if word not in words:
                words.append(word)

        return words

    def __contains__(self, word):
        return self.is_stop_word(word)


def segment(text):
    """Split text on whitespace and punctuation into lowercase words.
    """
    return _WORD_RE.findall(text.lower())


def _match_exact(question, question_lower, name):
    index = question_lower.find(name.lower())

    if index < 0:
        return None

    # Slice the original text when lowercasing kept the offsets.
    if len(question_lower) == len(question):
        return question[index:index + len(name)]

    return name


def _match_multi_word(question_words, name, policy):
    content = policy.content_words(name)

    if len(content) < 2:
        return None

    if all(word in question_words for word in content):
        return name

    return None


def _match_partial(candidates, name):
    name_lower = name.lower()

    for word in candidates:
        if word in name_lower:
            return word

    return None


def match_seeds(question, graph, policy):
    """Return the seed matches of a question, in heuristic priority order.
    """
    if not question:
        raise ValueError("question must not be empty")

    question_lower = question.lower()
    question_words = set(segment(question))

    partial_candidates = [
        word for word in segment(question)
        if len(word) >= MIN_PARTIAL_WORD_LENGTH and word not in policy.words
    ]

    matches = dict((heuristic, []) for heuristic in SEED_HEURISTICS)

    for entity_id in sorted(graph.entities):
        name = graph.entities[entity_id].name

        span = _match_exact(question, question_lower, name)

        if span:
            matches[SEED_EXACT].append(SeedMatch(entity_id, SEED_EXACT, span))
            continue

        span = _match_multi_word(question_words, name, policy)

        if span:
            matches[SEED_MULTI_WORD].append(SeedMatch(entity_id, SEED_MULTI_WORD, span))
            continue

        span = _match_partial(partial_candidates, name)

        if span:
            matches[SEED_PARTIAL].append(SeedMatch(entity_id, SEED_PARTIAL, span))

    seeds = [m for heuristic in SEED_HEURISTICS for m in matches[heuristic]]

    for m in seeds:
        logger.debug("Seed %s (%s): %r", m.entity_id, m.heuristic, m.matched_span)

    return seeds
