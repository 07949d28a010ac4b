# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
Model Output Parsing.

    extract_answer : the text after the LAST `FINAL ANSWER:` marker, up to the
                     end of that line; "I don't know" is an abstention
    parse_route    : bridge | comparison | inference, bridge on anything else

"""
import re
import unicodedata

from dataclasses import dataclass

from gwqa.analysis.walk.seeds import segment

ROUTE_BRIDGE = "bridge"
ROUTE_COMPARISON = "comparison"
ROUTE_INFERENCE = "inference"

ROUTE_LABELS = (ROUTE_BRIDGE, ROUTE_COMPARISON, ROUTE_INFERENCE)

DEFAULT_ROUTE = ROUTE_BRIDGE

ABSTENTION_PHRASES = ("i dont know", "i do not know")

_MARKER_RE = re.compile(r"final\s+answer\s*:", re.IGNORECASE)


@dataclass(frozen=True)
class ParsedAnswer:
    final: str
    abstained: bool
    raw: str

    @property
    def extraction_failed(self):
        return self.final is None and not self.abstained

    def to_dict(self):
        return {
            "final": self.final,
            "abstained": self.abstained,
            "extraction_failed": self.extraction_failed,
            "raw": self.raw,
        }

    @classmethod
    def from_dict(cls, record):
        return cls(record.get("final"), bool(record.get("abstained", False)), record.get("raw", ""))


def _strip_punctuation(text):
    return "".join(ch for ch in text if not unicodedata.category(ch).startswith("P"))


def is_abstention(text):
    """Tell whether an extracted answer is an abstention phrase.
    """
    normalized = " ".join(_strip_punctuation(text.lower()).split())

    return any(normalized.startswith(phrase) for phrase in ABSTENTION_PHRASES)


def extract_answer(raw):
    """Extract the final answer from a model response.
    """
    raw = raw or ""

    markers = list(_MARKER_RE.finditer(raw))

    if not markers:
        return ParsedAnswer(None, False, raw)

    remainder = raw[markers[-1].end():].split("\n", 1)[0]

    # Tolerate markdown emphasis around the answer.
    answer = remainder.strip().strip("*").strip()

    if not answer:
        return ParsedAnswer(None, False, raw)

    if is_abstention(answer):
        return ParsedAnswer(None, True, raw)

    return ParsedAnswer(answer, False, raw)


def parse_route(raw):
    """Parse the classifier reply into a route label.
    """
    for word in segment((raw or "").strip()):
        if word in ROUTE_LABELS:
            return word

    return DEFAULT_ROUTE
