# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
LLM judge and short-answer normalization.
"""
import logging

from gwqa.analysis.prompts.builder import build_judge_prompt
from gwqa.analysis.prompts.builder import build_normalize_prompt
from gwqa.core.llm.gateway import ChatRequest

logger = logging.getLogger(__name__)

JUDGE_TEMPERATURE = 0.0


def judge_request(pred, golds, question, model):
    bundle = build_judge_prompt(question, golds, pred)

    return ChatRequest(bundle, model, JUDGE_TEMPERATURE)


def parse_verdict(text):
    """Return True if the first token of a judge reply is "yes".
    """
    tokens = (text or "").split()

    if not tokens:
        return False

    return tokens[0].strip(".,;:!?\"'*").lower() == "yes"


def judge_equivalence(gateway, pred, golds, question, model):
    """Ask the judge model whether a prediction is semantically equivalent to
    the gold answers. Gateway errors propagate.
    """
    response = gateway.complete(judge_request(pred, golds, question, model))

    verdict = parse_verdict(response.text)

    logger.debug("Judge says %r for %r vs %r", verdict, pred, golds)

    return verdict


def normalize_request(question, answer, model):
    bundle = build_normalize_prompt(question, answer)

    return ChatRequest(bundle, model, JUDGE_TEMPERATURE)


def parse_normalized(text, original):
    """Return the short answer of a normalization reply, or the original
    answer when the reply is empty.
    """
    lines = [line.strip() for line in (text or "").splitlines() if line.strip()]

    if not lines:
        return original

    return lines[0]


def normalize_answer(gateway, question, answer, model):
    """Rewrite a verbose answer to a short span.
    """
    response = gateway.complete(normalize_request(question, answer, model))

    return parse_normalized(response.text, answer)
