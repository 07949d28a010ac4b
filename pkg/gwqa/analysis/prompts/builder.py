# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
Prompt Builder.

Templates live in the `templates` directory as text resources with
`{context}` / `{question}` (and, for the judge, `{gold}` / `{answer}`)
slots. Slots are filled in a single pass, so slot markers inside a filled
value are left untouched.

Variants
--------

    baseline    : direct answer
    sparql_cot  : SPARQL triple-pattern decomposition, then FINAL ANSWER
    generic_cot : natural-language sub-questions, then FINAL ANSWER
    router      : question-type classifier (bridge | comparison | inference)

"""
import json
import logging
import os
import re

from dataclasses import dataclass
from functools import lru_cache

logger = logging.getLogger(__name__)

VARIANT_BASELINE = "baseline"
VARIANT_SPARQL_COT = "sparql_cot"
VARIANT_GENERIC_COT = "generic_cot"
VARIANT_ROUTER = "router"
VARIANT_JUDGE = "judge"
VARIANT_NORMALIZE = "normalize"

QA_VARIANTS = (VARIANT_BASELINE, VARIANT_SPARQL_COT, VARIANT_GENERIC_COT)

QA_MAX_OUTPUT_TOKENS = 512
ROUTER_MAX_OUTPUT_TOKENS = 5
JUDGE_MAX_OUTPUT_TOKENS = 3
NORMALIZE_MAX_OUTPUT_TOKENS = 32

TEMPLATES_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "templates")

_SLOT_RE = re.compile(r"\{(context|question|gold|answer)\}")


class PromptUsageError(ValueError):
    pass


@dataclass(frozen=True)
class PromptBundle:
    system: str
    user: str
    variant: str
    max_output_tokens: int

    def messages(self):
        """Return the chat messages of the prompt.
        """
        messages = []

        if self.system:
            messages.append({"role": "system", "content": self.system})

        messages.append({"role": "user", "content": self.user})

        return messages


@lru_cache(maxsize=None)
def load_template(name):
    """Load a template resource by name.
    """
    with open(os.path.join(TEMPLATES_DIR, name + ".txt"), "r", encoding="utf-8") as f:
        return f.read().rstrip("\n")


def fill_template(template, **slots):
    """Fill the slots of a template in a single pass.
    """
    def replace(match):
        name = match.group(1)

        if name not in slots:
            return match.group(0)

        return slots[name]

    return _SLOT_RE.sub(replace, template)


def build_qa_prompt(variant, context_text, question):
    """Build a question-answering prompt.
    """
    if variant not in QA_VARIANTS:
        raise PromptUsageError("unknown QA prompt variant: {}".format(variant))

    if not context_text:
        raise PromptUsageError("context must not be empty")

    user = fill_template(load_template(variant), context=context_text, question=question)

    return PromptBundle(load_template("system"), user, variant, QA_MAX_OUTPUT_TOKENS)


def build_router_prompt(question):
    """Build the question-type classifier prompt.
    """
    if not question:
        raise PromptUsageError("question must not be empty")

    user = fill_template(load_template(VARIANT_ROUTER), question=question)

    return PromptBundle("", user, VARIANT_ROUTER, ROUTER_MAX_OUTPUT_TOKENS)


def build_judge_prompt(question, golds, answer):
    """Build the semantic-equivalence judge prompt.
    """
    user = fill_template(load_template(VARIANT_JUDGE), question=question,
                         gold=" / ".join(golds), answer=answer)

    return PromptBundle("", user, VARIANT_JUDGE, JUDGE_MAX_OUTPUT_TOKENS)


def build_normalize_prompt(question, answer):
    """Build the prompt that rewrites a verbose answer to a short span.
    """
    user = fill_template(load_template(VARIANT_NORMALIZE), question=question, answer=answer)

    return PromptBundle("", user, VARIANT_NORMALIZE, NORMALIZE_MAX_OUTPUT_TOKENS)


def dump_prompts(entries, path):
    """Write (question id, bundle) pairs to a JSONL file for audit.
    """
    with open(path, "w", encoding="utf-8") as f:
        for question_id, bundle in entries:
            record = {
                "question_id": question_id,
                "variant": bundle.variant,
                "system": bundle.system,
                "user": bundle.user,
                "max_output_tokens": bundle.max_output_tokens,
            }

            f.write(json.dumps(record, ensure_ascii=False) + "\n")

    logger.info("Dumped prompts to %s", path)
