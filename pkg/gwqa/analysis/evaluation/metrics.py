# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
Answer Metrics.

SQuAD-style normalization (lowercase, drop punctuation, drop the articles
a/an/the, collapse whitespace) followed by:

    exact_match     : normalized strings are equal
    token_f1        : F1 over the token multisets
    heuristic_match : equality, substring (either way) or equal last token
    coverage        : a gold answer is a substring of the context

Every function that takes a list of gold answers succeeds if any gold does.

Note that the last-token rule of `heuristic_match` accepts answers that
only share a final word ("John Smith" vs "Jane Smith").

"""
import re
import string

from collections import Counter
from fractions import Fraction

_ARTICLES_RE = re.compile(r"\b(a|an|the)\b")

_PUNCTUATION = frozenset(string.punctuation)


def squad_normalize(text):
    """Normalize an answer string.
    """
    text = text.lower()
    text = "".join(ch for ch in text if ch not in _PUNCTUATION)
    text = _ARTICLES_RE.sub(" ", text)

    return " ".join(text.split())


def token_f1(pred, gold):
    """Return the token-level F1 between a prediction and a gold answer.
    """
    pred_tokens = squad_normalize(pred).split()
    gold_tokens = squad_normalize(gold).split()

    if not pred_tokens and not gold_tokens:
        return 1.0

    if not pred_tokens or not gold_tokens:
        return 0.0

    same = sum((Counter(pred_tokens) & Counter(gold_tokens)).values())

    # 2PR / (P + R) reduces to 2|common| / (|pred| + |gold|).
    return float(Fraction(2 * same, len(pred_tokens) + len(gold_tokens)))


def exact_match(pred, gold):
    return squad_normalize(pred) == squad_normalize(gold)


def max_token_f1(pred, golds):
    return max(token_f1(pred, gold) for gold in golds)


def max_exact_match(pred, golds):
    return any(exact_match(pred, gold) for gold in golds)


def _heuristic_match_one(pred, gold):
    if pred == gold:
        return True

    # An empty string is a substring of everything.
    if not pred or not gold:
        return False

    if pred in gold or gold in pred:
        return True

    return pred.split()[-1] == gold.split()[-1]


def heuristic_match(pred, golds):
    """Tell whether a prediction matches any gold answer by the string
    heuristics.
    """
    if not golds:
        raise ValueError("no gold answers")

    pred = squad_normalize(pred)

    return any(_heuristic_match_one(pred, squad_normalize(gold)) for gold in golds)


def coverage(ctx_text, golds):
    """Tell whether any gold answer appears in the context text.
    """
    if not golds:
        raise ValueError("no gold answers")

    text = squad_normalize(ctx_text)

    for gold in golds:
        gold = squad_normalize(gold)

        if gold and gold in text:
            return True

    return False
