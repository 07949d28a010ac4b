# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

import unittest

from gwqa.analysis.prompts import ParsedAnswer
from gwqa.analysis.prompts import extract_answer
from gwqa.analysis.prompts import parse_route

ABSTAINED = object()
FAILED = object()

# raw response -> final answer (or ABSTAINED / FAILED)
ANSWER_CASES = [
    ("Step 3: FINAL ANSWER: Snake River", "Snake River"),
    ("FINAL ANSWER: I don't know", ABSTAINED),
    ("The answer is Paris.", FAILED),
    ("FINAL ANSWER: London\nFINAL ANSWER: Paris", "Paris"),
    ("final answer: paris", "paris"),
    ("Final Answer:   Rome  ", "Rome"),
    ("FINAL ANSWER: **Berlin**", "Berlin"),
    ("FINAL ANSWER:", FAILED),
    ("FINAL ANSWER: I do not know.", ABSTAINED),
    ("FINAL ANSWER: I don’t know", ABSTAINED),
    ("FINAL ANSWER: i DON'T KNOW the answer", ABSTAINED),
    ("FINAL ANSWER: Madrid\nExplanation: it is the capital", "Madrid"),
    ("", FAILED),
    ("FINAL  ANSWER : Oslo", "Oslo"),
    ("FINAL ANSWER: I don't know\nFINAL ANSWER: Lima", "Lima"),
    ("FINAL ANSWER: Lima\nFINAL ANSWER: I don't know", ABSTAINED),
    ("FINALANSWER: Quito", FAILED),
    ("FINAL ANSWER: 1984", "1984"),
    ("Step 1: SELECT ?answer WHERE { ?x name \"A\" }\nFINAL ANSWER: Snake River.", "Snake River."),
    ("FINAL ANSWER: Unknown", "Unknown"),
    ("FINAL ANSWER: I know", "I know"),
    ("FINAL ANSWER: I dont know", ABSTAINED),
    ("FINAL ANSWER: \n Paris", FAILED),
    ("FINAL ANSWER: cannot be determined", "cannot be determined"),
]

# raw classifier reply -> route
ROUTE_CASES = [
    ("comparison", "comparison"),
    ("Bridge.", "bridge"),
    ("banana", "bridge"),
    ("INFERENCE", "inference"),
    ("  comparison\n", "comparison"),
    ("", "bridge"),
    ("The answer: inference", "inference"),
    ("comparisons", "bridge"),
]


class ExtractAnswerTests(unittest.TestCase):

    def test_cases(self):
        for raw, expected in ANSWER_CASES:
            parsed = extract_answer(raw)

            self.assertEqual(parsed.raw, raw)

            if expected is ABSTAINED:
                self.assertTrue(parsed.abstained, raw)
                self.assertIsNone(parsed.final, raw)
                self.assertFalse(parsed.extraction_failed, raw)
            elif expected is FAILED:
                self.assertFalse(parsed.abstained, raw)
                self.assertIsNone(parsed.final, raw)
                self.assertTrue(parsed.extraction_failed, raw)
            else:
                self.assertFalse(parsed.abstained, raw)
                self.assertEqual(parsed.final, expected, raw)

    def test_none(self):
        self.assertTrue(extract_answer(None).extraction_failed)

    def test_dict_round_trip(self):
        parsed = extract_answer("FINAL ANSWER: Paris")

        self.assertEqual(ParsedAnswer.from_dict(parsed.to_dict()), parsed)


class ParseRouteTests(unittest.TestCase):

    def test_cases(self):
        for raw, expected in ROUTE_CASES:
            self.assertEqual(parse_route(raw), expected, raw)

    def test_none(self):
        self.assertEqual(parse_route(None), "bridge")


def main():
    unittest.main()


if __name__ == '__main__':
    main()
