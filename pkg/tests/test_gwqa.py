# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

import json
import os
import shutil
import tempfile
import unittest

from gwqa import GWQA
from gwqa.analysis.pipeline import UsageError
from gwqa.gwqa import create_counter
from gwqa.gwqa import create_gateway
from tests.fixtures import write_graph_dir
from tests.fixtures import write_jsonl


class GWQATests(unittest.TestCase):

    def setUp(self):
        self._dir = tempfile.mkdtemp()

        entities = []
        relationships = []
        chunks = []
        contexts = []
        questions = []

        for q in range(3):
            a, b = "H{}".format(q), "R{}".format(q)
            harbor, river = "Harbor{}".format(q), "River{}".format(q)

            entities += [
                {"id": a, "name": harbor, "description": "a harbor"},
                {"id": b, "name": river, "description": "a river"},
            ]
            relationships.append({"source": a, "target": b, "predicate": "drains", "description": "drains into"})
            chunks.append({"id": "c{}".format(q), "text": "{} drains into {}.".format(harbor, river),
                           "entities": [a, b]})

            contexts.append({
                "question_id": "q{}".format(q),
                "entities": [{"id": a, "text": "{} is a harbor.".format(harbor)}],
                "relationships": [{"source": a, "target": b, "text": "{} drains into {}.".format(harbor, river)}],
                "reports": ["A report."],
                "chunks": [{"id": "c{}".format(q), "text": "{} drains into {}.".format(harbor, river)}],
            })
            questions.append({"id": "q{}".format(q), "text": "Where does {} drain?".format(harbor),
                              "answers": [river], "type": "bridge", "hops": 2})

        write_graph_dir(self._dir, entities, relationships, chunks)

        self._contexts_path = os.path.join(self._dir, "contexts.jsonl")
        self._questions_path = os.path.join(self._dir, "questions.jsonl")

        write_jsonl(self._contexts_path, contexts)
        write_jsonl(self._questions_path, questions)

        self._gwqa = GWQA(self._dir)
        self._gwqa.load_contexts(self._contexts_path)
        self._gwqa.load_questions(self._questions_path)

    def tearDown(self):
        shutil.rmtree(self._dir)

    def test_load(self):
        self.assertEqual(len(self._gwqa.questions), 3)
        self.assertEqual(sorted(self._gwqa.contexts), ["q0", "q1", "q2"])
        self.assertEqual(self._gwqa.question("q1").gold_answers, ("River1",))

        with self.assertRaises(KeyError):
            self._gwqa.question("q9")

    def test_seeds_and_walk(self):
        walk = self._gwqa.walk_config()

        [seed] = self._gwqa.seeds("Where does Harbor0 drain?")

        self.assertEqual(seed.entity_id, "H0")
        self.assertEqual(self._gwqa.walk("Where does Harbor0 drain?", walk).distances, {"H0": 0, "R0": 1})
        self.assertIsNone(self._gwqa.walk("Where does nothing drain?", walk))

    def test_compress_all(self):
        seen = []

        results = self._gwqa.compress_all(self._gwqa.walk_config(), callback=lambda q, c: seen.append(q.id))

        self.assertEqual(seen, ["q0", "q1", "q2"])
        self.assertEqual(len(results), 3)
        self.assertIn("River0", results[0].rendered)

    def test_render_walk(self):
        filename = os.path.join(self._dir, "walk")

        self.assertTrue(self._gwqa.render_walk(self._gwqa.question("q0"), self._gwqa.walk_config(), filename))
        self.assertTrue(os.path.isfile(filename + ".dot"))

    def test_run_without_gateway(self):
        with self.assertRaises(UsageError):
            self._gwqa.run(["baseline"], "m", self._gwqa.walk_config(), 3, 42)

    def test_run_and_report(self):
        self._gwqa.set_gateway(create_gateway(counter=self._gwqa.counter))

        records = self._gwqa.run(["baseline", "sparql_gw"], "m", self._gwqa.walk_config(), 3, 42)

        self.assertEqual(len(records), 6)

        # The default stub reply abstains, so the judge is never called.
        for record in records:
            self.assertTrue(record.parsed.abstained)
            self.assertFalse(record.correct)

        self.assertEqual(self._gwqa.costs["baseline"]["calls"], 3)
        self.assertEqual(self._gwqa.costs["sparql_gw"]["calls"], 3)

        report, paths = self._gwqa.report(records, os.path.join(self._dir, "out"))

        self.assertEqual(report.labels["baseline"]["all"]["n"], 3)
        self.assertTrue(os.path.isfile(paths["markdown"]))

        rescored = self._gwqa.score(records)

        self.assertEqual([r.correct for r in rescored], [r.correct for r in records])

    def test_dump_prompts(self):
        path = os.path.join(self._dir, "prompts.jsonl")

        self._gwqa.dump_prompts(["baseline", "routing"], self._gwqa.questions, self._gwqa.walk_config(), path)

        with open(path) as f:
            entries = [json.loads(line) for line in f]

        self.assertEqual(len(entries), 6)
        self.assertEqual(entries[0]["question_id"], "baseline/q0")
        self.assertEqual(entries[3]["variant"], "router")

    def test_unknown_tokenizer(self):
        with self.assertRaises(UsageError):
            create_counter("words")

    def test_unknown_provider(self):
        with self.assertRaises(UsageError):
            create_gateway("carrier-pigeon")


def main():
    unittest.main()


if __name__ == '__main__':
    main()
