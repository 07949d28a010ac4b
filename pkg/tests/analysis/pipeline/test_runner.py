# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

import collections
import os
import re
import shutil
import tempfile
import unittest

from gwqa.analysis.evaluation import write_results
from gwqa.analysis.pipeline import PreflightError
from gwqa.analysis.pipeline import RoutingPolicy
from gwqa.analysis.pipeline import RunConfig
from gwqa.analysis.pipeline import UsageError
from gwqa.analysis.pipeline import emit_report
from gwqa.analysis.pipeline import run_config
from gwqa.analysis.pipeline import sample_questions
from gwqa.analysis.pipeline.runner import preflight
from gwqa.analysis.prompts import build_qa_prompt
from gwqa.analysis.walk import StopWordPolicy
from gwqa.analysis.walk import WalkConfig
from gwqa.analysis.walk import compress
from gwqa.core.context import ApproximateTokenCounter
from gwqa.core.llm import LlmGateway
from gwqa.core.llm import StubProvider
from tests.fixtures import pipeline_dataset

_QUESTION_RE = re.compile(r"Harbor(\d{3})")

ROUTES = ["bridge", "comparison", "banana"]


def scripted_reply(request):
    """Answer by question number q:

        q % 4 == 0 : correct answer
        q % 4 == 1 : wrong answer (the judge says no)
        q % 4 == 2 : abstains with SPARQL CoT, correct otherwise
        q % 4 == 3 : no FINAL ANSWER marker

    The router sends question q to ROUTES[q % 3].
    """
    q = int(_QUESTION_RE.search(request.bundle.user).group(1))
    variant = request.bundle.variant

    if variant == "router":
        return ROUTES[q % 3]

    if variant == "judge":
        return "no"

    gold = "River{:03d}".format(q)

    if q % 4 == 0:
        return "Step 1: SELECT ?a WHERE { ?x drainsInto ?a }\nFINAL ANSWER: " + gold
    if q % 4 == 1:
        return "FINAL ANSWER: Nowhere"
    if q % 4 == 2:
        if variant == "sparql_cot":
            return "FINAL ANSWER: I don't know"

        return "FINAL ANSWER: " + gold

    return "I think it is " + gold


class SamplingTests(unittest.TestCase):

    def setUp(self):
        _, self._contexts, self._questions = pipeline_dataset(100)

    def test_permutation(self):
        sample = sample_questions(self._questions, 100, 42)

        self.assertEqual(sorted(q.id for q in sample), sorted(q.id for q in self._questions))

    def test_seeded(self):
        self.assertEqual(sample_questions(self._questions, 10, 42), sample_questions(self._questions, 10, 42))
        self.assertNotEqual(sample_questions(self._questions, 100, 42), sample_questions(self._questions, 100, 43))

    def test_input_untouched(self):
        ids = [q.id for q in self._questions]

        sample_questions(self._questions, 50, 7)

        self.assertEqual([q.id for q in self._questions], ids)

    def test_invalid_size(self):
        with self.assertRaises(UsageError):
            sample_questions(self._questions, 101, 42)

        with self.assertRaises(UsageError):
            sample_questions(self._questions, 0, 42)

    def test_preflight(self):
        contexts = dict(self._contexts)
        del contexts["q007"]

        with self.assertRaises(PreflightError) as cm:
            preflight(self._questions, contexts)

        self.assertEqual(cm.exception.ids, ["q007"])


class RunConfigTests(unittest.TestCase):

    def test_unknown_label(self):
        with self.assertRaises(UsageError):
            RunConfig(label="everything", model="m")

    def test_graph_walk(self):
        self.assertTrue(RunConfig(label="sparql_gw", model="m").uses_graph_walk)
        self.assertFalse(RunConfig(label="sparql", model="m").uses_graph_walk)
        self.assertTrue(RunConfig(label="routing", model="m").uses_graph_walk)
        self.assertFalse(RunConfig(label="routing", model="m", routing=RoutingPolicy(compress=False)).uses_graph_walk)

    def test_routing_policy(self):
        policy = RoutingPolicy()

        self.assertEqual(policy.method_for("bridge"), "sparql_cot")
        self.assertEqual(policy.method_for("comparison"), "generic_cot")
        self.assertEqual(policy.alternative("sparql_cot"), "generic_cot")

        with self.assertRaises(UsageError):
            RoutingPolicy(bridge_method="generic_cot", other_method="generic_cot")


class RunTests(unittest.TestCase):

    def setUp(self):
        self._graph, self._contexts, self._questions = pipeline_dataset(8)
        self._policy = StopWordPolicy.default()

    def _gateway(self):
        self._stub = StubProvider(responder=scripted_reply)

        return LlmGateway(self._stub)

    def _run(self, label, **kwargs):
        cfg = RunConfig(label=label, model="m", **kwargs)

        return run_config(cfg, self._graph, self._contexts, self._questions, self._gateway(), self._policy)

    def test_baseline(self):
        records = self._run("baseline")

        self.assertEqual([r.question_id for r in records], [q.id for q in self._questions])

        by_id = dict((r.question_id, r) for r in records)

        self.assertTrue(by_id["q000"].correct)
        self.assertEqual(by_id["q000"].match_method, "heuristic")
        self.assertFalse(by_id["q001"].correct)
        self.assertEqual(by_id["q001"].match_method, "judge")
        self.assertTrue(by_id["q002"].correct)
        self.assertFalse(by_id["q003"].correct)
        self.assertTrue(by_id["q003"].parsed.extraction_failed)
        self.assertIsNone(by_id["q000"].walk_stats)
        self.assertIsNone(by_id["q000"].scaffold_compliant)

        for record in records:
            self.assertEqual(record.calls, 1)
            self.assertTrue(record.covered)

    def test_judge_only_on_heuristic_failure(self):
        records = self._run("baseline")

        judge_calls = [c for c in self._stub.calls if c.variant == "judge"]

        self.assertEqual(len(judge_calls), len([r for r in records if r.match_method == "judge"]))
        self.assertEqual(len(judge_calls), 2)

    def test_sparql_gw_tokens(self):
        records = self._run("sparql_gw")

        counter = ApproximateTokenCounter()

        for record, question in zip(records, self._questions):
            compressed = compress(self._graph, self._contexts[question.id], question.text, WalkConfig(), self._policy)
            bundle = build_qa_prompt("sparql_cot", compressed.rendered, question.text)

            self.assertEqual(record.tokens_in, counter.count(bundle.system + "\n" + bundle.user))
            self.assertEqual(record.walk_stats, compressed.stats)
            self.assertIsNotNone(record.scaffold_compliant)

        by_id = dict((r.question_id, r) for r in records)

        self.assertTrue(by_id["q000"].scaffold_compliant)
        self.assertFalse(by_id["q001"].scaffold_compliant)
        self.assertTrue(by_id["q002"].parsed.abstained)
        self.assertFalse(by_id["q002"].correct)

    def test_routing(self):
        records = self._run("routing")

        by_id = dict((r.question_id, r) for r in records)

        # q004 routes to comparison: generic CoT answers at once.
        self.assertEqual(by_id["q004"].route, "comparison")
        self.assertEqual(by_id["q004"].method, "generic_cot")
        self.assertEqual(by_id["q004"].calls, 2)
        self.assertTrue(by_id["q004"].correct)

        # q006 routes to bridge: SPARQL CoT abstains, generic CoT retries.
        self.assertEqual(by_id["q006"].route, "bridge")
        self.assertEqual(by_id["q006"].method, "generic_cot")
        self.assertEqual(by_id["q006"].calls, 3)
        self.assertTrue(by_id["q006"].correct)

        # q005 gets an unparseable route and falls back to bridge.
        self.assertEqual(by_id["q005"].route, "bridge")
        self.assertEqual(by_id["q005"].method, "sparql_cot")
        self.assertEqual(by_id["q005"].calls, 2)
        self.assertFalse(by_id["q005"].correct)

        for record in records:
            self.assertLessEqual(record.calls, 3)

    def test_routing_without_retry(self):
        records = self._run("routing", routing=RoutingPolicy(retry_on_abstain=False))

        by_id = dict((r.question_id, r) for r in records)

        self.assertEqual(by_id["q006"].calls, 2)
        self.assertTrue(by_id["q006"].parsed.abstained)

    def test_normalized_answers(self):
        records = self._run("baseline", normalize_answers=True)

        normalize_calls = [c for c in self._stub.calls if c.variant == "normalize"]

        self.assertEqual(len(normalize_calls), len([r for r in records if r.parsed.final is not None]))

    def test_graph_walk_with_tiny_budget(self):
        tiny = WalkConfig(budget_tokens=2)

        for label in ("sparql_gw", "routing"):
            records = self._run(label, walk=tiny)

            self.assertEqual(len(records), len(self._questions))

            for record in records:
                self.assertIsNone(record.error)
                self.assertTrue(record.walk_stats["fallback"])
                self.assertTrue(record.covered)

        by_id = dict((r.question_id, r) for r in self._run("sparql_gw", walk=tiny))

        self.assertTrue(by_id["q000"].correct)

    def test_emit_report(self):
        records = self._run("baseline") + self._run("sparql_gw")

        directory = tempfile.mkdtemp()

        try:
            report, paths = emit_report(records, self._questions, os.path.join(directory, "out"))

            for path in paths.values():
                self.assertTrue(os.path.isfile(path))

            self.assertEqual(list(report.labels), ["baseline", "sparql_gw"])
            self.assertEqual(len(report.deltas), 1)

            with open(paths["markdown"]) as f:
                self.assertIn("## Paired deltas (pp)", f.read())
        finally:
            shutil.rmtree(directory)


class DeterminismTests(unittest.TestCase):

    def test_routing_end_to_end(self):
        graph, contexts, questions = pipeline_dataset(100)
        policy = StopWordPolicy.default()

        directory = tempfile.mkdtemp()

        try:
            outputs = []

            for run in range(2):
                asked = {}

                def responder(request):
                    asked[request.fingerprint] = "q" + _QUESTION_RE.search(request.bundle.user).group(1)

                    return scripted_reply(request)

                stub = StubProvider(responder=responder)
                gateway = LlmGateway(stub)

                cfg = RunConfig(label="routing", model="m", n=100, max_in_flight=8)
                sample = sample_questions(questions, 100, 42)

                records = run_config(cfg, graph, contexts, sample, gateway, policy)

                path = os.path.join(directory, "results{}.jsonl".format(run))

                write_results(records, path)

                with open(path, "rb") as f:
                    outputs.append(f.read())

                calls_per_question = collections.Counter(
                    asked[c.fingerprint] for c in stub.calls if c.variant != "judge")

                self.assertEqual(sorted(calls_per_question), sorted(q.id for q in questions))

                for record in records:
                    self.assertGreaterEqual(calls_per_question[record.question_id], 2)
                    self.assertLessEqual(calls_per_question[record.question_id], 3)
                    self.assertEqual(calls_per_question[record.question_id], record.calls)

            self.assertEqual(outputs[0], outputs[1])
        finally:
            shutil.rmtree(directory)


def main():
    unittest.main()


if __name__ == '__main__':
    main()
