# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
GWQA : Graph-Walk Question Answering.

"""
import logging

from dataclasses import replace

from .analysis.pipeline.runner import LABEL_ROUTING
from .analysis.pipeline.runner import LABELS
from .analysis.pipeline.runner import RunConfig
from .analysis.pipeline.runner import UsageError
from .analysis.pipeline.runner import emit_report
from .analysis.pipeline.runner import preflight
from .analysis.pipeline.runner import run_config
from .analysis.pipeline.runner import sample_questions
from .analysis.pipeline.runner import score_records
from .analysis.prompts.builder import build_qa_prompt
from .analysis.prompts.builder import build_router_prompt
from .analysis.prompts.builder import dump_prompts
from .analysis.walk.assembler import compress
from .analysis.walk.seeds import StopWordPolicy
from .analysis.walk.seeds import match_seeds
from .analysis.walk.walker import WalkConfig
from .analysis.walk.walker import bfs_hops
from .analysis.walk.walker import cooccur_expand
from .config import DEFAULT_CHARS_PER_TOKEN
from .config import DEFAULT_MAX_RETRIES
from .core.context.context import parse_context
from .core.context.context import parse_questions
from .core.context.context import render_context
from .core.context.tokens import ApproximateTokenCounter
from .core.context.tokens import TiktokenCounter
from .core.graph.renderer import render_subgraph
from .core.graph.store import load_graph_dir
from .core.llm.gateway import HttpChatProvider
from .core.llm.gateway import LlmGateway
from .core.llm.gateway import StubProvider
from .core.llm.gateway import TranscriptLog

logger = logging.getLogger(__name__)

PROVIDER_STUB = "stub"
PROVIDER_HTTP = "http"

TOKENIZER_APPROXIMATE = "approximate"
TOKENIZER_TIKTOKEN = "tiktoken"


def create_counter(name=TOKENIZER_APPROXIMATE):
    if name == TOKENIZER_TIKTOKEN:
        return TiktokenCounter()

    if name == TOKENIZER_APPROXIMATE:
        return ApproximateTokenCounter(DEFAULT_CHARS_PER_TOKEN)

    raise UsageError("unknown tokenizer: {}".format(name))


def create_gateway(provider=PROVIDER_STUB, settings=None, stub_script=None, transcripts=None,
                   max_retries=DEFAULT_MAX_RETRIES, counter=None):
    """Create an LLM gateway for the given provider.
    """
    if provider == PROVIDER_STUB:
        if stub_script:
            chat_provider = StubProvider.from_file(stub_script, counter=counter)
        else:
            chat_provider = StubProvider(counter=counter)
    elif provider == PROVIDER_HTTP:
        chat_provider = HttpChatProvider(settings)
    else:
        raise UsageError("unknown provider: {}".format(provider))

    transcript_log = TranscriptLog(transcripts) if transcripts else None

    return LlmGateway(chat_provider, max_retries=max_retries, transcripts=transcript_log)


class GWQA(object):
    """Graph-Walk Question Answering."""

    def __init__(self, graph_dir=None, counter=None, stopwords=None):
        logger.info("Initializing GWQA")

        self.graph = None
        self.contexts = {}
        self.questions = []
        self.gateway = None
        self.costs = {}

        self.counter = counter if counter is not None else create_counter()
        self.policy = StopWordPolicy.from_file(stopwords) if stopwords else StopWordPolicy.default()

        if graph_dir:
            self.open(graph_dir)

    # ======================================================================== #

    def open(self, graph_dir):
        """Load a knowledge graph directory.

        Args:
            graph_dir (str): Directory with entities.jsonl, relationships.jsonl
                and chunks.jsonl.
        """
        self.graph = load_graph_dir(graph_dir)

    def load_contexts(self, path):
        """Load retrieved contexts, validated against the loaded graph.
        """
        contexts = parse_context(path, self.graph)

        self.contexts = dict((ctx.question_id, ctx) for ctx in contexts)

        return self.contexts

    def load_questions(self, path):
        self.questions = parse_questions(path)

        return self.questions

    def set_gateway(self, gateway):
        self.gateway = gateway

    def question(self, question_id):
        for question in self.questions:
            if question.id == question_id:
                return question

        raise KeyError(question_id)

    def walk_config(self, **kwargs):
        """Return a walk configuration that uses the framework's token counter.
        """
        return WalkConfig(counter=self.counter, **kwargs)

    # ======================================================================== #

    def seeds(self, question_text):
        return match_seeds(question_text, self.graph, self.policy)

    def walk(self, question_text, walk):
        """Return the hop map of a question, or None when no seed matches.
        """
        seeds = self.seeds(question_text)

        if not seeds:
            return None

        hop_map = bfs_hops(self.graph, [m.entity_id for m in seeds], walk.max_depth)

        return cooccur_expand(self.graph, hop_map)

    def compress(self, question, walk):
        """Compress the retrieved context of a question.

        Args:
            question (QuestionRecord): The question.
            walk (WalkConfig): Walk configuration.

        Returns:
            CompressedContext: The compressed context.
        """
        ctx = self.contexts[question.id]

        return compress(self.graph, ctx, question.text, walk, self.policy)

    def compress_all(self, walk, questions=None, callback=None):
        questions = self.questions if questions is None else questions

        preflight(questions, self.contexts)

        results = []

        for question in questions:
            compressed = self.compress(question, walk)

            if callback:
                callback(question, compressed)

            results.append(compressed)

        return results

    def render_walk(self, question, walk, filename, format='dot'):
        """Render the subgraph reached by the walk of a question.
        """
        hop_map = self.walk(question.text, walk)

        if hop_map is None:
            logger.info("No walk to render for %s", question.id)
            return False

        render_subgraph(self.graph, hop_map, filename, format=format)

        return True

    # ======================================================================== #

    def sample(self, n, seed):
        return sample_questions(self.questions, n, seed)

    def run(self, labels, model, walk, n, seed, **kwargs):
        """Run every label on the same question sample.

        Returns:
            list: AnswerRecord list, one per (label, question).
        """
        if self.gateway is None:
            raise UsageError("no gateway configured")

        sample = self.sample(n, seed)

        preflight(sample, self.contexts)

        records = []

        for label in labels:
            cfg = RunConfig(label=label, model=model, walk=walk, n=n, seed=seed, **kwargs)

            before = self.gateway.accounting.to_dict()

            records.extend(run_config(cfg, self.graph, self.contexts, sample, self.gateway, self.policy))

            after = self.gateway.accounting.to_dict()

            self.costs[label] = dict(
                (key, after[key] - before[key]) for key in ("calls", "prompt_tokens", "completion_tokens"))

        return records

    def score(self, records, cfg=None):
        """Re-score records, with the judge when a gateway is configured.
        """
        records = [replace(r, correct=None, short_answer=None) for r in records]

        return score_records(records, self.questions, self.gateway, cfg)

    def report(self, records, out_dir, settings=None):
        cost = {}

        for label, totals in self.costs.items():
            cost[label] = dict(totals)

            if settings is not None:
                cost[label]["cost"] = settings.cost(totals["prompt_tokens"], totals["completion_tokens"])

        return emit_report(records, self.questions, out_dir, cost=cost)

    def dump_prompts(self, labels, questions, walk, path):
        """Write the first prompt each label would send for each question.
        """
        entries = []

        for label in labels:
            cfg = RunConfig(label=label, model="", walk=walk)

            for question in questions:
                if label == LABEL_ROUTING:
                    bundle = build_router_prompt(question.text)
                else:
                    if cfg.uses_graph_walk:
                        text = self.compress(question, walk).rendered
                    else:
                        text = render_context(self.contexts[question.id])

                    bundle = build_qa_prompt(cfg.variant, text, question.text)

                entries.append(("{}/{}".format(label, question.id), bundle))

        dump_prompts(entries, path)


__all__ = ["GWQA", "LABELS", "create_counter", "create_gateway"]
