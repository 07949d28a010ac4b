# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
Pipeline Runner.

Runs one question-answering configuration over a sample of questions:

    baseline, sparql, generic           full retrieved context
    baseline_gw, sparql_gw, generic_gw  graph-walk compressed context
    routing                             classify, answer with the routed CoT,
                                        retry once with the other CoT on
                                        abstention (at most three calls)

Every configuration sends its requests through the gateway in batches, so
questions are answered concurrently while records keep the input order.

"""
import logging
import os
import random

from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace

from gwqa.analysis.evaluation.judge import judge_request
from gwqa.analysis.evaluation.judge import normalize_request
from gwqa.analysis.evaluation.judge import parse_normalized
from gwqa.analysis.evaluation.judge import parse_verdict
from gwqa.analysis.evaluation.metrics import coverage
from gwqa.analysis.evaluation.metrics import heuristic_match
from gwqa.analysis.evaluation.metrics import max_exact_match
from gwqa.analysis.evaluation.metrics import max_token_f1
from gwqa.analysis.evaluation.report import AnswerRecord
from gwqa.analysis.evaluation.report import MATCH_HEURISTIC
from gwqa.analysis.evaluation.report import MATCH_JUDGE
from gwqa.analysis.evaluation.report import MATCH_NONE
from gwqa.analysis.evaluation.report import aggregate
from gwqa.analysis.evaluation.report import write_results
from gwqa.analysis.prompts.builder import QA_VARIANTS
from gwqa.analysis.prompts.builder import VARIANT_BASELINE
from gwqa.analysis.prompts.builder import VARIANT_GENERIC_COT
from gwqa.analysis.prompts.builder import VARIANT_SPARQL_COT
from gwqa.analysis.prompts.builder import build_qa_prompt
from gwqa.analysis.prompts.builder import build_router_prompt
from gwqa.analysis.prompts.parser import ParsedAnswer
from gwqa.analysis.prompts.parser import ROUTE_BRIDGE
from gwqa.analysis.prompts.parser import extract_answer
from gwqa.analysis.prompts.parser import parse_route
from gwqa.analysis.prompts.sparql import parse_sparql_scaffold
from gwqa.analysis.walk.assembler import compress
from gwqa.analysis.walk.seeds import StopWordPolicy
from gwqa.analysis.walk.walker import WalkConfig
from gwqa.config import DEFAULT_MAX_IN_FLIGHT
from gwqa.config import DEFAULT_SAMPLE_SIZE
from gwqa.config import DEFAULT_SEED
from gwqa.config import DEFAULT_TEMPERATURE
from gwqa.core.context.context import render_context
from gwqa.core.llm.gateway import ChatRequest

logger = logging.getLogger(__name__)

LABEL_BASELINE = "baseline"
LABEL_BASELINE_GW = "baseline_gw"
LABEL_SPARQL = "sparql"
LABEL_SPARQL_GW = "sparql_gw"
LABEL_GENERIC = "generic"
LABEL_GENERIC_GW = "generic_gw"
LABEL_ROUTING = "routing"

LABELS = (
    LABEL_BASELINE,
    LABEL_BASELINE_GW,
    LABEL_SPARQL,
    LABEL_SPARQL_GW,
    LABEL_GENERIC,
    LABEL_GENERIC_GW,
    LABEL_ROUTING,
)

LABEL_VARIANTS = {
    LABEL_BASELINE:    VARIANT_BASELINE,
    LABEL_BASELINE_GW: VARIANT_BASELINE,
    LABEL_SPARQL:      VARIANT_SPARQL_COT,
    LABEL_SPARQL_GW:   VARIANT_SPARQL_COT,
    LABEL_GENERIC:     VARIANT_GENERIC_COT,
    LABEL_GENERIC_GW:  VARIANT_GENERIC_COT,
}

GW_SUFFIX = "_gw"

RESULTS_FILENAME = "results.jsonl"
REPORT_JSON_FILENAME = "report.json"
REPORT_MD_FILENAME = "report.md"


class UsageError(ValueError):
    pass


class PreflightError(Exception):

    def __init__(self, ids):
        self.ids = sorted(ids)

        super(PreflightError, self).__init__(
            "no retrieved context for: {}".format(", ".join(self.ids)))


@dataclass(frozen=True)
class RoutingPolicy:
    bridge_method: str = VARIANT_SPARQL_COT
    other_method: str = VARIANT_GENERIC_COT
    retry_on_abstain: bool = True
    compress: bool = True

    def __post_init__(self):
        for method in (self.bridge_method, self.other_method):
            if method not in QA_VARIANTS:
                raise UsageError("unknown routing method: {}".format(method))

        if self.bridge_method == self.other_method:
            raise UsageError("routing methods must differ")

    def method_for(self, route):
        if route == ROUTE_BRIDGE:
            return self.bridge_method

        return self.other_method

    def alternative(self, method):
        if method == self.bridge_method:
            return self.other_method

        return self.bridge_method


@dataclass(frozen=True)
class RunConfig:
    label: str
    model: str
    walk: WalkConfig = field(default_factory=WalkConfig)
    n: int = DEFAULT_SAMPLE_SIZE
    seed: int = DEFAULT_SEED
    temperature: float = DEFAULT_TEMPERATURE
    judge_model: str = None
    normalize_answers: bool = False
    max_in_flight: int = DEFAULT_MAX_IN_FLIGHT
    routing: RoutingPolicy = field(default_factory=RoutingPolicy)
    provider: object = None

    def __post_init__(self):
        if self.label not in LABELS:
            raise UsageError("unknown run label: {}".format(self.label))

        if self.n < 1:
            raise UsageError("sample size must be at least 1")

    @property
    def uses_graph_walk(self):
        if self.label == LABEL_ROUTING:
            return self.routing.compress

        return self.label.endswith(GW_SUFFIX)

    @property
    def variant(self):
        return LABEL_VARIANTS.get(self.label)

    @property
    def effective_judge_model(self):
        return self.judge_model or self.model


def sample_questions(questions, n, seed=DEFAULT_SEED):
    """Return a seeded sample of `n` questions, without replacement.

    The input list is copied, shuffled with `random.Random(seed).shuffle`
    and the first `n` items are kept.
    """
    items = list(questions)

    if n < 1 or n > len(items):
        raise UsageError("cannot sample {} of {} questions".format(n, len(items)))

    random.Random(seed).shuffle(items)

    return items[:n]


def preflight(questions, contexts):
    """Check that every question has a retrieved context.
    """
    missing = [q.id for q in questions if q.id not in contexts]

    if missing:
        raise PreflightError(missing)


# Context preparation
# ============================================================================ #
@dataclass
class _Job:
    question: object
    ctx: object
    context_text: str = ""
    walk_stats: dict = None
    route: str = None
    method: str = None
    parsed: ParsedAnswer = None
    tokens_in: int = 0
    tokens_out: int = 0
    calls: int = 0
    error: str = None


def _prepare(jobs, graph, cfg, policy):
    for job in jobs:
        if cfg.uses_graph_walk:
            compressed = compress(graph, job.ctx, job.question.text, cfg.walk, policy)

            job.context_text = compressed.rendered
            job.walk_stats = dict(compressed.stats)
        else:
            job.context_text = render_context(job.ctx)


def _ask(gateway, cfg, jobs, prompt_for, on_response):
    """Send one request per job and hand each result back.
    """
    ready = []
    requests = []

    for job in jobs:
        try:
            bundle = prompt_for(job)
        except ValueError as e:
            logger.error("Cannot build prompt for %s: %s", job.question.id, e)

            job.error = "{}: {}".format(type(e).__name__, e)
            continue

        ready.append(job)
        requests.append(ChatRequest(bundle, cfg.model, cfg.temperature))

    responses = gateway.complete_batch(requests, cfg.max_in_flight)

    for job, response in zip(ready, responses):
        job.calls += 1

        if isinstance(response, Exception):
            job.error = "{}: {}".format(type(response).__name__, response)
            continue

        job.tokens_in += response.prompt_tokens
        job.tokens_out += response.completion_tokens

        on_response(job, response)


def _answer(gateway, cfg, jobs, variant_of):
    def prompt_for(job):
        return build_qa_prompt(variant_of(job), job.context_text, job.question.text)

    def on_response(job, response):
        job.method = variant_of(job)
        job.parsed = extract_answer(response.text)

    _ask(gateway, cfg, jobs, prompt_for, on_response)


def _to_record(job, label):
    parsed = job.parsed if job.parsed is not None else ParsedAnswer(None, False, "")

    golds = job.question.gold_answers

    scaffold_compliant = None

    if job.method == VARIANT_SPARQL_COT and job.error is None:
        scaffold = parse_sparql_scaffold(parsed.raw)
        scaffold_compliant = scaffold is not None and scaffold.compliant

    return AnswerRecord(
        question_id=job.question.id,
        label=label,
        parsed=parsed,
        covered=coverage(job.context_text, golds),
        covered_original=coverage(render_context(job.ctx), golds),
        route=job.route,
        method=job.method,
        tokens_in=job.tokens_in,
        tokens_out=job.tokens_out,
        calls=job.calls,
        scaffold_compliant=scaffold_compliant,
        walk_stats=job.walk_stats,
        error=job.error,
    )


def _jobs(questions, contexts):
    return [_Job(question, contexts[question.id]) for question in questions]


# Runs
# ============================================================================ #
def run_config(cfg, graph, contexts, questions, gateway, policy=None):
    """Answer every question with one QA call, then score the answers.

    `contexts` maps question ids to retrieved contexts.
    """
    if cfg.label == LABEL_ROUTING:
        return run_routing(cfg.routing, graph, contexts, questions, gateway, cfg, policy)

    questions = list(questions)

    preflight(questions, contexts)

    if policy is None:
        policy = StopWordPolicy.default()

    logger.info("Running %s on %d questions", cfg.label, len(questions))

    jobs = _jobs(questions, contexts)

    _prepare(jobs, graph, cfg, policy)

    _answer(gateway, cfg, jobs, lambda job: cfg.variant)

    records = [_to_record(job, cfg.label) for job in jobs]

    return score_records(records, questions, gateway, cfg)


def run_routing(routing, graph, contexts, questions, gateway, cfg, policy=None):
    """Classify each question, answer it with the routed CoT and, on
    abstention, retry once with the other CoT.
    """
    questions = list(questions)

    preflight(questions, contexts)

    if cfg.label != LABEL_ROUTING or cfg.routing != routing:
        cfg = replace(cfg, label=LABEL_ROUTING, routing=routing)

    if policy is None:
        policy = StopWordPolicy.default()

    logger.info("Running routing on %d questions", len(questions))

    jobs = _jobs(questions, contexts)

    _prepare(jobs, graph, cfg, policy)

    # Classify.
    def on_route(job, response):
        job.route = parse_route(response.text)

    _ask(gateway, cfg, jobs, lambda job: build_router_prompt(job.question.text), on_route)

    for job in jobs:
        if job.route is None:
            job.route = parse_route("")

        # A failed classification still routes to the default.
        job.error = None

    # Answer with the routed method.
    _answer(gateway, cfg, jobs, lambda job: routing.method_for(job.route))

    # Retry abstentions with the other method.
    if routing.retry_on_abstain:
        retries = [job for job in jobs if job.error is None and job.parsed.abstained]

        logger.info("Retrying %d abstentions", len(retries))

        _answer(gateway, cfg, retries, lambda job: routing.alternative(job.method))

        # A failed retry keeps the abstention of the first attempt.
        for job in retries:
            if job.error is not None:
                logger.warning("Retry failed for %s: %s", job.question.id, job.error)

                job.error = None

    records = [_to_record(job, LABEL_ROUTING) for job in jobs]

    return score_records(records, questions, gateway, cfg)


# Scoring
# ============================================================================ #
def _normalize(records, by_id, gateway, cfg):
    pending = [i for i, r in enumerate(records) if r.error is None and r.parsed.final is not None]

    requests = [
        normalize_request(by_id[records[i].question_id].text, records[i].parsed.final, cfg.effective_judge_model)
        for i in pending
    ]

    responses = gateway.complete_batch(requests, cfg.max_in_flight)

    for i, response in zip(pending, responses):
        if isinstance(response, Exception):
            logger.warning("Answer normalization failed for %s", records[i].question_id)
            continue

        records[i] = replace(records[i], short_answer=parse_normalized(response.text, records[i].parsed.final))


def score_records(records, questions, gateway=None, cfg=None):
    """Score records: heuristics first, the LLM judge only when they fail.

    Records of failed QA calls and records whose judge call fails are left
    unscored. Without a gateway, a failed heuristic scores incorrect.
    """
    records = list(records)
    by_id = dict((q.id, q) for q in questions)

    if gateway is not None and cfg is not None and cfg.normalize_answers:
        _normalize(records, by_id, gateway, cfg)

    to_judge = []

    for i, record in enumerate(records):
        if record.error is not None:
            records[i] = replace(record, correct=None, match_method=MATCH_NONE)
            continue

        answer = record.answer

        if answer is None:
            records[i] = replace(record, correct=False, match_method=MATCH_NONE, f1=0.0, em=False)
            continue

        golds = by_id[record.question_id].gold_answers

        record = replace(record, f1=max_token_f1(answer, golds), em=max_exact_match(answer, golds))

        if heuristic_match(answer, golds):
            records[i] = replace(record, correct=True, match_method=MATCH_HEURISTIC)
        else:
            records[i] = replace(record, correct=False, match_method=MATCH_HEURISTIC)

            to_judge.append(i)

    if gateway is None or not to_judge:
        return records

    judge_model = cfg.effective_judge_model if cfg is not None else None
    max_in_flight = cfg.max_in_flight if cfg is not None else DEFAULT_MAX_IN_FLIGHT

    requests = [
        judge_request(records[i].answer, by_id[records[i].question_id].gold_answers,
                      by_id[records[i].question_id].text, judge_model)
        for i in to_judge
    ]

    responses = gateway.complete_batch(requests, max_in_flight)

    for i, response in zip(to_judge, responses):
        if isinstance(response, Exception):
            logger.error("Judge call failed for %s: %s", records[i].question_id, response)

            records[i] = replace(records[i], correct=None, match_method=MATCH_NONE)
        else:
            records[i] = replace(records[i], correct=parse_verdict(response.text), match_method=MATCH_JUDGE)

    return records


# Reports
# ============================================================================ #
def emit_report(records, questions, out_dir, cost=None):
    """Write results.jsonl, report.json and report.md to `out_dir`.
    """
    if not os.path.isdir(out_dir):
        os.makedirs(out_dir)

    report = aggregate(records, questions, label_order=LABELS, cost=cost)

    paths = {
        "results": os.path.join(out_dir, RESULTS_FILENAME),
        "json": os.path.join(out_dir, REPORT_JSON_FILENAME),
        "markdown": os.path.join(out_dir, REPORT_MD_FILENAME),
    }

    write_results(records, paths["results"], label_order=LABELS)

    with open(paths["json"], "w", encoding="utf-8") as f:
        f.write(report.to_json() + "\n")

    with open(paths["markdown"], "w", encoding="utf-8") as f:
        f.write(report.to_markdown())

    logger.info("Report written to %s", out_dir)

    return report, paths
