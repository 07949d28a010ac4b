# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

import argparse
import time

from gwqa.analysis.pipeline.runner import LABELS
from gwqa.analysis.pipeline.runner import RoutingPolicy
from gwqa.config import DEFAULT_MAX_IN_FLIGHT
from gwqa.config import DEFAULT_MAX_RETRIES
from gwqa.config import DEFAULT_SAMPLE_SIZE
from gwqa.config import DEFAULT_SEED
from gwqa.config import DEFAULT_TEMPERATURE
from gwqa.config import load_provider_settings
from gwqa.gwqa import GWQA
from gwqa.gwqa import PROVIDER_HTTP
from gwqa.gwqa import PROVIDER_STUB
from gwqa.gwqa import create_counter
from gwqa.gwqa import create_gateway
from gwqa.tools.common import add_verbose_argument
from gwqa.tools.common import add_walk_arguments
from gwqa.tools.common import check_files
from gwqa.tools.common import create_output_dir
from gwqa.tools.common import fail
from gwqa.tools.common import print_metrics
from gwqa.tools.common import setup_logging


def init_parser():

    description = "Tool for running question-answering configurations over retrieved contexts."

    parser = argparse.ArgumentParser(
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=description)

    parser.add_argument(
        "--config",
        type=str,
        choices=LABELS,
        help="Configuration label.")

    parser.add_argument(
        "--labels",
        type=str,
        help="Run several configurations on the same sample (comma separated).")

    parser.add_argument(
        "--graph-dir",
        type=str,
        required=True,
        help="Knowledge graph directory.")

    parser.add_argument(
        "--contexts",
        type=str,
        required=True,
        help="Retrieved contexts file (contexts.jsonl).")

    parser.add_argument(
        "--questions",
        type=str,
        required=True,
        help="Questions file (questions.jsonl).")

    parser.add_argument(
        "--model",
        type=str,
        help="QA model name.")

    parser.add_argument(
        "--judge-model",
        type=str,
        help="Judge model name (defaults to the QA model).")

    parser.add_argument(
        "--provider",
        type=str,
        default=PROVIDER_STUB,
        choices=[PROVIDER_STUB, PROVIDER_HTTP],
        help="LLM provider.")

    parser.add_argument(
        "--provider-config",
        type=str,
        help="Provider settings file (YAML).")

    parser.add_argument(
        "--stub-script",
        type=str,
        help="Scripted stub responses (stub.jsonl).")

    parser.add_argument(
        "--temperature",
        type=float,
        default=DEFAULT_TEMPERATURE,
        help="Sampling temperature of QA calls.")

    parser.add_argument(
        "--n",
        type=int,
        default=DEFAULT_SAMPLE_SIZE,
        help="Number of sampled questions.")

    parser.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help="Sampling seed.")

    parser.add_argument(
        "--max-in-flight",
        type=int,
        default=DEFAULT_MAX_IN_FLIGHT,
        help="Maximum concurrent provider requests.")

    parser.add_argument(
        "--max-retries",
        type=int,
        default=DEFAULT_MAX_RETRIES,
        help="Retries on rate limits and timeouts.")

    parser.add_argument(
        "--no-routing-walk",
        action="store_true",
        help="Routing answers on the full context instead of the compressed one.")

    parser.add_argument(
        "--no-retry",
        action="store_true",
        help="Routing does not retry abstentions.")

    parser.add_argument(
        "--normalize-answers",
        action="store_true",
        help="Rewrite answers to short spans before scoring.")

    parser.add_argument(
        "--dump-prompts",
        type=str,
        help="Write the built prompts to a file (prompts.jsonl).")

    parser.add_argument(
        "--transcripts",
        type=str,
        help="Write every provider call to a file (transcripts.jsonl).")

    parser.add_argument(
        "-o", "--out",
        type=str,
        default=".",
        help="Output directory.")

    parser.add_argument(
        "-t", "--time",
        action="store_true",
        help="Print process time.")

    add_walk_arguments(parser)
    add_verbose_argument(parser)

    return parser


def main():

    parser = init_parser()

    args = parser.parse_args()

    setup_logging(args.verbose)

    if args.labels:
        labels = [label.strip() for label in args.labels.split(",") if label.strip()]
    elif args.config:
        labels = [args.config]
    else:
        fail("No configuration given (use --config or --labels)")

    for label in labels:
        if label not in LABELS:
            fail("Unknown configuration : {}".format(label))

    check_files(args.contexts, args.questions, args.provider_config, args.stub_script)

    process_start = time.time()

    try:
        settings = load_provider_settings(args.provider_config, model=args.model, judge_model=args.judge_model)

        model = settings.model or args.model

        if not model:
            fail("No model given (use --model or {})".format("GWQA_MODEL"))

        counter = create_counter(args.tokenizer)

        gwqa = GWQA(counter=counter, stopwords=args.stopwords)

        print("[+] Loading knowledge graph...")

        gwqa.open(args.graph_dir)

        print("[+] Loading contexts and questions...")

        gwqa.load_contexts(args.contexts)
        gwqa.load_questions(args.questions)

        walk = gwqa.walk_config(max_depth=args.max_depth, budget_tokens=args.budget, packing=args.packing)

        gwqa.set_gateway(create_gateway(args.provider, settings, args.stub_script, args.transcripts,
                                        args.max_retries, counter))

        if args.dump_prompts:
            print("[+] Dumping prompts...")

            gwqa.dump_prompts(labels, gwqa.sample(args.n, args.seed), walk, args.dump_prompts)

        print("[+] Running {} on {} questions...".format(", ".join(labels), args.n))

        routing = RoutingPolicy(retry_on_abstain=not args.no_retry, compress=not args.no_routing_walk)

        records = gwqa.run(labels, model, walk, args.n, args.seed,
                           temperature=args.temperature,
                           judge_model=settings.judge_model,
                           normalize_answers=args.normalize_answers,
                           max_in_flight=args.max_in_flight,
                           routing=routing,
                           provider=settings)

        print("[+] Writing report...")

        report, paths = gwqa.report(records, create_output_dir(args.out), settings)
    except SystemExit:
        raise
    except Exception as e:
        fail("{}".format(e))

    for label, block in report.labels.items():
        print_metrics(label, block["all"])

    print("[+] Results: {}".format(paths["results"]))

    process_end = time.time()

    if args.time:
        process_time = process_end - process_start

        print("[+] Process time: {:.3f}s".format(process_time))


if __name__ == "__main__":

    main()
