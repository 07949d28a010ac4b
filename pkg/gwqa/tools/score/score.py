# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

import argparse
import os

from gwqa.analysis.evaluation.report import read_results
from gwqa.analysis.pipeline.runner import LABEL_BASELINE
from gwqa.analysis.pipeline.runner import RunConfig
from gwqa.config import load_provider_settings
from gwqa.gwqa import GWQA
from gwqa.gwqa import PROVIDER_HTTP
from gwqa.gwqa import PROVIDER_STUB
from gwqa.gwqa import create_gateway
from gwqa.tools.common import add_verbose_argument
from gwqa.tools.common import check_files
from gwqa.tools.common import create_output_dir
from gwqa.tools.common import fail
from gwqa.tools.common import print_metrics
from gwqa.tools.common import setup_logging


def init_parser():

    description = "Tool for scoring and reporting run results."

    parser = argparse.ArgumentParser(
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=description)

    parser.add_argument(
        "--results",
        type=str,
        required=True,
        help="Results file (results.jsonl).")

    parser.add_argument(
        "--questions",
        type=str,
        required=True,
        help="Questions file (questions.jsonl).")

    parser.add_argument(
        "--rescore",
        action="store_true",
        help="Score the answers again instead of reusing the stored verdicts.")

    parser.add_argument(
        "--judge",
        type=str,
        choices=[PROVIDER_STUB, PROVIDER_HTTP],
        help="Judge provider used when rescoring (heuristics only if omitted).")

    parser.add_argument(
        "--judge-model",
        type=str,
        help="Judge model name.")

    parser.add_argument(
        "--provider-config",
        type=str,
        help="Provider settings file (YAML).")

    parser.add_argument(
        "--stub-script",
        type=str,
        help="Scripted stub responses (stub.jsonl).")

    parser.add_argument(
        "-o", "--out",
        type=str,
        help="Output directory (defaults to the directory of the results file).")

    add_verbose_argument(parser)

    return parser


def main():

    parser = init_parser()

    args = parser.parse_args()

    setup_logging(args.verbose)

    check_files(args.results, args.questions, args.provider_config, args.stub_script)

    out_dir = args.out or os.path.dirname(os.path.abspath(args.results))

    try:
        gwqa = GWQA()

        gwqa.load_questions(args.questions)

        print("[+] Loading results...")

        records = read_results(args.results)

        if args.rescore:
            cfg = None

            if args.judge:
                settings = load_provider_settings(args.provider_config, judge_model=args.judge_model)

                judge_model = settings.effective_judge_model

                if not judge_model:
                    fail("No judge model given (use --judge-model)")

                gwqa.set_gateway(create_gateway(args.judge, settings, args.stub_script))

                cfg = RunConfig(label=LABEL_BASELINE, model=judge_model, judge_model=judge_model)

            print("[+] Scoring {} records...".format(len(records)))

            records = gwqa.score(records, cfg)

        print("[+] Writing report...")

        report, paths = gwqa.report(records, create_output_dir(out_dir))
    except SystemExit:
        raise
    except Exception as e:
        fail("{}".format(e))

    for label, block in report.labels.items():
        print_metrics(label, block["all"])

    print("[+] Report: {}".format(paths["markdown"]))


if __name__ == "__main__":

    main()
