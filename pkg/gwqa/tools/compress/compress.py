# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

import argparse
import os
import time

from gwqa.gwqa import GWQA
from gwqa.gwqa import create_counter
from gwqa.tools.common import add_verbose_argument
from gwqa.tools.common import add_walk_arguments
from gwqa.tools.common import check_files
from gwqa.tools.common import create_output_dir
from gwqa.tools.common import fail
from gwqa.tools.common import setup_logging

COMPRESSED_FILENAME = "compressed.jsonl"


def print_compression_status(question, compressed):
    stats = compressed.stats

    if compressed.fallback:
        print("    {}: no seeds, {} tokens (fallback)".format(question.id, stats["input_tokens"]))
    else:
        print("    {}: {} -> {} tokens ({:.1%})".format(
            question.id, stats["input_tokens"], stats["output_tokens"], stats["compression_ratio"]))


def init_parser():

    description = "Tool for compressing retrieved contexts with the graph walk."

    parser = argparse.ArgumentParser(
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=description)

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
        "-o", "--out",
        type=str,
        default=".",
        help="Output directory.")

    parser.add_argument(
        "--graph-dot",
        type=str,
        help="Write the walked subgraph of each question to this directory.")

    parser.add_argument(
        "-f", "--format",
        type=str,
        default="dot",
        choices=["pdf", "png", "dot", "svg"],
        help="Subgraph output format.")

    parser.add_argument(
        "-q", "--quiet",
        action="store_true",
        help="Do not print per-question status.")

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

    check_files(args.contexts, args.questions)

    process_start = time.time()

    try:
        gwqa = GWQA(counter=create_counter(args.tokenizer), stopwords=args.stopwords)

        print("[+] Loading knowledge graph...")

        gwqa.open(args.graph_dir)

        print("[+] Loading contexts and questions...")

        gwqa.load_contexts(args.contexts)
        gwqa.load_questions(args.questions)

        walk = gwqa.walk_config(max_depth=args.max_depth, budget_tokens=args.budget, packing=args.packing)

        print("[+] Compressing {} contexts...".format(len(gwqa.questions)))

        callback = None if args.quiet else print_compression_status

        results = gwqa.compress_all(walk, callback=callback)

        output_dir = create_output_dir(args.out)
        output_path = os.path.join(output_dir, COMPRESSED_FILENAME)

        with open(output_path, "w", encoding="utf-8") as f:
            for compressed in sorted(results, key=lambda c: c.question_id):
                f.write(compressed.to_json() + "\n")

        if args.graph_dot:
            print("[+] Rendering walked subgraphs...")

            dot_dir = create_output_dir(args.graph_dot)

            for question in gwqa.questions:
                gwqa.render_walk(question, walk, os.path.join(dot_dir, question.id), format=args.format)
    except SystemExit:
        raise
    except Exception as e:
        fail("{}".format(e))

    compressed_results = [c for c in results if not c.fallback]

    if compressed_results:
        ratio = sum(c.stats["compression_ratio"] for c in compressed_results) / len(compressed_results)

        print("[+] Mean compression ratio: {:.1%}".format(ratio))

    print("[+] Fallbacks: {:d}/{:d}".format(len(results) - len(compressed_results), len(results)))
    print("[+] Output: {}".format(output_path))

    process_end = time.time()

    if args.time:
        process_time = process_end - process_start

        print("[+] Process time: {:.3f}s".format(process_time))


if __name__ == "__main__":

    main()
