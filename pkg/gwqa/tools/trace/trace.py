# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

import argparse

from pygments import highlight
from pygments.formatters import TerminalFormatter
from pygments.lexers import SparqlLexer

from gwqa.analysis.evaluation.report import read_results
from gwqa.analysis.prompts.sparql import parse_sparql_scaffold
from gwqa.tools.common import add_verbose_argument
from gwqa.tools.common import check_files
from gwqa.tools.common import fail
from gwqa.tools.common import setup_logging


def print_scaffold(record, color):
    scaffold = parse_sparql_scaffold(record.parsed.raw)

    print("[*] {} ({}, {})".format(record.question_id, record.label, record.method))

    if scaffold is None:
        print("    no SPARQL query found")
        return False

    text = scaffold.text

    if color:
        text = highlight(text, SparqlLexer(), TerminalFormatter()).rstrip("\n")

    for line in text.splitlines():
        print("    " + line)

    if scaffold.compliant:
        print("    compliant ({} triple patterns)".format(len(scaffold.triples)))
    else:
        print("    not compliant: {}".format(", ".join(scaffold.violations())))

    print("    final answer: {}".format(record.parsed.final))

    return scaffold.compliant


def init_parser():

    description = "Tool for inspecting the SPARQL scaffolds written by the model."

    parser = argparse.ArgumentParser(
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=description)

    parser.add_argument(
        "--results",
        type=str,
        required=True,
        help="Results file (results.jsonl).")

    parser.add_argument(
        "--label",
        type=str,
        help="Only show records of this configuration.")

    parser.add_argument(
        "--question",
        type=str,
        help="Only show this question id.")

    parser.add_argument(
        "--color",
        action="store_true",
        help="Highlight queries.")

    add_verbose_argument(parser)

    return parser


def main():

    parser = init_parser()

    args = parser.parse_args()

    setup_logging(args.verbose)

    check_files(args.results)

    try:
        records = read_results(args.results)
    except Exception as e:
        fail("Error reading results : {}".format(e))

    records = [r for r in records if r.scaffold_compliant is not None]

    if args.label:
        records = [r for r in records if r.label == args.label]

    if args.question:
        records = [r for r in records if r.question_id == args.question]

    compliant = 0

    for record in records:
        if print_scaffold(record, args.color):
            compliant += 1

    print("[+] Compliant scaffolds: {:d}/{:d}".format(compliant, len(records)))


if __name__ == "__main__":

    main()
