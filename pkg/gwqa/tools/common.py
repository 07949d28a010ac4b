# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

import logging
import os
import sys

from gwqa.analysis.walk.walker import PACKING_PREFIX
from gwqa.analysis.walk.walker import PACKING_SKIP
from gwqa.config import DEFAULT_BUDGET
from gwqa.config import DEFAULT_MAX_DEPTH
from gwqa.gwqa import TOKENIZER_APPROXIMATE
from gwqa.gwqa import TOKENIZER_TIKTOKEN

LOG_FILENAME = "gwqa.log"
LOG_FORMAT = "%(asctime)s: %(name)s:%(levelname)s: %(message)s"


def setup_logging(verbose=False, filename=LOG_FILENAME):
    logging.basicConfig(
        filename=filename,
        format=LOG_FORMAT,
        filemode='w',
        level=logging.DEBUG if verbose else logging.INFO
    )


def add_verbose_argument(parser):
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Log debug messages to {}.".format(LOG_FILENAME))


def add_walk_arguments(parser):
    parser.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_BUDGET,
        help="Token budget of the compressed context.")

    parser.add_argument(
        "--max-depth",
        type=int,
        default=DEFAULT_MAX_DEPTH,
        help="Maximum BFS depth.")

    parser.add_argument(
        "--packing",
        type=str,
        default=PACKING_PREFIX,
        choices=[PACKING_PREFIX, PACKING_SKIP],
        help="Packing policy when an item overflows the budget.")

    parser.add_argument(
        "--tokenizer",
        type=str,
        default=TOKENIZER_APPROXIMATE,
        choices=[TOKENIZER_APPROXIMATE, TOKENIZER_TIKTOKEN],
        help="Token counter.")

    parser.add_argument(
        "--stopwords",
        type=str,
        help="Stop-word list file (one word per line).")


def check_files(*filenames):
    for filename in filenames:
        if filename and not os.path.isfile(filename):
            print("[-] File not found : {}".format(filename))

            sys.exit(1)


def fail(message):
    print("[-] {}".format(message))

    sys.exit(1)


def create_output_dir(name):
    if not os.path.exists(name):
        os.makedirs(name)

    return name


def print_metrics(label, block):
    def pct(value):
        return "-" if value is None else "{:.1f}".format(100.0 * value)

    print("    {:<12} n={:<5d} acc={:>5} f1={:>5} em={:>5} abstain={:>5} coverage={:>5}".format(
        label, block["n"], pct(block["accuracy"]), pct(block["f1"]), pct(block["em"]),
        pct(block["abstain_rate"]), pct(block["coverage"])))
