# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

from .judge import judge_equivalence
from .judge import normalize_answer
from .metrics import coverage
from .metrics import exact_match
from .metrics import heuristic_match
from .metrics import squad_normalize
from .metrics import token_f1
from .report import AnswerRecord
from .report import EvalReport
from .report import JoinError
from .report import aggregate
from .report import decompose_errors
from .report import read_results
from .report import write_results
