# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

from .runner import LABELS
from .runner import PreflightError
from .runner import RoutingPolicy
from .runner import RunConfig
from .runner import UsageError
from .runner import emit_report
from .runner import run_config
from .runner import run_routing
from .runner import sample_questions
from .runner import score_records
