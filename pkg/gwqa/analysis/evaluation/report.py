# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
Evaluation Report.

Aggregates scored answer records per run label:

    all          : accuracy, F1, EM, abstain rate and coverage over every record
    covered      : the same metrics over records whose gold answer appears
                   in the retrieved context
    decomposition: errors, covered errors and the reasoning share of errors
    by_type      : metrics per question type
    by_hops      : metrics per hop count

and the paired deltas between every two labels, computed over the question
ids both labels share.

"""
import itertools
import json
import logging

from dataclasses import dataclass
from dataclasses import field

from gwqa.analysis.prompts.parser import ParsedAnswer

logger = logging.getLogger(__name__)

MATCH_HEURISTIC = "heuristic"
MATCH_JUDGE = "judge"
MATCH_NONE = "none"

COVERAGE_ORIGINAL = "original"
COVERAGE_SENT = "sent"

UNKNOWN_TYPE = "unknown"


class JoinError(Exception):

    def __init__(self, ids):
        self.ids = sorted(ids)

        super(JoinError, self).__init__(
            "no question metadata for: {}".format(", ".join(self.ids)))


@dataclass(frozen=True)
class AnswerRecord:
    question_id: str
    label: str
    parsed: ParsedAnswer
    covered: bool
    covered_original: bool
    correct: bool = None
    match_method: str = MATCH_NONE
    f1: float = 0.0
    em: bool = False
    route: str = None
    method: str = None
    tokens_in: int = 0
    tokens_out: int = 0
    calls: int = 0
    short_answer: str = None
    scaffold_compliant: bool = None
    walk_stats: dict = None
    error: str = None

    def __post_init__(self):
        if self.parsed.abstained and self.correct:
            raise ValueError("record {}: an abstention cannot be correct".format(self.question_id))

    @property
    def answer(self):
        """The answer that is scored.
        """
        if self.short_answer is not None:
            return self.short_answer

        return self.parsed.final

    @property
    def scored(self):
        return self.correct is not None

    def to_dict(self):
        return {
            "question_id": self.question_id,
            "label": self.label,
            "parsed": self.parsed.to_dict(),
            "covered": self.covered,
            "covered_original": self.covered_original,
            "correct": self.correct,
            "match_method": self.match_method,
            "f1": self.f1,
            "em": self.em,
            "route": self.route,
            "method": self.method,
            "tokens_in": self.tokens_in,
            "tokens_out": self.tokens_out,
            "calls": self.calls,
            "short_answer": self.short_answer,
            "scaffold_compliant": self.scaffold_compliant,
            "walk_stats": self.walk_stats,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, record):
        data = dict(record)
        data["parsed"] = ParsedAnswer.from_dict(record["parsed"])

        return cls(**data)


def write_results(records, path, label_order=None):
    """Write records to a results.jsonl file, sorted by label and question id.
    """
    with open(path, "w", encoding="utf-8") as f:
        for record in sort_records(records, label_order):
            f.write(json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")


def read_results(path):
    records = []

    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.strip():
                records.append(AnswerRecord.from_dict(json.loads(line)))

    logger.info("Loaded %d records from %s", len(records), path)

    return records


def sort_records(records, label_order=None):
    labels = _ordered_labels(records, label_order)

    return sorted(records, key=lambda r: (labels.index(r.label), r.question_id))


def _ordered_labels(records, label_order=None):
    present = set(r.label for r in records)
    order = [label for label in (label_order or []) if label in present]

    return order + sorted(present - set(order))


def _rate(count, total):
    if total == 0:
        return None

    return float(count) / total


def _mean(values):
    values = list(values)

    if not values:
        return None

    return sum(values) / float(len(values))


def _is_covered(record, basis):
    if basis == COVERAGE_SENT:
        return record.covered

    return record.covered_original


def metrics(records):
    """Return the metric block of a set of records.
    """
    records = list(records)
    n = len(records)

    return {
        "n": n,
        "accuracy": _rate(len([r for r in records if r.correct is True]), n),
        "f1": _mean(r.f1 for r in records),
        "em": _rate(len([r for r in records if r.em]), n),
        "abstain_rate": _rate(len([r for r in records if r.parsed.abstained]), n),
        "coverage": _rate(len([r for r in records if r.covered]), n),
        "coverage_original": _rate(len([r for r in records if r.covered_original]), n),
        "extraction_failed": len([r for r in records if r.parsed.extraction_failed]),
        "unscored": len([r for r in records if r.correct is None]),
    }


def decompose_errors(records, basis=COVERAGE_ORIGINAL):
    """Split the errors of a run into retrieval and reasoning failures.

    An error is any record not scored correct. A reasoning failure is an
    error whose gold answer was in the context. The reasoning share is
    None when there are no errors.
    """
    records = list(records)

    errors = [r for r in records if r.correct is not True]
    covered_errors = [r for r in errors if _is_covered(r, basis)]

    return {
        "errors": len(errors),
        "covered_errors": len(covered_errors),
        "reasoning_share": _rate(len(covered_errors), len(errors)),
        "covered": metrics(r for r in records if _is_covered(r, basis)),
    }


def _breakdown(records, key):
    groups = {}

    for record in records:
        groups.setdefault(key(record), []).append(record)

    return dict((name, metrics(group)) for name, group in sorted(groups.items()))


def _label_block(records, questions_by_id):
    decomposition = decompose_errors(records)

    sparql_records = [r for r in records if r.scaffold_compliant is not None]

    routes = {}

    for record in records:
        if record.route is not None:
            routes[record.route] = routes.get(record.route, 0) + 1

    return {
        "all": metrics(records),
        "covered": decomposition.pop("covered"),
        "decomposition": decomposition,
        "by_type": _breakdown(records, lambda r: questions_by_id[r.question_id].qtype or UNKNOWN_TYPE),
        "by_hops": _breakdown(records, lambda r: str(questions_by_id[r.question_id].hops or UNKNOWN_TYPE)),
        "scaffold_compliance": _rate(len([r for r in sparql_records if r.scaffold_compliant]), len(sparql_records)),
        "routes": dict(sorted(routes.items())),
        "calls": sum(r.calls for r in records),
    }


def _pp(a, b):
    if a is None or b is None:
        return None

    return 100.0 * (b - a)


def paired_delta(base_records, other_records):
    """Return the deltas of `other` over `base` on their shared question ids.
    """
    base = dict((r.question_id, r) for r in base_records)
    other = dict((r.question_id, r) for r in other_records)

    ids = sorted(set(base) & set(other))

    base_metrics = metrics(base[i] for i in ids)
    other_metrics = metrics(other[i] for i in ids)

    return {
        "n": len(ids),
        "accuracy_pp": _pp(base_metrics["accuracy"], other_metrics["accuracy"]),
        "f1_pp": _pp(base_metrics["f1"], other_metrics["f1"]),
        "em_pp": _pp(base_metrics["em"], other_metrics["em"]),
        "abstain_pp": _pp(base_metrics["abstain_rate"], other_metrics["abstain_rate"]),
    }


@dataclass
class EvalReport:
    labels: dict = field(default_factory=dict)
    deltas: list = field(default_factory=list)
    cost: dict = field(default_factory=dict)

    def to_dict(self):
        return {"labels": self.labels, "deltas": self.deltas, "cost": self.cost}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_markdown(self):
        return render_markdown(self)


def aggregate(records, questions, label_order=None, cost=None):
    """Aggregate scored records into an EvalReport.
    """
    records = list(records)
    questions_by_id = dict((q.id, q) for q in questions)

    missing = set(r.question_id for r in records if r.question_id not in questions_by_id)

    if missing:
        raise JoinError(missing)

    labels = _ordered_labels(records, label_order)

    by_label = dict((label, [r for r in records if r.label == label]) for label in labels)

    report = EvalReport(cost=dict(cost or {}))

    for label in labels:
        report.labels[label] = _label_block(by_label[label], questions_by_id)

    for base, other in itertools.combinations(labels, 2):
        delta = paired_delta(by_label[base], by_label[other])

        if delta["n"] == 0:
            logger.warning("Labels %s and %s share no question ids", base, other)
            continue

        delta.update({"base": base, "other": other})

        report.deltas.append(delta)

    return report


# Markdown rendering
# ============================================================================ #
def _pct(value):
    if value is None:
        return "-"

    return "{:.1f}".format(100.0 * value)


def _signed(value):
    if value is None:
        return "-"

    return "{:+.1f}".format(value)


def _table(header, rows):
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join("---" for _ in header) + "|",
    ]

    for row in rows:
        lines.append("| " + " | ".join(str(cell) for cell in row) + " |")

    return "\n".join(lines)


def _breakdown_table(title, label, breakdown):
    rows = [
        [name, block["n"], _pct(block["accuracy"]), _pct(block["f1"]), _pct(block["em"]), _pct(block["coverage"])]
        for name, block in breakdown.items()
    ]

    return "### {}: {}\n\n".format(title, label) + _table([title, "n", "Acc", "F1", "EM", "Coverage"], rows)


def render_markdown(report):
    """Render a report as Markdown tables.
    """
    parts = ["# Results (%)"]

    rows = []

    for label, block in report.labels.items():
        a, c = block["all"], block["covered"]

        rows.append([
            label,
            _pct(a["accuracy"]), _pct(a["f1"]), _pct(a["em"]),
            _pct(c["accuracy"]), _pct(c["f1"]), _pct(c["em"]),
            _pct(a["abstain_rate"]), a["n"], a["unscored"],
        ])

    parts.append(_table(["Config", "All Acc", "All F1", "All EM", "Covered Acc", "Covered F1", "Covered EM",
                         "Abstain", "n", "Unscored"], rows))

    parts.append("## Error decomposition")

    rows = []

    for label, block in report.labels.items():
        d = block["decomposition"]

        rows.append([
            label,
            _pct(block["all"]["coverage_original"]), _pct(block["all"]["coverage"]),
            _pct(block["all"]["accuracy"]), d["errors"], d["covered_errors"], _pct(d["reasoning_share"]),
        ])

    parts.append(_table(["Config", "Coverage", "Coverage (sent)", "Acc", "Errors", "Covered errors",
                         "Reasoning share"], rows))

    if report.deltas:
        parts.append("## Paired deltas (pp)")

        rows = [
            [d["other"] + " vs " + d["base"], d["n"], _signed(d["accuracy_pp"]), _signed(d["f1_pp"]),
             _signed(d["em_pp"]), _signed(d["abstain_pp"])]
            for d in report.deltas
        ]

        parts.append(_table(["Comparison", "n", "Acc", "F1", "EM", "Abstain"], rows))

    parts.append("## Breakdowns")

    for label, block in report.labels.items():
        parts.append(_breakdown_table("Type", label, block["by_type"]))
        parts.append(_breakdown_table("Hops", label, block["by_hops"]))

    compliance = [(label, b["scaffold_compliance"]) for label, b in report.labels.items()
                  if b["scaffold_compliance"] is not None]

    if compliance:
        parts.append("## SPARQL scaffold compliance")
        parts.append(_table(["Config", "Compliant"], [[label, _pct(rate)] for label, rate in compliance]))

    if report.cost:
        parts.append("## Cost")

        rows = [
            [label, c.get("calls", 0), c.get("prompt_tokens", 0), c.get("completion_tokens", 0),
             "{:.4f}".format(c["cost"]) if "cost" in c else "-"]
            for label, c in sorted(report.cost.items())
        ]

        parts.append(_table(["Config", "Calls", "Prompt tokens", "Completion tokens", "Cost"], rows))

    return "\n\n".join(parts) + "\n"
