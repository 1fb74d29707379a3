"""Entity-level precision/recall/F1 and comparisons against published scores.

Matching is the strictest common standard: a predicted span counts as a
true positive only when a gold span with the same class, start and end
exists in the same sentence. Percentages with a zero denominator are
reported as 0.00 and flagged ``undefined`` instead of being dropped, so
the report shape is stable.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .chunking import ChunkPolicy, POLICY_CONLLEVAL, chunk
from .conll import Corpus
from .labels import FINE_CLASSES, Granularity, classes_for
from .reference_scores import BASELINE_MODELS, REFERENCE_SCORES

REPORT_SCHEMA_VERSION = 1

MICRO_LABEL = "ALL"


class ShapeMismatchError(ValueError):
    """Gold and predicted corpora do not line up token-for-token."""


class GranularityMismatchError(ValueError):
    pass


def round2(value: float) -> float:
    """Round half-up to two decimals, the display convention for scores."""
    return float(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True, slots=True)
class ClassMetrics:
    label: str
    tp: int
    fp: int
    fn: int
    precision: float  # percent; 0.0 when flagged undefined
    recall: float
    f1: float
    undefined: tuple[str, ...]

    @property
    def support(self) -> int:
        return self.tp + self.fn

    @classmethod
    def from_counts(cls, label: str, tp: int, fp: int, fn: int) -> "ClassMetrics":
        undefined: list[str] = []
        precision = recall = f1 = 0.0
        if tp + fp > 0:
            precision = 100.0 * tp / (tp + fp)
        else:
            undefined.append("precision")
        if tp + fn > 0:
            recall = 100.0 * tp / (tp + fn)
        else:
            undefined.append("recall")
        if precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            undefined.append("f1")
        return cls(label, tp, fp, fn, precision, recall, f1, tuple(undefined))


@dataclass(frozen=True, slots=True)
class BaselineComparison:
    model: str
    f1_deltas: dict[str, float]  # class -> report F1 minus reference F1
    published_winner_elsewhere: tuple[str, ...]  # rows whose published bold favors the other model


@dataclass(frozen=True, slots=True)
class EvaluationReport:
    per_class: dict[str, ClassMetrics]
    micro: ClassMetrics
    macro_f1: float
    policy: ChunkPolicy
    granularity: Granularity
    aggregation: str = "single"  # single | pooled | mean-of-folds
    baseline: BaselineComparison | None = None


def _class_order(granularity: Granularity, observed: Iterable[str]) -> list[str]:
    schema = list(classes_for(granularity))
    extras = sorted(set(observed) - set(schema))
    return schema + extras


def evaluate(
    gold: Corpus, predicted: Corpus, policy: ChunkPolicy = POLICY_CONLLEVAL
) -> EvaluationReport:
    """Score predicted against gold at the entity-span level."""
    if gold.granularity != predicted.granularity:
        raise GranularityMismatchError(
            f"gold is {gold.granularity}, predicted is {predicted.granularity}"
        )
    if len(gold) != len(predicted):
        raise ShapeMismatchError(
            f"sentence counts differ: gold {len(gold)}, predicted {len(predicted)}"
        )
    tp: dict[str, int] = defaultdict(int)
    fp: dict[str, int] = defaultdict(int)
    fn: dict[str, int] = defaultdict(int)
    for gold_sentence, pred_sentence in zip(gold.sentences, predicted.sentences):
        if len(gold_sentence) != len(pred_sentence):
            raise ShapeMismatchError(
                f"sentence {gold_sentence.index}: token counts differ "
                f"(gold {len(gold_sentence)}, predicted {len(pred_sentence)})"
            )
        gold_spans = set(chunk(gold_sentence.tags, policy))
        pred_spans = set(chunk(pred_sentence.tags, policy))
        for span in gold_spans & pred_spans:
            tp[span.label] += 1
        for span in pred_spans - gold_spans:
            fp[span.label] += 1
        for span in gold_spans - pred_spans:
            fn[span.label] += 1
    observed = set(tp) | set(fp) | set(fn)
    per_class = {
        label: ClassMetrics.from_counts(label, tp[label], fp[label], fn[label])
        for label in _class_order(gold.granularity, observed)
    }
    return _finish_report(per_class, policy, gold.granularity, "single")


def _finish_report(
    per_class: dict[str, ClassMetrics],
    policy: ChunkPolicy,
    granularity: Granularity,
    aggregation: str,
) -> EvaluationReport:
    micro = ClassMetrics.from_counts(
        MICRO_LABEL,
        sum(m.tp for m in per_class.values()),
        sum(m.fp for m in per_class.values()),
        sum(m.fn for m in per_class.values()),
    )
    supported = [m.f1 for m in per_class.values() if m.support > 0]
    macro_f1 = sum(supported) / len(supported) if supported else 0.0
    return EvaluationReport(per_class, micro, macro_f1, policy, granularity, aggregation)


def compare_to_baseline(report: EvaluationReport, model: str) -> EvaluationReport:
    """Attach per-class F1 deltas against one published reference column.

    Deltas are computed on display-rounded F1 so they match what a reader
    of the rendered tables would calculate. Classes where the published
    comparison marked the *other* model as the better one are listed in
    ``published_winner_elsewhere``.
    """
    if model not in BASELINE_MODELS:
        raise ValueError(f"unknown reference model {model!r}; expected one of {BASELINE_MODELS}")
    if report.granularity != "fine":
        raise GranularityMismatchError("reference scores exist only for fine-grained classes")
    deltas: dict[str, float] = {}
    flagged: list[str] = []
    for label, row in REFERENCE_SCORES.items():
        metrics = report.per_class.get(label)
        measured = round2(metrics.f1) if metrics is not None else 0.0
        deltas[label] = round2(measured - row.score(model).f1)
        if row.better_f1 != model:
            flagged.append(label)
    comparison = BaselineComparison(model, deltas, tuple(flagged))
    return replace(report, baseline=comparison)


def aggregate_reports(
    reports: Sequence[EvaluationReport], method: str = "pooled"
) -> EvaluationReport:
    """Combine per-fold reports.

    ``pooled`` sums tp/fp/fn over folds and recomputes the ratios;
    ``mean-of-folds`` averages the percentages over the folds where the
    class occurs at all (gold support or predictions present), counting
    flagged-undefined components as their reported 0.0. Counts are summed
    either way. The result's ``aggregation`` field records which
    convention produced it.
    """
    if not reports:
        raise ValueError("no reports to aggregate")
    policies = {r.policy for r in reports}
    granularities = {r.granularity for r in reports}
    if len(policies) > 1 or len(granularities) > 1:
        raise ValueError("cannot aggregate reports with mixed policy or granularity")
    policy, granularity = reports[0].policy, reports[0].granularity
    labels = _class_order(granularity, (l for r in reports for l in r.per_class))

    if method == "pooled":
        per_class = {}
        for label in labels:
            rows = [r.per_class[label] for r in reports if label in r.per_class]
            per_class[label] = ClassMetrics.from_counts(
                label,
                sum(m.tp for m in rows),
                sum(m.fp for m in rows),
                sum(m.fn for m in rows),
            )
        return _finish_report(per_class, policy, granularity, "pooled")

    if method == "mean-of-folds":
        per_class = {}
        for label in labels:
            rows = [r.per_class[label] for r in reports if label in r.per_class]
            per_class[label] = _mean_metrics(label, rows)
        micro = _mean_metrics(MICRO_LABEL, [r.micro for r in reports])
        macro_f1 = sum(r.macro_f1 for r in reports) / len(reports)
        return EvaluationReport(per_class, micro, macro_f1, policy, granularity, "mean-of-folds")

    raise ValueError(f"unknown aggregation method: {method!r}")


def _mean_metrics(label: str, rows: Sequence[ClassMetrics]) -> ClassMetrics:
    tp = sum(m.tp for m in rows)
    fp = sum(m.fp for m in rows)
    fn = sum(m.fn for m in rows)
    occurring = [m for m in rows if m.support > 0 or m.tp + m.fp > 0]
    if not occurring:
        return ClassMetrics(label, tp, fp, fn, 0.0, 0.0, 0.0, ("precision", "recall", "f1"))
    return ClassMetrics(
        label,
        tp,
        fp,
        fn,
        sum(m.precision for m in occurring) / len(occurring),
        sum(m.recall for m in occurring) / len(occurring),
        sum(m.f1 for m in occurring) / len(occurring),
        (),
    )


# --- serialization ------------------------------------------------------


def _metrics_to_dict(metrics: ClassMetrics) -> dict:
    return {
        "tp": metrics.tp,
        "fp": metrics.fp,
        "fn": metrics.fn,
        "support": metrics.support,
        "precision": round2(metrics.precision),
        "recall": round2(metrics.recall),
        "f1": round2(metrics.f1),
        "undefined": list(metrics.undefined),
    }


def report_to_dict(report: EvaluationReport, provenance: dict | None = None) -> dict:
    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "granularity": report.granularity,
        "policy": report.policy,
        "aggregation": report.aggregation,
        "per_class": {label: _metrics_to_dict(m) for label, m in report.per_class.items()},
        "micro": _metrics_to_dict(report.micro),
        "macro_f1": round2(report.macro_f1),
    }
    if report.baseline is not None:
        doc["baseline"] = {
            "model": report.baseline.model,
            "f1_deltas": {k: round2(v) for k, v in report.baseline.f1_deltas.items()},
            "published_winner_elsewhere": list(report.baseline.published_winner_elsewhere),
        }
    if provenance:
        doc["provenance"] = provenance
    return doc


def render_report_text(report: EvaluationReport) -> str:
    """Plain-text score table, one row per class in schema order."""
    names = dict(FINE_CLASSES) if report.granularity == "fine" else {}
    header = f"{'Class':<22} {'Precision':>9} {'Recall':>9} {'F1':>9} {'Support':>8}"
    baseline = report.baseline
    if baseline is not None:
        header += f" {'Ref F1':>9} {'dF1':>8}"
    rule = "-" * len(header)
    lines = [header, rule]
    for label, m in report.per_class.items():
        display = names.get(label, label)
        row = (
            f"{display:<22} {round2(m.precision):>9.2f} {round2(m.recall):>9.2f} "
            f"{round2(m.f1):>9.2f} {m.support:>8}"
        )
        if baseline is not None and label in baseline.f1_deltas:
            ref = REFERENCE_SCORES[label].score(baseline.model).f1
            row += f" {ref:>9.2f} {baseline.f1_deltas[label]:>+8.2f}"
        lines.append(row)
    lines.append(rule)
    m = report.micro
    lines.append(
        f"{'ALL (micro)':<22} {round2(m.precision):>9.2f} {round2(m.recall):>9.2f} "
        f"{round2(m.f1):>9.2f} {m.support:>8}"
    )
    lines.append(f"{'Macro F1':<22} {'':>9} {'':>9} {round2(report.macro_f1):>9.2f}")
    lines.append(f"aggregation: {report.aggregation}; policy: {report.policy}")
    if baseline is not None and baseline.published_winner_elsewhere:
        flagged = ", ".join(baseline.published_winner_elsewhere)
        lines.append(f"published comparison favors the other model on: {flagged}")
    return "\n".join(lines) + "\n"
