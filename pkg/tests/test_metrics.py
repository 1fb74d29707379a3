from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import generators as gen
from reference_impls import brute_force_counts
from lerkit.chunking import chunk
from lerkit.conll import concat_corpora, map_to_coarse, parse_corpus
from lerkit.labels import format_tag, to_coarse
from lerkit.metrics import (
    ClassMetrics,
    GranularityMismatchError,
    ShapeMismatchError,
    aggregate_reports,
    compare_to_baseline,
    evaluate,
    render_report_text,
    report_to_dict,
    round2,
)
from lerkit.reference_scores import BILSTM_CRF, GERMAN_BERT, REFERENCE_SCORES


def _corpus(*sentence_tag_strings: str, granularity: str = "fine"):
    lines = []
    for tags in sentence_tag_strings:
        for i, tag in enumerate(tags.split()):
            lines.append(f"w{i} {tag}")
        lines.append("")
    return parse_corpus("\n".join(lines) + "\n", granularity)


def test_perfect_prediction(table_example_corpus):
    report = evaluate(table_example_corpus, table_example_corpus)
    for label in ("GRT", "GS"):
        metrics = report.per_class[label]
        assert (metrics.precision, metrics.recall, metrics.f1) == (100.0, 100.0, 100.0)
        assert metrics.support == 1
    assert report.micro.f1 == 100.0
    assert report.macro_f1 == 100.0


def test_partial_span_mismatch(table_example_corpus):
    pred = _corpus("O B-GRT O O B-GS I-GS I-GS O O")
    report = evaluate(table_example_corpus, pred)
    grt, gs = report.per_class["GRT"], report.per_class["GS"]
    assert (grt.tp, grt.fp, grt.fn) == (1, 0, 0)
    assert (gs.tp, gs.fp, gs.fn) == (0, 1, 1)
    assert (gs.precision, gs.recall, gs.f1) == (0.0, 0.0, 0.0)
    assert gs.undefined == ("f1",)
    micro = report.micro
    assert (round2(micro.precision), round2(micro.recall), round2(micro.f1)) == (50.0, 50.0, 50.0)


def test_two_sentence_micro():
    gold = _corpus("B-PER O O", "O B-GS I-GS")
    pred = _corpus("B-PER O O", "O O O")
    report = evaluate(gold, pred)
    micro = report.micro
    assert round2(micro.precision) == 100.0
    assert round2(micro.recall) == 50.0
    assert round2(micro.f1) == 66.67


def test_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        evaluate(_corpus("O O"), _corpus("O O", "O"))
    with pytest.raises(ShapeMismatchError):
        evaluate(_corpus("O O"), _corpus("O O O"))


def test_granularity_mismatch():
    with pytest.raises(GranularityMismatchError):
        evaluate(_corpus("O"), _corpus("O", granularity="coarse"))


def test_empty_corpus_is_all_undefined():
    report = evaluate(_corpus("O O"), _corpus("O O"))
    assert report.micro.undefined == ("precision", "recall", "f1")
    assert report.macro_f1 == 0.0


def test_support_is_gold_entity_count():
    gold = _corpus("B-GS O B-GS", "B-GS O O")
    pred = _corpus("O O O", "O O O")
    report = evaluate(gold, pred)
    assert report.per_class["GS"].support == 3
    assert report.per_class["GS"].recall == 0.0


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_swap_gold_pred_swaps_precision_recall(seed):
    rng = random.Random(seed)
    gold = gen.random_corpus(rng, wellformed=False)
    pred = gen.prediction_corpus(rng, gold)
    forward = evaluate(gold, pred)
    backward = evaluate(pred, gold)
    assert forward.micro.precision == pytest.approx(backward.micro.recall)
    assert forward.micro.recall == pytest.approx(backward.micro.precision)
    assert forward.micro.f1 == pytest.approx(backward.micro.f1)
    for label, metrics in forward.per_class.items():
        other = backward.per_class[label]
        assert metrics.precision == pytest.approx(other.recall)
        assert metrics.recall == pytest.approx(other.precision)


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_micro_counts_additive_over_concat(seed):
    rng = random.Random(seed)
    gold_a = gen.random_corpus(rng, wellformed=False)
    pred_a = gen.prediction_corpus(rng, gold_a)
    gold_b = gen.random_corpus(rng, wellformed=False)
    pred_b = gen.prediction_corpus(rng, gold_b)
    merged = evaluate(concat_corpora([gold_a, gold_b]), concat_corpora([pred_a, pred_b]))
    part_a = evaluate(gold_a, pred_a)
    part_b = evaluate(gold_b, pred_b)
    assert merged.micro.tp == part_a.micro.tp + part_b.micro.tp
    assert merged.micro.fp == part_a.micro.fp + part_b.micro.fp
    assert merged.micro.fn == part_a.micro.fn + part_b.micro.fn


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_brute_force_oracle(seed):
    rng = random.Random(seed)
    gold = gen.random_corpus(rng, max_sentences=5, max_tokens=10, wellformed=False)
    pred = gen.prediction_corpus(rng, gold)
    report = evaluate(gold, pred)
    expected = brute_force_counts(
        [[format_tag(t) for t in s.tags] for s in gold.sentences],
        [[format_tag(t) for t in s.tags] for s in pred.sentences],
    )
    for label, (tp, fp, fn) in expected.items():
        metrics = report.per_class[label]
        assert (metrics.tp, metrics.fp, metrics.fn) == (tp, fp, fn)
    for label, metrics in report.per_class.items():
        if label not in expected:
            assert (metrics.tp, metrics.fp, metrics.fn) == (0, 0, 0)


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_f1_between_min_and_max_of_p_r(seed):
    rng = random.Random(seed)
    gold = gen.random_corpus(rng, wellformed=False)
    pred = gen.prediction_corpus(rng, gold)
    report = evaluate(gold, pred)
    for metrics in list(report.per_class.values()) + [report.micro]:
        if "precision" in metrics.undefined or "recall" in metrics.undefined:
            continue
        if "f1" in metrics.undefined:
            continue
        low, high = sorted([metrics.precision, metrics.recall])
        assert low - 1e-9 <= metrics.f1 <= high + 1e-9


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_coarse_mapping_commutes_for_wellformed(seed):
    """For well-formed tags, mapping then chunking equals chunking then
    mapping the span labels, so coarse scoring is route-independent."""
    from lerkit.labels import FINE_TO_COARSE

    rng = random.Random(seed)
    gold = gen.random_corpus(rng, wellformed=True)
    for sentence in gold.sentences:
        mapped_then_chunked = {
            (s.label, s.start, s.end) for s in chunk([to_coarse(t) for t in sentence.tags])
        }
        chunked_then_mapped = {
            (FINE_TO_COARSE[s.label], s.start, s.end) for s in chunk(sentence.tags)
        }
        assert mapped_then_chunked == chunked_then_mapped
    coarse_report = evaluate(map_to_coarse(gold), map_to_coarse(gold))
    assert coarse_report.granularity == "coarse"


# --- baseline comparisons -------------------------------------------------


def test_reference_table_covers_exactly_the_fine_classes():
    from lerkit.labels import FINE_CLASSES

    assert set(REFERENCE_SCORES) == set(FINE_CLASSES)


def test_baseline_delta_law(table_example_corpus):
    report = evaluate(table_example_corpus, table_example_corpus)
    compared = compare_to_baseline(report, BILSTM_CRF)
    # GS (Law) scored 100.00 here; the reference column says 98.42
    assert compared.baseline.f1_deltas["GS"] == pytest.approx(1.58)


def test_baseline_delta_from_report_values():
    # synthetic report pinned to given F1 values
    per_class = {
        label: ClassMetrics(label, 1, 0, 0, 0.0, 0.0, 0.0, ())
        for label in REFERENCE_SCORES
    }
    per_class["GS"] = ClassMetrics("GS", 1, 0, 0, 99.36, 99.23, 99.29, ())
    per_class["RS"] = ClassMetrics("RS", 1, 0, 0, 99.25, 99.52, 99.39, ())
    from lerkit.metrics import _finish_report

    report = _finish_report(per_class, "conlleval", "fine", "single")
    compared = compare_to_baseline(report, BILSTM_CRF)
    assert compared.baseline.f1_deltas["GS"] == pytest.approx(0.87)
    assert compared.baseline.f1_deltas["RS"] == pytest.approx(2.68)


def test_baseline_self_comparison_is_zero():
    per_class = {
        label: ClassMetrics(
            label,
            1,
            0,
            0,
            row.german_bert.precision,
            row.german_bert.recall,
            row.german_bert.f1,
            (),
        )
        for label, row in REFERENCE_SCORES.items()
    }
    from lerkit.metrics import _finish_report

    report = _finish_report(per_class, "conlleval", "fine", "single")
    compared = compare_to_baseline(report, GERMAN_BERT)
    assert all(delta == 0.0 for delta in compared.baseline.f1_deltas.values())


def test_baseline_requires_fine_granularity():
    report = evaluate(_corpus("B-NRM", granularity="coarse"), _corpus("B-NRM", granularity="coarse"))
    with pytest.raises(GranularityMismatchError):
        compare_to_baseline(report, BILSTM_CRF)


def test_baseline_unknown_model(table_example_corpus):
    report = evaluate(table_example_corpus, table_example_corpus)
    with pytest.raises(ValueError):
        compare_to_baseline(report, "other-model")


def test_published_winner_flags():
    report = evaluate(_corpus("B-GS"), _corpus("B-GS"))
    compared = compare_to_baseline(report, BILSTM_CRF)
    flagged = set(compared.baseline.published_winner_elsewhere)
    # rows where the published bold F1 sits on the German BERT column
    assert "GS" in flagged and "RS" in flagged
    assert "LDS" not in flagged and "MRK" not in flagged
    assert len(flagged) == 14


# --- aggregation ----------------------------------------------------------


def _fold_reports():
    gold_a = _corpus("B-GS O", "B-PER O")
    pred_a = _corpus("B-GS O", "O O")
    gold_b = _corpus("B-GS O O")
    pred_b = _corpus("O B-GS O")
    return [evaluate(gold_a, pred_a), evaluate(gold_b, pred_b)]


def test_pooled_aggregation_sums_counts():
    pooled = aggregate_reports(_fold_reports(), "pooled")
    gs = pooled.per_class["GS"]
    assert (gs.tp, gs.fp, gs.fn) == (1, 1, 1)
    assert pooled.aggregation == "pooled"
    assert pooled.micro.tp == 1


def test_mean_aggregation_averages_percentages():
    reports = _fold_reports()
    mean = aggregate_reports(reports, "mean-of-folds")
    gs_values = [r.per_class["GS"].f1 for r in reports]
    assert mean.per_class["GS"].f1 == pytest.approx(sum(gs_values) / 2)
    assert mean.aggregation == "mean-of-folds"
    assert mean.macro_f1 == pytest.approx(
        (reports[0].macro_f1 + reports[1].macro_f1) / 2
    )


def test_aggregate_rejects_mixed_or_empty():
    with pytest.raises(ValueError):
        aggregate_reports([], "pooled")
    fine = evaluate(_corpus("B-GS"), _corpus("B-GS"))
    coarse = evaluate(
        _corpus("B-NRM", granularity="coarse"), _corpus("B-NRM", granularity="coarse")
    )
    with pytest.raises(ValueError):
        aggregate_reports([fine, coarse], "pooled")
    with pytest.raises(ValueError):
        aggregate_reports([fine], "median")


# --- rounding and rendering ----------------------------------------------


def test_round2_half_up():
    assert round2(0.125) == 0.13
    assert round2(99.285) == 99.29
    assert round2(66.66666) == 66.67
    assert round2(2 * 100 * 50 / 150) == 66.67
    assert round2(0.005) == 0.01


def test_report_dict_shape(table_example_corpus):
    report = compare_to_baseline(
        evaluate(table_example_corpus, table_example_corpus), BILSTM_CRF
    )
    doc = report_to_dict(report, provenance={"toolkit_version": "x"})
    assert doc["schema_version"] == 1
    assert doc["per_class"]["GS"]["support"] == 1
    assert doc["micro"]["tp"] == sum(m["tp"] for m in doc["per_class"].values())
    assert doc["baseline"]["model"] == BILSTM_CRF
    assert doc["provenance"] == {"toolkit_version": "x"}


def test_render_text_table(table_example_corpus):
    report = compare_to_baseline(
        evaluate(table_example_corpus, table_example_corpus), BILSTM_CRF
    )
    text = render_report_text(report)
    assert "Law" in text and "Court decision" in text
    assert "ALL (micro)" in text
    assert "Ref F1" in text
    assert "+1.58" in text  # GS delta against the reference column
