"""Published reference numbers for the LER corpus, embedded verbatim.

Two kinds of constants live here:

* per-class precision/recall/F1 of the two published models on the
  fine-grained classes -- the fine-tuned German BERT and the dataset
  authors' BiLSTM-CRF+ -- used by ``score --baseline`` comparisons. The
  ``better_f1`` field records which model the published comparison marked
  as the winner of each row. All values are stored exactly as printed,
  even where recomputing F1 from P/R would give a slightly different
  number (Landscape, BiLSTM-CRF+ side).
* the distribution's corpus statistics per federal court, used to diff
  measured ``stats`` output against the expected counts.
"""

from __future__ import annotations

from typing import NamedTuple

GERMAN_BERT = "german-bert"
BILSTM_CRF = "bilstm-crf"

BASELINE_MODELS = (GERMAN_BERT, BILSTM_CRF)


class ModelScore(NamedTuple):
    precision: float
    recall: float
    f1: float


class ReferenceRow(NamedTuple):
    german_bert: ModelScore
    bilstm_crf: ModelScore
    better_f1: str  # which model the published row marks as better

    def score(self, model: str) -> ModelScore:
        if model == GERMAN_BERT:
            return self.german_bert
        if model == BILSTM_CRF:
            return self.bilstm_crf
        raise KeyError(f"unknown reference model: {model!r}")


# fine class code -> published scores
REFERENCE_SCORES: dict[str, ReferenceRow] = {
    "PER": ReferenceRow(ModelScore(91.48, 91.09, 91.29), ModelScore(90.78, 92.24, 91.45), BILSTM_CRF),
    "RR": ReferenceRow(ModelScore(98.72, 99.53, 99.12), ModelScore(98.37, 99.21, 98.78), GERMAN_BERT),
    "AN": ReferenceRow(ModelScore(96.49, 85.94, 90.91), ModelScore(86.18, 90.59, 87.07), GERMAN_BERT),
    "LD": ReferenceRow(ModelScore(92.51, 94.20, 93.34), ModelScore(96.52, 96.81, 96.66), BILSTM_CRF),
    "ST": ReferenceRow(ModelScore(88.21, 89.92, 89.06), ModelScore(82.58, 89.06, 85.60), GERMAN_BERT),
    "STR": ReferenceRow(ModelScore(85.57, 81.37, 83.42), ModelScore(81.82, 75.78, 77.91), GERMAN_BERT),
    "LDS": ReferenceRow(ModelScore(68.49, 68.49, 68.49), ModelScore(78.50, 80.20, 78.25), BILSTM_CRF),
    "ORG": ReferenceRow(ModelScore(89.11, 92.22, 90.64), ModelScore(82.70, 80.18, 81.28), GERMAN_BERT),
    "UN": ReferenceRow(ModelScore(97.16, 97.37, 97.27), ModelScore(90.05, 88.11, 89.04), GERMAN_BERT),
    "INN": ReferenceRow(ModelScore(94.05, 94.05, 94.05), ModelScore(89.99, 92.40, 91.17), GERMAN_BERT),
    "GRT": ReferenceRow(ModelScore(97.30, 98.02, 97.66), ModelScore(97.72, 98.24, 97.98), BILSTM_CRF),
    "MRK": ReferenceRow(ModelScore(81.86, 54.57, 65.49), ModelScore(83.04, 76.25, 79.17), BILSTM_CRF),
    "GS": ReferenceRow(ModelScore(99.36, 99.23, 99.29), ModelScore(98.34, 98.51, 98.42), GERMAN_BERT),
    "VO": ReferenceRow(ModelScore(94.46, 96.72, 95.58), ModelScore(92.29, 92.96, 92.58), GERMAN_BERT),
    "EUN": ReferenceRow(ModelScore(95.36, 98.13, 96.73), ModelScore(92.16, 92.63, 92.37), GERMAN_BERT),
    "VS": ReferenceRow(ModelScore(89.94, 87.99, 88.95), ModelScore(85.14, 78.87, 81.63), GERMAN_BERT),
    "VT": ReferenceRow(ModelScore(96.52, 95.08, 95.79), ModelScore(92.00, 92.64, 92.31), GERMAN_BERT),
    "RS": ReferenceRow(ModelScore(99.25, 99.52, 99.39), ModelScore(96.70, 96.73, 96.71), GERMAN_BERT),
    "LIT": ReferenceRow(ModelScore(96.91, 95.57, 96.24), ModelScore(94.34, 93.94, 94.14), GERMAN_BERT),
}


class CourtStats(NamedTuple):
    documents: int
    tokens: int
    sentences: int


# court code (lowercased file stem in the distribution) -> published counts
REFERENCE_COURT_STATS: dict[str, CourtStats] = {
    "bag": CourtStats(107, 343_065, 12_791),
    "bfh": CourtStats(107, 276_233, 8_522),
    "bgh": CourtStats(108, 177_835, 5_858),
    "bpatg": CourtStats(107, 404_041, 12_016),
    "bsg": CourtStats(107, 302_161, 8_083),
    "bverfg": CourtStats(107, 305_889, 9_237),
    "bverwg": CourtStats(107, 347_824, 10_216),
}

REFERENCE_TOTALS = CourtStats(750, 2_157_048, 66_723)

# legal-domain entities (across NRM, REG, RS, LIT groups) in the full corpus
REFERENCE_LEGAL_ENTITIES = 39_872
REFERENCE_LEGAL_SHARE = 74.34
