"""Corpus toolkit for German legal NER over the LER dataset.

Core pieces: CoNLL-2002 I/O (:mod:`lerkit.conll`), IOB chunking
(:mod:`lerkit.chunking`), entity-level scoring (:mod:`lerkit.metrics`),
stratified k-fold splitting (:mod:`lerkit.folds`), subword label alignment
(:mod:`lerkit.alignment`). A FastAPI service (:mod:`lerkit.service`) wraps
the library; the ``lerkit`` CLI is a thin client of that service.
"""

from .alignment import IGNORE, project_down, project_up
from .chunking import (
    ChunkPolicy,
    EntitySpan,
    MalformedSequenceError,
    POLICY_CONLLEVAL,
    POLICY_REPAIR,
    POLICY_STRICT,
    chunk,
    repaired_positions,
    unchunk,
)
from .conll import (
    Corpus,
    CorpusStats,
    Sentence,
    Token,
    concat_corpora,
    corpus_checksum,
    corpus_stats,
    format_corpus,
    legal_entity_share,
    map_to_coarse,
    parse_corpus,
    read_corpus,
    read_corpus_files,
    validate_text,
    write_corpus,
)
from .folds import FoldManifest, make_folds, read_manifest, split, write_manifest
from .labels import (
    COARSE_CLASSES,
    FINE_CLASSES,
    FINE_TO_COARSE,
    LabelTag,
    OUTSIDE,
    format_tag,
    parse_tag,
    to_coarse,
)
from .metrics import (
    ClassMetrics,
    EvaluationReport,
    aggregate_reports,
    compare_to_baseline,
    evaluate,
    render_report_text,
    report_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "IGNORE",
    "project_down",
    "project_up",
    "ChunkPolicy",
    "EntitySpan",
    "MalformedSequenceError",
    "POLICY_CONLLEVAL",
    "POLICY_REPAIR",
    "POLICY_STRICT",
    "chunk",
    "repaired_positions",
    "unchunk",
    "Corpus",
    "CorpusStats",
    "Sentence",
    "Token",
    "concat_corpora",
    "corpus_checksum",
    "corpus_stats",
    "format_corpus",
    "legal_entity_share",
    "map_to_coarse",
    "parse_corpus",
    "read_corpus",
    "read_corpus_files",
    "validate_text",
    "write_corpus",
    "FoldManifest",
    "make_folds",
    "read_manifest",
    "split",
    "write_manifest",
    "COARSE_CLASSES",
    "FINE_CLASSES",
    "FINE_TO_COARSE",
    "LabelTag",
    "OUTSIDE",
    "format_tag",
    "parse_tag",
    "to_coarse",
    "ClassMetrics",
    "EvaluationReport",
    "aggregate_reports",
    "compare_to_baseline",
    "evaluate",
    "render_report_text",
    "report_to_dict",
    "__version__",
]
