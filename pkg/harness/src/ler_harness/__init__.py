"""Training harness for German legal NER.

Consumes the corpus toolkit purely through its external surfaces: CoNLL
corpus files, fold manifest JSON, and the ``lerkit`` CLI for validation
and scoring. Produces token-aligned prediction CoNLL files, segmentation
JSONL, and run metadata.
"""

__version__ = "0.1.0"
