"""CoNLL wire-format I/O and fold manifest handling.

Deliberately self-contained: the harness talks to the toolkit through
files, so it carries its own minimal reader/writer for the
``token SP tag`` one-per-line format and recomputes the canonical corpus
checksum to verify manifests against the data it was handed.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Iterable, NamedTuple


class SentenceRecord(NamedTuple):
    words: list[str]
    tags: list[str]


def read_conll(path: str | Path) -> list[SentenceRecord]:
    sentences: list[SentenceRecord] = []
    words: list[str] = []
    tags: list[str] = []
    text = Path(path).read_text(encoding="utf-8")
    if text.startswith("﻿"):
        text = text[1:]
    for line_no, line in enumerate(text.split("\n"), 1):
        if not line or line.isspace():
            if words:
                sentences.append(SentenceRecord(words, tags))
                words, tags = [], []
            continue
        fields = line.split(" ")
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise ValueError(f"{path}:{line_no}: expected 'token tag', got {line!r}")
        words.append(fields[0])
        tags.append(fields[1])
    if words:
        sentences.append(SentenceRecord(words, tags))
    return sentences


def read_conll_files(paths: Iterable[str | Path]) -> list[SentenceRecord]:
    sentences: list[SentenceRecord] = []
    for path in paths:
        sentences.extend(read_conll(path))
    return sentences


def serialize(sentences: Iterable[SentenceRecord]) -> str:
    chunks = []
    for sentence in sentences:
        lines = [f"{w} {t}" for w, t in zip(sentence.words, sentence.tags)]
        chunks.append("\n".join(lines) + "\n\n")
    return "".join(chunks)


def write_conll(sentences: Iterable[SentenceRecord], path: str | Path) -> None:
    Path(path).write_text(serialize(sentences), encoding="utf-8")


def corpus_checksum(sentences: Iterable[SentenceRecord]) -> str:
    """Checksum over the canonical serialization, matching the toolkit's."""
    digest = hashlib.sha256(serialize(sentences).encode("utf-8"))
    return f"sha256:{digest.hexdigest()}"


def collect_labels(sentences: Iterable[SentenceRecord]) -> list[str]:
    """Deterministic label inventory: O first, the rest sorted."""
    seen = {tag for sentence in sentences for tag in sentence.tags}
    seen.discard("O")
    return ["O"] + sorted(seen)


def load_manifest(path: str | Path, sentences: list[SentenceRecord]) -> dict:
    """Read a fold manifest and verify it belongs to these sentences."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("version") != 1:
        raise ValueError(f"unsupported manifest version: {doc.get('version')!r}")
    assignment = doc["assignment"]
    if len(assignment) != len(sentences):
        raise ValueError(
            f"manifest covers {len(assignment)} sentences, corpus has {len(sentences)}"
        )
    checksum = corpus_checksum(sentences)
    if checksum != doc["checksum"]:
        raise ValueError(
            f"manifest was built from {doc['checksum']}, this corpus is {checksum}"
        )
    return doc


def split_fold(
    sentences: list[SentenceRecord], assignment: list[int], fold: int
) -> tuple[list[SentenceRecord], list[SentenceRecord]]:
    train = [s for s, f in zip(sentences, assignment) if f != fold]
    validation = [s for s, f in zip(sentences, assignment) if f == fold]
    return train, validation
