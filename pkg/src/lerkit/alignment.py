"""Projection of word-level IOB tags onto subword segmentations and back.

Transformer tokenizers split words into pieces while gold labels exist per
word. This module is tokenizer-agnostic: a segmentation is just the piece
count per word. Two schemes are supported:

* ``first-piece`` (default): the word's tag sits on its first piece,
  continuation pieces carry the ``IGNORE`` sentinel (excluded from loss).
* ``propagate``: B- turns into I- on continuation pieces, I- and O repeat.

Projecting back up always reads the first piece of each word, so both
schemes round-trip exactly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Literal, Sequence, Union

from .labels import LabelTag

Scheme = Literal["first-piece", "propagate"]

SCHEMES: tuple[Scheme, ...] = ("first-piece", "propagate")


class _IgnoreType:
    """Sentinel for subword positions that carry no trainable label."""

    _instance: "_IgnoreType | None" = None

    def __new__(cls) -> "_IgnoreType":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "IGNORE"


IGNORE = _IgnoreType()

SubwordLabel = Union[LabelTag, _IgnoreType]


class LengthMismatchError(ValueError):
    pass


class IgnoreAtWordStartError(ValueError):
    def __init__(self, word: int, piece: int):
        super().__init__(f"word {word} starts at piece {piece} with IGNORE")
        self.word = word
        self.piece = piece


def _check_segmentation(pieces_per_word: Sequence[int]) -> None:
    for i, count in enumerate(pieces_per_word):
        if count < 1:
            raise ValueError(f"word {i} has piece count {count}; every word needs at least 1")


def project_down(
    tags: Sequence[LabelTag],
    pieces_per_word: Sequence[int],
    scheme: Scheme = "first-piece",
) -> list[SubwordLabel]:
    """Spread word-level tags over subword pieces."""
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if len(tags) != len(pieces_per_word):
        raise LengthMismatchError(
            f"{len(tags)} tags for {len(pieces_per_word)} words"
        )
    _check_segmentation(pieces_per_word)
    labels: list[SubwordLabel] = []
    for tag, count in zip(tags, pieces_per_word):
        labels.append(tag)
        if count == 1:
            continue
        if scheme == "first-piece":
            labels.extend([IGNORE] * (count - 1))
        else:
            continuation = LabelTag("I", tag.label) if tag.prefix != "O" else tag
            labels.extend([continuation] * (count - 1))
    return labels


def project_up(
    labels: Sequence[SubwordLabel], pieces_per_word: Sequence[int]
) -> list[LabelTag]:
    """Recover word-level tags from subword labels via each word's first piece."""
    _check_segmentation(pieces_per_word)
    total = sum(pieces_per_word)
    if len(labels) != total:
        raise LengthMismatchError(f"{len(labels)} labels for {total} pieces")
    tags: list[LabelTag] = []
    position = 0
    for word, count in enumerate(pieces_per_word):
        first = labels[position]
        if isinstance(first, _IgnoreType):
            raise IgnoreAtWordStartError(word, position)
        tags.append(first)
        position += count
    return tags


def write_segmentations(
    segmentations: Iterable[Sequence[int]], path: str | Path
) -> None:
    """One JSON array of piece counts per sentence, one sentence per line."""
    with open(path, "w", encoding="utf-8") as fp:
        for seg in segmentations:
            fp.write(json.dumps(list(seg)) + "\n")


def read_segmentations(path: str | Path) -> list[list[int]]:
    segmentations: list[list[int]] = []
    with open(path, "r", encoding="utf-8") as fp:
        for line_no, line in enumerate(fp, 1):
            if not line.strip():
                continue
            seg = json.loads(line)
            if not isinstance(seg, list) or not all(isinstance(c, int) for c in seg):
                raise ValueError(f"line {line_no}: expected an array of piece counts")
            segmentations.append(seg)
    return segmentations
