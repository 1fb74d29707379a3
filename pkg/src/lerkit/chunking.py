"""Conversion between IOB tag sequences and entity spans.

Spans are the unit of entity-level scoring, so the treatment of malformed
sequences (an I- tag with no open chunk) is pinned down here once, behind
an explicit policy:

* ``conlleval`` (default): an I- tag after O, or after a different class,
  opens a new chunk -- the behaviour of the classic CoNLL shared-task
  scorer.
* ``strict``: such a tag is an error.
* ``repair``: chunks exactly as ``conlleval``; the rewritten positions are
  available via :func:`repaired_positions` for reporting.
"""

from __future__ import annotations

from typing import Iterable, Literal, NamedTuple, Sequence

from .labels import LabelTag, OUTSIDE

ChunkPolicy = Literal["strict", "conlleval", "repair"]

POLICY_STRICT: ChunkPolicy = "strict"
POLICY_CONLLEVAL: ChunkPolicy = "conlleval"
POLICY_REPAIR: ChunkPolicy = "repair"

POLICIES: tuple[ChunkPolicy, ...] = (POLICY_STRICT, POLICY_CONLLEVAL, POLICY_REPAIR)


class EntitySpan(NamedTuple):
    """A contiguous entity mention: class plus inclusive token indices."""

    label: str
    start: int
    end: int


class MalformedSequenceError(ValueError):
    """Strict chunking hit an I- tag that does not continue a chunk."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class SpanError(ValueError):
    pass


def chunk(tags: Sequence[LabelTag], policy: ChunkPolicy = POLICY_CONLLEVAL) -> list[EntitySpan]:
    """Extract entity spans from one sentence's tags.

    Output spans never overlap and are sorted by start position.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown chunk policy: {policy!r}")
    spans: list[EntitySpan] = []
    open_label: str | None = None
    open_start = 0
    for i, tag in enumerate(tags):
        if tag.prefix == "O":
            if open_label is not None:
                spans.append(EntitySpan(open_label, open_start, i - 1))
                open_label = None
            continue
        if tag.prefix == "B":
            if open_label is not None:
                spans.append(EntitySpan(open_label, open_start, i - 1))
            open_label, open_start = tag.label, i
            continue
        # I- tag: continues an open chunk of the same class, otherwise the
        # sequence is malformed and the policy decides.
        if open_label == tag.label:
            continue
        if policy == POLICY_STRICT:
            raise MalformedSequenceError(
                f"I-{tag.label} at position {i} does not continue a chunk", i
            )
        if open_label is not None:
            spans.append(EntitySpan(open_label, open_start, i - 1))
        open_label, open_start = tag.label, i
    if open_label is not None:
        spans.append(EntitySpan(open_label, open_start, len(tags) - 1))
    return spans


def repaired_positions(tags: Sequence[LabelTag]) -> list[int]:
    """Indices where an I- tag opens a chunk, i.e. where conlleval chunking
    implicitly rewrites I- to B-."""
    positions: list[int] = []
    open_label: str | None = None
    for i, tag in enumerate(tags):
        if tag.prefix == "O":
            open_label = None
        elif tag.prefix == "B":
            open_label = tag.label
        else:
            if open_label != tag.label:
                positions.append(i)
            open_label = tag.label
    return positions


def unchunk(spans: Iterable[EntitySpan], length: int) -> list[LabelTag]:
    """Render spans back to tags: B- on the first token, I- on the rest.

    Inverse of :func:`chunk` under every policy.
    """
    ordered = sorted(spans, key=lambda s: (s.start, s.end))
    tags = [OUTSIDE] * length
    previous_end = -1
    for span in ordered:
        if span.start < 0 or span.end >= length or span.start > span.end:
            raise SpanError(f"span {span} does not fit a sentence of {length} tokens")
        if span.start <= previous_end:
            raise SpanError(f"span {span} overlaps its predecessor")
        tags[span.start] = LabelTag("B", span.label)
        for i in range(span.start + 1, span.end + 1):
            tags[i] = LabelTag("I", span.label)
        previous_end = span.end
    return tags
