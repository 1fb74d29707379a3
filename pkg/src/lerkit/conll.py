"""Reading, writing and measuring CoNLL-2002-style token-per-line corpora.

Wire format (canonical): UTF-8, one ``token SP tag`` pair per line with a
single ASCII space, a blank line after every sentence, at most one trailing
blank line. A tab-separated variant is accepted via ``separator``.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, NamedTuple

from .chunking import POLICY_CONLLEVAL, ChunkPolicy, chunk, repaired_positions
from .labels import (
    FINE_TO_COARSE,
    LEGAL_COARSE,
    Granularity,
    LabelTag,
    OUTSIDE,
    TagError,
    UnknownClassError,
    format_tag,
    parse_tag,
    to_coarse,
)


class Token(NamedTuple):
    text: str
    tag: LabelTag


@dataclass(frozen=True, slots=True)
class Sentence:
    tokens: tuple[Token, ...]
    source_id: str | None = None
    index: int = 0

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def texts(self) -> tuple[str, ...]:
        return tuple(t.text for t in self.tokens)

    @property
    def tags(self) -> tuple[LabelTag, ...]:
        return tuple(t.tag for t in self.tokens)


@dataclass(frozen=True, slots=True)
class Corpus:
    sentences: tuple[Sentence, ...]
    granularity: Granularity = "fine"

    def __len__(self) -> int:
        return len(self.sentences)

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)


class CorpusParseError(ValueError):
    """A line of a corpus file could not be interpreted."""

    def __init__(self, message: str, *, line: int, source_id: str | None = None, kind: str = "malformed-line"):
        where = f"{source_id or '<input>'}:{line}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.source_id = source_id
        self.kind = kind


def _strip_bom(text: str) -> str:
    return text[1:] if text.startswith("﻿") else text


def parse_corpus(
    text: str,
    granularity: Granularity = "fine",
    *,
    source_id: str | None = None,
    strict: bool = True,
    separator: str = " ",
    start_index: int = 0,
    tag_strict: bool | None = None,
) -> Corpus:
    """Parse corpus text into sentences, raising on the first bad line.

    Blank lines end a sentence; runs of blank lines collapse into one
    boundary and trailing blank lines are ignored. In strict mode a line
    must hold exactly two ``separator``-split fields; lenient mode takes
    the first whitespace field as token and the last as tag. ``tag_strict``
    overrides ``strict`` for class-membership checks alone.
    """
    if tag_strict is None:
        tag_strict = strict
    sentences: list[Sentence] = []
    tokens: list[Token] = []
    index = start_index
    for line_no, line in enumerate(_strip_bom(text).split("\n"), 1):
        if not line or line.isspace():
            if tokens:
                sentences.append(Sentence(tuple(tokens), source_id, index))
                tokens = []
                index += 1
            continue
        if strict:
            fields = line.split(separator)
            if len(fields) != 2 or not fields[0] or not fields[1]:
                raise CorpusParseError(
                    f"expected 'token{separator!r}tag', got {line!r}",
                    line=line_no,
                    source_id=source_id,
                )
            word, tag_text = fields
        else:
            fields = line.split()
            if len(fields) < 2:
                raise CorpusParseError(
                    f"expected at least two fields, got {line!r}",
                    line=line_no,
                    source_id=source_id,
                )
            word, tag_text = fields[0], fields[-1]
        try:
            tag = parse_tag(tag_text, granularity, tag_strict)
        except TagError as exc:
            raise CorpusParseError(
                str(exc),
                line=line_no,
                source_id=source_id,
                kind="unknown-class" if isinstance(exc, UnknownClassError) else "malformed-tag",
            ) from exc
        tokens.append(Token(word, tag))
    if tokens:
        sentences.append(Sentence(tuple(tokens), source_id, index))
    return Corpus(tuple(sentences), granularity)


def format_corpus(corpus: Corpus, *, separator: str = " ") -> str:
    """Serialize back to the wire format; inverse of :func:`parse_corpus`."""
    chunks: list[str] = []
    for sentence in corpus.sentences:
        lines = []
        for token in sentence.tokens:
            if separator in token.text or "\n" in token.text:
                raise ValueError(f"token {token.text!r} cannot be serialized")
            lines.append(f"{token.text}{separator}{format_tag(token.tag)}")
        chunks.append("\n".join(lines) + "\n\n")
    return "".join(chunks)


def write_corpus(corpus: Corpus, path: str | Path, *, separator: str = " ") -> None:
    Path(path).write_text(format_corpus(corpus, separator=separator), encoding="utf-8")


def read_corpus(
    path: str | Path,
    granularity: Granularity = "fine",
    *,
    strict: bool = True,
    separator: str = " ",
    source_id: str | None = None,
) -> Corpus:
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    return parse_corpus(
        text,
        granularity,
        source_id=source_id if source_id is not None else p.stem,
        strict=strict,
        separator=separator,
    )


def concat_corpora(corpora: Iterable[Corpus]) -> Corpus:
    """Concatenate corpora of one granularity, reindexing sentences densely."""
    corpora = list(corpora)
    if not corpora:
        return Corpus(())
    granularities = {c.granularity for c in corpora}
    if len(granularities) > 1:
        raise ValueError(f"cannot concatenate mixed granularities: {sorted(granularities)}")
    sentences: list[Sentence] = []
    for corpus in corpora:
        for sentence in corpus.sentences:
            sentences.append(replace(sentence, index=len(sentences)))
    return Corpus(tuple(sentences), corpora[0].granularity)


def read_corpus_files(
    paths: Iterable[str | Path],
    granularity: Granularity = "fine",
    *,
    strict: bool = True,
    separator: str = " ",
) -> Corpus:
    return concat_corpora(
        read_corpus(p, granularity, strict=strict, separator=separator) for p in paths
    )


def corpus_checksum(corpus: Corpus) -> str:
    """SHA-256 of the canonical serialization, used to pin fold manifests."""
    digest = hashlib.sha256(format_corpus(corpus).encode("utf-8"))
    return f"sha256:{digest.hexdigest()}"


def map_to_coarse(corpus: Corpus) -> Corpus:
    """Map every tag to its coarse class; already-coarse tags pass through."""
    mapped = tuple(
        replace(
            sentence,
            tokens=tuple(Token(t.text, to_coarse(t.tag)) for t in sentence.tokens),
        )
        for sentence in corpus.sentences
    )
    return Corpus(mapped, "coarse")


# --- statistics ---------------------------------------------------------


@dataclass(frozen=True, slots=True)
class SourceStats:
    documents: int | None  # per-document provenance is absent from CoNLL files
    tokens: int
    sentences: int


@dataclass(frozen=True, slots=True)
class CorpusStats:
    per_source: dict[str, SourceStats]
    total_tokens: int
    total_sentences: int
    per_class_entities: dict[str, int]
    granularity: Granularity
    policy: str = POLICY_CONLLEVAL

    @property
    def total_entities(self) -> int:
        return sum(self.per_class_entities.values())


def corpus_stats(corpus: Corpus, policy: ChunkPolicy = POLICY_CONLLEVAL) -> CorpusStats:
    """Token/sentence counts per source plus entity counts per class."""
    tokens_by_source: Counter[str] = Counter()
    sentences_by_source: Counter[str] = Counter()
    entities: Counter[str] = Counter()
    for sentence in corpus.sentences:
        key = sentence.source_id or ""
        tokens_by_source[key] += len(sentence)
        sentences_by_source[key] += 1
        for span in chunk(sentence.tags, policy):
            entities[span.label] += 1
    per_source = {
        key: SourceStats(None, tokens_by_source[key], sentences_by_source[key])
        for key in sorted(tokens_by_source)
    }
    return CorpusStats(
        per_source=per_source,
        total_tokens=sum(tokens_by_source.values()),
        total_sentences=len(corpus.sentences),
        per_class_entities=dict(sorted(entities.items())),
        granularity=corpus.granularity,
        policy=policy,
    )


def legal_entity_share(stats: CorpusStats) -> tuple[int, float]:
    """Entities in the legal coarse groups and their percentage of all entities.

    Works at either granularity; fine classes are mapped through their
    coarse group first. Returns ``(0, 0.0)`` for an entity-free corpus.
    """
    if stats.granularity == "fine":
        legal = sum(
            count
            for label, count in stats.per_class_entities.items()
            if FINE_TO_COARSE.get(label) in LEGAL_COARSE
        )
    else:
        legal = sum(
            count
            for label, count in stats.per_class_entities.items()
            if label in LEGAL_COARSE
        )
    total = stats.total_entities
    return legal, (100.0 * legal / total if total else 0.0)


# --- validation ---------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Issue:
    severity: str  # "error" | "warning"
    kind: str
    message: str
    line: int | None = None


@dataclass(slots=True)
class ValidationResult:
    source_id: str | None
    issues: list[Issue] = field(default_factory=list)
    sentences: int = 0
    tokens: int = 0

    @property
    def error_count(self) -> int:
        return sum(1 for i in self.issues if i.severity == "error")

    @property
    def warning_count(self) -> int:
        return sum(1 for i in self.issues if i.severity == "warning")


def validate_text(
    text: str,
    granularity: Granularity = "fine",
    *,
    strict: bool = True,
    separator: str = " ",
    source_id: str | None = None,
) -> tuple[Corpus, ValidationResult]:
    """Scan corpus text collecting every problem instead of stopping.

    Unparseable tags are recorded and replaced by ``O`` so counts stay
    meaningful; unparseable lines are recorded and skipped. Sentences whose
    IOB sequence needs conlleval-style repair produce warnings with the
    line of the offending token.
    """
    result = ValidationResult(source_id=source_id)
    sentences: list[Sentence] = []
    tokens: list[Token] = []
    token_lines: list[int] = []

    def flush() -> None:
        nonlocal tokens, token_lines
        if not tokens:
            return
        sentence = Sentence(tuple(tokens), source_id, len(sentences))
        for pos in repaired_positions(sentence.tags):
            result.issues.append(
                Issue(
                    "warning",
                    "iob-repair",
                    f"tag {format_tag(sentence.tokens[pos].tag)!r} opens a chunk at an I- position",
                    line=token_lines[pos],
                )
            )
        sentences.append(sentence)
        tokens, token_lines = [], []

    for line_no, line in enumerate(_strip_bom(text).split("\n"), 1):
        if not line or line.isspace():
            flush()
            continue
        if strict:
            fields = line.split(separator)
            ok = len(fields) == 2 and fields[0] and fields[1]
        else:
            fields = line.split()
            ok = len(fields) >= 2
        if not ok:
            result.issues.append(
                Issue("error", "malformed-line", f"expected 'token{separator}tag', got {line!r}", line=line_no)
            )
            continue
        word, tag_text = fields[0], fields[-1]
        try:
            tag = parse_tag(tag_text, granularity, strict)
        except TagError as exc:
            kind = "unknown-class" if isinstance(exc, UnknownClassError) else "malformed-tag"
            result.issues.append(Issue("error", kind, str(exc), line=line_no))
            tag = OUTSIDE
        tokens.append(Token(word, tag))
        token_lines.append(line_no)
    flush()

    corpus = Corpus(tuple(sentences), granularity)
    result.sentences = len(sentences)
    result.tokens = corpus.token_count
    if not sentences:
        result.issues.append(Issue("warning", "empty-file", "no sentences found"))
    return corpus, result
