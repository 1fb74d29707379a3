"""Tokenization, label alignment and the offline fallback tokenizer.

Labels follow the first-piece convention: the word's tag id sits on its
first subword piece, every other position (continuations and special
tokens) carries -100 and is excluded from the loss. Piece counts per word
are computed without truncation so the emitted segmentation file always
satisfies the one-piece-per-word minimum; truncation is tracked separately.
"""

from __future__ import annotations

import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import SentenceRecord

IGNORE_ID = -100


@dataclass
class EncodedSentence:
    input_ids: list[int]
    attention_mask: list[int]
    labels: list[int]  # first-piece label ids, IGNORE_ID elsewhere
    word_first_piece: list[int | None]  # model-input index of each word's first piece
    pieces_per_word: list[int]  # untruncated counts, >= 1 per word
    truncated_words: int


def build_tiny_tokenizer(sentences: Sequence[SentenceRecord], out_dir: str | Path | None = None):
    """WordPiece tokenizer built from the corpus itself; no network needed.

    Short words enter the vocabulary whole, longer ones as a 3-character
    stem plus a ``##`` continuation so the subword path gets exercised.
    Anything not covered falls back to [UNK], which is harmless here.
    """
    from transformers import BertTokenizerFast

    vocab: dict[str, None] = {}
    for special in ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"):
        vocab[special] = None
    for sentence in sentences:
        for word in sentence.words:
            lowered = word.lower()
            if len(lowered) <= 4:
                vocab.setdefault(lowered, None)
            else:
                vocab.setdefault(lowered[:3], None)
                vocab.setdefault("##" + lowered[3:], None)
    directory = Path(out_dir) if out_dir else Path(tempfile.mkdtemp(prefix="tiny-vocab-"))
    directory.mkdir(parents=True, exist_ok=True)
    vocab_file = directory / "vocab.txt"
    vocab_file.write_text("\n".join(vocab) + "\n", encoding="utf-8")
    return BertTokenizerFast(str(vocab_file), do_lower_case=True)


def _piece_counts(tokenizer, words: list[str]) -> list[int]:
    """Untruncated pieces per word; zero-piece words count as one ([UNK])."""
    encoding = tokenizer(words, is_split_into_words=True, add_special_tokens=False)
    counts = [0] * len(words)
    for word_id in encoding.word_ids(0):
        if word_id is not None:
            counts[word_id] += 1
    return [max(1, c) for c in counts]


def encode_sentence(
    tokenizer, sentence: SentenceRecord, label2id: dict[str, int], max_length: int
) -> EncodedSentence:
    words = sentence.words
    encoding = tokenizer(
        words,
        is_split_into_words=True,
        truncation=True,
        max_length=max_length,
    )
    input_ids = encoding["input_ids"]
    word_ids = encoding.word_ids(0)

    labels = [IGNORE_ID] * len(input_ids)
    word_first_piece: list[int | None] = [None] * len(words)
    previous = None
    for position, word_id in enumerate(word_ids):
        if word_id is not None and word_id != previous:
            word_first_piece[word_id] = position
            labels[position] = label2id[sentence.tags[word_id]]
        previous = word_id

    truncated = sum(1 for first in word_first_piece if first is None)
    return EncodedSentence(
        input_ids=input_ids,
        attention_mask=encoding["attention_mask"],
        labels=labels,
        word_first_piece=word_first_piece,
        pieces_per_word=_piece_counts(tokenizer, words),
        truncated_words=truncated,
    )


def encode_corpus(
    tokenizer,
    sentences: Sequence[SentenceRecord],
    label2id: dict[str, int],
    max_length: int,
) -> list[EncodedSentence]:
    return [encode_sentence(tokenizer, s, label2id, max_length) for s in sentences]
