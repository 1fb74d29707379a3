from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import generators as gen
from lerkit.alignment import (
    IGNORE,
    IgnoreAtWordStartError,
    LengthMismatchError,
    SCHEMES,
    project_down,
    project_up,
    read_segmentations,
    write_segmentations,
)
from lerkit.chunking import chunk
from lerkit.labels import LabelTag, OUTSIDE, parse_tag


def tags(*texts: str) -> list[LabelTag]:
    return [parse_tag(t) for t in texts]


def test_first_piece_scheme():
    assert project_down(tags("B-GS", "I-GS"), [1, 3], "first-piece") == [
        LabelTag("B", "GS"),
        LabelTag("I", "GS"),
        IGNORE,
        IGNORE,
    ]


def test_propagate_outside():
    assert project_down(tags("O"), [2], "propagate") == [OUTSIDE, OUTSIDE]


def test_propagate_b_becomes_i_on_continuations():
    assert project_down(tags("B-GS", "I-GS"), [2, 1], "propagate") == [
        LabelTag("B", "GS"),
        LabelTag("I", "GS"),
        LabelTag("I", "GS"),
    ]


def test_project_up_takes_first_piece():
    sub = [LabelTag("B", "GS"), LabelTag("I", "GS"), LabelTag("I", "GS")]
    assert project_up(sub, [2, 1]) == tags("B-GS", "I-GS")


def test_project_up_rejects_ignore_at_word_start():
    with pytest.raises(IgnoreAtWordStartError) as err:
        project_up([IGNORE, OUTSIDE], [1, 1])
    assert err.value.word == 0


def test_length_mismatches():
    with pytest.raises(LengthMismatchError):
        project_down(tags("O", "O"), [1], "first-piece")
    with pytest.raises(LengthMismatchError):
        project_up([OUTSIDE], [1, 1])


def test_piece_counts_must_be_positive():
    with pytest.raises(ValueError):
        project_down(tags("O"), [0], "first-piece")
    with pytest.raises(ValueError):
        project_up([OUTSIDE], [0])


def test_unknown_scheme():
    with pytest.raises(ValueError):
        project_down(tags("O"), [1], "middle-piece")


@settings(max_examples=300)
@given(st.integers(0, 2**32 - 1), st.integers(1, 20))
def test_roundtrip_both_schemes(seed, n_words):
    rng = random.Random(seed)
    word_tags = gen.random_wellformed_tags(rng, n_words)
    pieces = [rng.randint(1, 4) for _ in range(n_words)]
    for scheme in SCHEMES:
        down = project_down(word_tags, pieces, scheme)
        assert len(down) == sum(pieces)
        up = project_up(down, pieces)
        assert up == word_tags


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1), st.integers(1, 20))
def test_chunking_commutes_with_roundtrip(seed, n_words):
    rng = random.Random(seed)
    word_tags = gen.random_wellformed_tags(rng, n_words)
    pieces = [rng.randint(1, 4) for _ in range(n_words)]
    recovered = project_up(project_down(word_tags, pieces, "first-piece"), pieces)
    assert chunk(recovered) == chunk(word_tags)


def test_first_piece_continuations_are_all_ignore():
    rng = random.Random(17)
    word_tags = gen.random_wellformed_tags(rng, 10)
    pieces = [rng.randint(1, 4) for _ in range(10)]
    down = project_down(word_tags, pieces, "first-piece")
    position = 0
    for tag, count in zip(word_tags, pieces):
        assert down[position] == tag
        for offset in range(1, count):
            assert down[position + offset] is IGNORE
        position += count


def test_segmentation_jsonl_roundtrip(tmp_path):
    segs = [[1, 3, 2], [4], [1, 1, 1, 1]]
    path = tmp_path / "segments.jsonl"
    write_segmentations(segs, path)
    assert read_segmentations(path) == segs
    content = path.read_text(encoding="utf-8")
    assert content == "[1, 3, 2]\n[4]\n[1, 1, 1, 1]\n"


def test_segmentation_jsonl_rejects_garbage(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"pieces": [1]}\n', encoding="utf-8")
    with pytest.raises(ValueError):
        read_segmentations(path)
