from __future__ import annotations

import random
import subprocess

import pytest

from ler_harness.corpus import SentenceRecord, write_conll

ENTITY_PHRASES: dict[str, list[list[str]]] = {
    "GRT": [["Bundesarbeitsgericht"], ["Landgericht", "München"]],
    "GS": [["§", "9Abs.", "2Satz", "2ArbGG"], ["§", "242", "BGB"]],
    "RS": [["BAG", "Urteil", "vom", "12.01.2021"]],
    "PER": [["Müller"], ["Schmidt"]],
    "RR": [["Richter", "Weber"]],
    "INN": [["Bundesagentur", "für", "Arbeit"]],
    "UN": [["Siemens", "AG"]],
    "LD": [["Deutschland"]],
    "ST": [["Passau"]],
    "VO": [["Arbeitszeitverordnung"]],
    "LIT": [["Kommentar", "zum", "BGB"]],
    "VT": [["Tarifvertrag"]],
}

FILLER = (
    "Das Gericht hat die Klage mit Urteil abgewiesen und die Revision nicht "
    "zugelassen weil die Voraussetzungen nach Auffassung des Senats nicht "
    "vorliegen die Kosten des Verfahrens trägt der Kläger"
).split()


def build_sample_sentences(n: int = 60, seed: int = 5) -> list[SentenceRecord]:
    """Deterministic German-legal-flavoured corpus covering several classes."""
    rng = random.Random(seed)
    labels = sorted(ENTITY_PHRASES)
    sentences: list[SentenceRecord] = []
    for i in range(n):
        words: list[str] = []
        tags: list[str] = []
        words.extend(rng.sample(FILLER, 3))
        tags.extend(["O"] * 3)
        if i % 4 != 3:  # three sentences in four carry entities
            for label in rng.sample(labels, rng.randint(1, 2)):
                phrase = rng.choice(ENTITY_PHRASES[label])
                words.extend(phrase)
                tags.append(f"B-{label}")
                tags.extend([f"I-{label}"] * (len(phrase) - 1))
                filler = rng.choice(FILLER)
                words.append(filler)
                tags.append("O")
        words.extend(rng.sample(FILLER, 2))
        tags.extend(["O"] * 2)
        sentences.append(SentenceRecord(words, tags))
    return sentences


@pytest.fixture
def sample_sentences():
    return build_sample_sentences()


@pytest.fixture
def sample_corpus_path(tmp_path, sample_sentences):
    path = tmp_path / "sample.conll"
    write_conll(sample_sentences, path)
    return path


def run_lerkit(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        ["lerkit", *args], capture_output=True, text=True, check=False
    )
