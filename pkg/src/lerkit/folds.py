"""Deterministic stratified k-fold partitioning of corpus sentences.

A sentence carries any number of entity classes, so plain stratified
splitting is ill-defined; this module uses greedy iterative stratification
over entity counts: process classes from rarest (fewest sentences still
unassigned) to most common, sending each sentence to the fold with the
greatest remaining need for that class. Ties fall to the smallest fold,
then to a seeded draw. Sentences without entities are spread last, purely
to level fold sizes.

The resulting manifest pins (k, seed, strategy, corpus checksum) and is
byte-identical across runs with identical inputs.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path

from .chunking import POLICY_CONLLEVAL, chunk
from .conll import Corpus, Sentence, corpus_checksum
from .labels import FINE_TO_COARSE

MANIFEST_VERSION = 1

DEFAULT_SEED = 42

STRATIFY_CHOICES = ("fine", "coarse", "source")


class TooFewSentencesError(ValueError):
    pass


class StratificationSkewError(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__(
            "fold distribution misses the stratification tolerance "
            f"({len(violations)} violations); pass allow_skew to accept:\n  "
            + "\n  ".join(violations)
        )
        self.violations = violations


class ChecksumMismatchError(ValueError):
    pass


class FoldOutOfRangeError(IndexError):
    pass


@dataclass(frozen=True, slots=True)
class FoldManifest:
    version: int
    k: int
    seed: int
    strategy: str
    checksum: str
    assignment: tuple[int, ...]  # sentence index -> fold id
    warnings: tuple[str, ...] = ()

    def fold_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for fold in self.assignment:
            sizes[fold] += 1
        return sizes

    def to_json(self) -> str:
        doc = {
            "version": self.version,
            "k": self.k,
            "seed": self.seed,
            "strategy": self.strategy,
            "checksum": self.checksum,
            "warnings": list(self.warnings),
            "assignment": list(self.assignment),
        }
        return json.dumps(doc, ensure_ascii=False, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "FoldManifest":
        doc = json.loads(text)
        if doc.get("version") != MANIFEST_VERSION:
            raise ValueError(f"unsupported manifest version: {doc.get('version')!r}")
        return cls(
            version=doc["version"],
            k=doc["k"],
            seed=doc["seed"],
            strategy=doc["strategy"],
            checksum=doc["checksum"],
            assignment=tuple(doc["assignment"]),
            warnings=tuple(doc.get("warnings", ())),
        )


def write_manifest(manifest: FoldManifest, path: str | Path) -> None:
    Path(path).write_text(manifest.to_json(), encoding="utf-8")


def read_manifest(path: str | Path) -> FoldManifest:
    return FoldManifest.from_json(Path(path).read_text(encoding="utf-8"))


def _sentence_strata(sentence: Sentence, corpus: Corpus, stratify_on: str) -> Counter[str]:
    if stratify_on == "source":
        return Counter({sentence.source_id or "": 1})
    counts: Counter[str] = Counter(
        span.label for span in chunk(sentence.tags, POLICY_CONLLEVAL)
    )
    if stratify_on == "coarse" and corpus.granularity == "fine":
        coarse: Counter[str] = Counter()
        for label, count in counts.items():
            coarse[FINE_TO_COARSE.get(label, label)] += count
        return coarse
    return counts


def make_folds(
    corpus: Corpus,
    k: int,
    seed: int = DEFAULT_SEED,
    *,
    stratify_on: str = "fine",
    allow_skew: bool = False,
) -> FoldManifest:
    """Partition sentences into k folds, balancing per-class entity counts.

    Deterministic for identical (corpus bytes, k, seed, stratify_on).
    Raises :class:`StratificationSkewError` when a class distribution
    misses the tolerance (20% relative for classes with at least 10*k
    entities, 2 absolute otherwise) unless ``allow_skew`` is set, in which
    case the violations are recorded as manifest warnings.
    """
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    n = len(corpus)
    if n < k:
        raise TooFewSentencesError(f"cannot build {k} folds from {n} sentences")
    if stratify_on not in STRATIFY_CHOICES:
        raise ValueError(f"stratify_on must be one of {STRATIFY_CHOICES}")

    rng = random.Random(seed)
    strata = [_sentence_strata(s, corpus, stratify_on) for s in corpus.sentences]
    totals: Counter[str] = Counter()
    for counts in strata:
        totals.update(counts)

    need: dict[str, list[float]] = {label: [total / k] * k for label, total in totals.items()}
    remaining: dict[str, set[int]] = {label: set() for label in totals}
    for sid, counts in enumerate(strata):
        for label in counts:
            remaining[label].add(sid)

    assignment = [-1] * n
    fold_sizes = [0] * k

    def place(sid: int, fold: int) -> None:
        assignment[sid] = fold
        fold_sizes[fold] += 1
        for label, count in strata[sid].items():
            need[label][fold] -= count
            remaining[label].discard(sid)

    def pick_fold(candidates: list[int]) -> int:
        if len(candidates) == 1:
            return candidates[0]
        smallest = min(fold_sizes[f] for f in candidates)
        candidates = [f for f in candidates if fold_sizes[f] == smallest]
        if len(candidates) == 1:
            return candidates[0]
        return candidates[rng.randrange(len(candidates))]

    while True:
        pending = [label for label, ids in remaining.items() if ids]
        if not pending:
            break
        # rarest class first: hardest to balance, so it gets first pick
        label = min(pending, key=lambda c: (len(remaining[c]), c))
        for sid in sorted(remaining[label]):
            best_need = max(need[label])
            place(sid, pick_fold([f for f in range(k) if need[label][f] == best_need]))

    for sid in range(n):
        if assignment[sid] != -1:
            continue
        smallest = min(fold_sizes)
        place(sid, pick_fold([f for f in range(k) if fold_sizes[f] == smallest]))

    if 0 in fold_sizes:
        raise RuntimeError("internal error: a fold received no sentences")

    warnings = _quality_warnings(strata, assignment, totals, k)
    size_spread = max(fold_sizes) - min(fold_sizes)
    if size_spread > 1:
        warnings.append(f"fold sizes differ by {size_spread} (sizes {fold_sizes})")
    violations = [w for w in warnings if w.startswith("class ")]
    if violations and not allow_skew:
        raise StratificationSkewError(violations)

    return FoldManifest(
        version=MANIFEST_VERSION,
        k=k,
        seed=seed,
        strategy=f"iterative-entity-stratification/{stratify_on}",
        checksum=corpus_checksum(corpus),
        assignment=tuple(assignment),
        warnings=tuple(warnings),
    )


def _quality_warnings(
    strata: list[Counter[str]], assignment: list[int], totals: Counter[str], k: int
) -> list[str]:
    per_fold: dict[str, list[int]] = {label: [0] * k for label in totals}
    for sid, counts in enumerate(strata):
        fold = assignment[sid]
        for label, count in counts.items():
            per_fold[label][fold] += count
    warnings: list[str] = []
    for label in sorted(totals):
        total = totals[label]
        ideal = total / k
        tolerance = 0.2 * ideal if total >= 10 * k else 2.0
        for fold, count in enumerate(per_fold[label]):
            if abs(count - ideal) > tolerance:
                warnings.append(
                    f"class {label}: fold {fold} holds {count} of {total} "
                    f"(ideal {ideal:.1f}, tolerance {tolerance:.1f})"
                )
    return warnings


def split(
    corpus: Corpus, manifest: FoldManifest, fold: int, *, verify_checksum: bool = True
) -> tuple[Corpus, Corpus]:
    """Materialize (train, validation) corpora for one fold.

    Validation holds the sentences assigned to ``fold``; train holds all
    others. Original corpus order is preserved on both sides.
    """
    if not 0 <= fold < manifest.k:
        raise FoldOutOfRangeError(f"fold {fold} not in [0, {manifest.k})")
    if len(manifest.assignment) != len(corpus):
        raise ChecksumMismatchError(
            f"manifest covers {len(manifest.assignment)} sentences, corpus has {len(corpus)}"
        )
    if verify_checksum:
        actual = corpus_checksum(corpus)
        if actual != manifest.checksum:
            raise ChecksumMismatchError(
                f"manifest was built from {manifest.checksum}, corpus is {actual}"
            )
    train: list[Sentence] = []
    validation: list[Sentence] = []
    for sentence, assigned in zip(corpus.sentences, manifest.assignment):
        target = validation if assigned == fold else train
        target.append(replace(sentence, index=len(target)))
    return (
        Corpus(tuple(train), corpus.granularity),
        Corpus(tuple(validation), corpus.granularity),
    )
