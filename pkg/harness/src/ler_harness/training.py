"""Fine-tuning loop and prediction export.

Defaults follow the published protocol where it gives values (7 epochs,
effective batch size 64) and widely used token-classification settings
where it is silent (3e-5 learning rate, 10% linear warmup, max length 512,
overflow truncated with the affected words predicted as O and counted).
Every run writes a metadata JSON holding the exact configuration.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import torch
from torch.utils.data import DataLoader

from . import __version__
from .corpus import (
    SentenceRecord,
    collect_labels,
    load_manifest,
    read_conll_files,
    split_fold,
    write_conll,
)
from .encoding import EncodedSentence, IGNORE_ID, build_tiny_tokenizer, encode_corpus

DEFAULT_MODEL = "bert-base-german-cased"


@dataclass
class TrainConfig:
    corpus_files: list[str]
    manifest: str
    out_dir: str
    model: str = DEFAULT_MODEL
    epochs: int = 7
    batch_size: int = 64  # effective batch; reached via gradient accumulation
    per_device_batch_size: int | None = None
    learning_rate: float = 3e-5
    warmup_ratio: float = 0.1
    max_length: int = 512
    seed: int = 42
    device: str = "cpu"
    tiny_init: bool = False  # offline fallback: small random model + corpus vocab
    tiny_hidden_size: int = 64
    tiny_layers: int = 2

    def micro_batch(self) -> int:
        per_device = self.per_device_batch_size or self.batch_size
        return min(per_device, self.batch_size)

    def accumulation_steps(self) -> int:
        return math.ceil(self.batch_size / self.micro_batch())


@dataclass
class FoldResult:
    fold: int
    predictions_path: str
    gold_path: str
    segmentation_path: str
    metadata_path: str
    truncated_words: int
    train_seconds: float


class ModelLoadError(RuntimeError):
    """The pretrained checkpoint could not be loaded (offline, bad id...)."""


def set_seed(seed: int) -> None:
    random.seed(seed)
    torch.manual_seed(seed)


def build_model_and_tokenizer(config: TrainConfig, labels: list[str], corpus=None):
    label2id = {label: i for i, label in enumerate(labels)}
    id2label = {i: label for i, label in enumerate(labels)}
    if config.tiny_init:
        from transformers import BertConfig, BertForTokenClassification

        tokenizer = build_tiny_tokenizer(corpus)
        model_config = BertConfig(
            vocab_size=tokenizer.vocab_size,
            hidden_size=config.tiny_hidden_size,
            num_hidden_layers=config.tiny_layers,
            num_attention_heads=2,
            intermediate_size=config.tiny_hidden_size * 2,
            max_position_embeddings=config.max_length,
            num_labels=len(labels),
            id2label=id2label,
            label2id=label2id,
        )
        model = BertForTokenClassification(model_config)
        return model, tokenizer
    from transformers import AutoModelForTokenClassification, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(config.model)
        model = AutoModelForTokenClassification.from_pretrained(
            config.model,
            num_labels=len(labels),
            id2label=id2label,
            label2id=label2id,
        )
    except OSError as exc:
        raise ModelLoadError(
            f"cannot load {config.model!r} (no network or unknown id); "
            "pass --tiny-init for an offline randomly initialized model"
        ) from exc
    return model, tokenizer


def _collate(pad_token_id: int):
    def collate(batch: list[EncodedSentence]) -> dict[str, torch.Tensor]:
        width = max(len(item.input_ids) for item in batch)
        input_ids = torch.full((len(batch), width), pad_token_id, dtype=torch.long)
        attention = torch.zeros((len(batch), width), dtype=torch.long)
        labels = torch.full((len(batch), width), IGNORE_ID, dtype=torch.long)
        for row, item in enumerate(batch):
            n = len(item.input_ids)
            input_ids[row, :n] = torch.tensor(item.input_ids, dtype=torch.long)
            attention[row, :n] = torch.tensor(item.attention_mask, dtype=torch.long)
            labels[row, :n] = torch.tensor(item.labels, dtype=torch.long)
        return {"input_ids": input_ids, "attention_mask": attention, "labels": labels}

    return collate


def _linear_schedule(optimizer, warmup_steps: int, total_steps: int):
    def factor(step: int) -> float:
        if step < warmup_steps:
            return step / max(1, warmup_steps)
        remaining = total_steps - step
        return max(0.0, remaining / max(1, total_steps - warmup_steps))

    return torch.optim.lr_scheduler.LambdaLR(optimizer, factor)


def _train(model, encoded, config: TrainConfig, pad_token_id: int) -> None:
    device = torch.device(config.device)
    model.to(device)
    model.train()
    generator = torch.Generator().manual_seed(config.seed)
    loader = DataLoader(
        encoded,
        batch_size=config.micro_batch(),
        shuffle=True,
        generator=generator,
        collate_fn=_collate(pad_token_id),
    )
    accumulation = config.accumulation_steps()
    steps_per_epoch = math.ceil(len(loader) / accumulation)
    total_steps = steps_per_epoch * config.epochs
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
    scheduler = _linear_schedule(
        optimizer, int(config.warmup_ratio * total_steps), total_steps
    )
    for _ in range(config.epochs):
        optimizer.zero_grad()
        for micro_step, batch in enumerate(loader, 1):
            batch = {k: v.to(device) for k, v in batch.items()}
            loss = model(**batch).loss / accumulation
            loss.backward()
            if micro_step % accumulation == 0 or micro_step == len(loader):
                optimizer.step()
                scheduler.step()
                optimizer.zero_grad()


def _predict(
    model,
    encoded: list[EncodedSentence],
    sentences: list[SentenceRecord],
    config: TrainConfig,
    pad_token_id: int,
) -> list[SentenceRecord]:
    device = torch.device(config.device)
    id2label = model.config.id2label
    model.eval()
    predictions: list[SentenceRecord] = []
    collate = _collate(pad_token_id)
    with torch.no_grad():
        for start in range(0, len(encoded), config.micro_batch()):
            batch_items = encoded[start : start + config.micro_batch()]
            batch = collate(batch_items)
            logits = model(
                input_ids=batch["input_ids"].to(device),
                attention_mask=batch["attention_mask"].to(device),
            ).logits
            best = logits.argmax(dim=-1).cpu()
            for row, item in enumerate(batch_items):
                sentence = sentences[start + row]
                tags = []
                for word, first in enumerate(item.word_first_piece):
                    if first is None:  # truncated away: fall back to O
                        tags.append("O")
                    else:
                        tags.append(id2label[int(best[row, first])])
                predictions.append(SentenceRecord(list(sentence.words), tags))
    return predictions


def train_fold(config: TrainConfig, fold: int) -> FoldResult:
    """Fine-tune on nine folds, predict the held-out one, write artifacts."""
    set_seed(config.seed)
    sentences = read_conll_files(config.corpus_files)
    manifest = load_manifest(config.manifest, sentences)
    if not 0 <= fold < manifest["k"]:
        raise ValueError(f"fold {fold} not in [0, {manifest['k']})")
    train_sentences, val_sentences = split_fold(sentences, manifest["assignment"], fold)

    labels = collect_labels(sentences)
    label2id = {label: i for i, label in enumerate(labels)}
    model, tokenizer = build_model_and_tokenizer(config, labels, corpus=sentences)

    train_encoded = encode_corpus(tokenizer, train_sentences, label2id, config.max_length)
    val_encoded = encode_corpus(tokenizer, val_sentences, label2id, config.max_length)

    started = time.perf_counter()
    _train(model, train_encoded, config, tokenizer.pad_token_id)
    train_seconds = time.perf_counter() - started

    predictions = _predict(model, val_encoded, val_sentences, config, tokenizer.pad_token_id)
    truncated = sum(item.truncated_words for item in val_encoded)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    pred_path = out_dir / f"fold{fold:02d}.pred.conll"
    gold_path = out_dir / f"fold{fold:02d}.gold.conll"
    seg_path = out_dir / f"fold{fold:02d}.segments.jsonl"
    meta_path = out_dir / f"fold{fold:02d}.metadata.json"

    write_conll(predictions, pred_path)
    write_conll(val_sentences, gold_path)
    with open(seg_path, "w", encoding="utf-8") as fp:
        for item in val_encoded:
            fp.write(json.dumps(item.pieces_per_word) + "\n")

    metadata = {
        "harness_version": __version__,
        "fold": fold,
        "k": manifest["k"],
        "manifest_checksum": manifest["checksum"],
        "config": asdict(config),
        "effective_batch_size": config.batch_size,
        "micro_batch_size": config.micro_batch(),
        "gradient_accumulation_steps": config.accumulation_steps(),
        "labels": labels,
        "train_sentences": len(train_sentences),
        "validation_sentences": len(val_sentences),
        "truncated_validation_words": truncated,
        "train_seconds": round(train_seconds, 2),
        "torch_version": torch.__version__,
    }
    meta_path.write_text(json.dumps(metadata, indent=2) + "\n", encoding="utf-8")

    return FoldResult(
        fold=fold,
        predictions_path=str(pred_path),
        gold_path=str(gold_path),
        segmentation_path=str(seg_path),
        metadata_path=str(meta_path),
        truncated_words=truncated,
        train_seconds=train_seconds,
    )


def run_cv(config: TrainConfig) -> list[FoldResult]:
    """One training run per fold; prediction files partition the corpus."""
    sentences = read_conll_files(config.corpus_files)
    manifest = load_manifest(config.manifest, sentences)
    return [train_fold(config, fold) for fold in range(manifest["k"])]
