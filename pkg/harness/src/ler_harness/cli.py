"""CLI for fold training and full cross-validation runs."""

from __future__ import annotations

import subprocess
import sys

import click

from . import __version__
from .training import DEFAULT_MODEL, FoldResult, ModelLoadError, TrainConfig, run_cv, train_fold


def _config(kwargs) -> TrainConfig:
    return TrainConfig(
        corpus_files=list(kwargs["corpus"]),
        manifest=kwargs["manifest"],
        out_dir=kwargs["out_dir"],
        model=kwargs["model"],
        epochs=kwargs["epochs"],
        batch_size=kwargs["batch_size"],
        per_device_batch_size=kwargs["per_device_batch_size"],
        learning_rate=kwargs["learning_rate"],
        warmup_ratio=kwargs["warmup_ratio"],
        max_length=kwargs["max_length"],
        seed=kwargs["seed"],
        device=kwargs["device"],
        tiny_init=kwargs["tiny_init"],
    )


def common_options(command):
    options = [
        click.option("--corpus", multiple=True, required=True, type=click.Path(exists=True), help="Corpus CoNLL file; repeat per court file."),
        click.option("--manifest", required=True, type=click.Path(exists=True), help="Fold manifest JSON produced by 'lerkit split'."),
        click.option("--out-dir", required=True, type=click.Path(), help="Output directory for predictions, segmentations and metadata."),
        click.option("--model", default=DEFAULT_MODEL, show_default=True, help="Pretrained token-classification checkpoint."),
        click.option("--epochs", type=int, default=7, show_default=True),
        click.option("--batch-size", type=int, default=64, show_default=True, help="Effective batch size (gradient accumulation fills the gap)."),
        click.option("--per-device-batch-size", type=int, default=None, help="Micro batch per step; defaults to the effective batch size."),
        click.option("--learning-rate", type=float, default=3e-5, show_default=True),
        click.option("--warmup-ratio", type=float, default=0.1, show_default=True),
        click.option("--max-length", type=int, default=512, show_default=True),
        click.option("--seed", type=int, default=42, show_default=True),
        click.option("--device", default="cpu", show_default=True),
        click.option("--tiny-init", is_flag=True, help="Skip the pretrained download: small randomly initialized model with a corpus-derived vocabulary."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _report(result: FoldResult) -> None:
    click.echo(f"fold {result.fold}: wrote {result.predictions_path}")
    click.echo(f"fold {result.fold}: gold copy {result.gold_path}")
    click.echo(f"fold {result.fold}: segmentation {result.segmentation_path}")
    click.echo(
        f"fold {result.fold}: {result.train_seconds:.1f}s training, "
        f"{result.truncated_words} truncated words"
    )


@click.group()
@click.version_option(__version__, prog_name="ler-harness")
def main() -> None:
    """Fine-tune a German BERT token classifier over toolkit fold manifests."""


@main.command()
@common_options
@click.option("--fold", type=int, required=True, help="Held-out fold id.")
@click.option("--score/--no-score", default=False, help="Run 'lerkit score' on the predictions afterwards.")
def train(fold: int, score: bool, **kwargs) -> None:
    """Train one fold and emit its validation predictions."""
    try:
        result = train_fold(_config(kwargs), fold)
    except (ModelLoadError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    _report(result)
    if score:
        command = [
            "lerkit", "score",
            "--gold", result.gold_path,
            "--pred", result.predictions_path,
        ]
        click.echo("$ " + " ".join(command))
        sys.exit(subprocess.call(command))


@main.command("run-cv")
@common_options
def run_cv_command(**kwargs) -> None:
    """Train every fold in sequence."""
    try:
        results = run_cv(_config(kwargs))
    except (ModelLoadError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    for result in results:
        _report(result)


if __name__ == "__main__":
    main()
