"""Command-line client for the corpus toolkit.

Every verb talks to the FastAPI service: by default an in-process
instance, or a running server when ``--server``/``LERKIT_SERVER`` is set.
Exit codes: 0 success, 1 validation or scoring failure, 2 usage error.
"""

from __future__ import annotations

import json
import sys
from typing import Any

import click
import httpx

from . import __version__


def _post_in_process(path: str, payload: dict) -> httpx.Response:
    """POST against an in-process service instance over ASGI."""
    import asyncio

    from .service.app import create_app

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://lerkit.internal", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _post(server: str | None, path: str, payload: dict) -> dict:
    try:
        if server:
            with httpx.Client(base_url=server, timeout=None) as client:
                response = client.post(path, json=payload)
        else:
            response = _post_in_process(path, payload)
    except httpx.ConnectError as exc:
        click.echo(f"error: cannot reach {server}: {exc}", err=True)
        sys.exit(1)
    if response.status_code != 200:
        try:
            detail: Any = response.json().get("detail")
        except ValueError:
            detail = response.text
        if isinstance(detail, dict):
            message = f"{detail.get('error', 'error')}: {detail.get('message', '')}"
        else:
            message = str(detail)
        click.echo(f"error: {message}", err=True)
        sys.exit(1)
    return response.json()


def _sources(paths: tuple[str, ...]) -> list[dict]:
    return [{"path": p} for p in paths]


def _provenance_line(provenance: dict) -> str:
    parts = [f"lerkit {provenance.get('toolkit_version', __version__)}"]
    for key in ("granularity", "policy", "seed"):
        if provenance.get(key) is not None:
            parts.append(f"{key}={provenance[key]}")
    return " | ".join(parts)


def _emit(doc: dict, fmt: str, text_key: str = "text_table") -> None:
    if fmt == "json":
        click.echo(json.dumps(doc, ensure_ascii=False, indent=2))
    else:
        click.echo(doc.get(text_key, ""), nl=False)
        click.echo(_provenance_line(doc.get("provenance", {})))


server_option = click.option(
    "--server",
    envvar="LERKIT_SERVER",
    default=None,
    help="Base URL of a running lerkit service; defaults to an in-process instance.",
)
granularity_option = click.option(
    "--granularity", type=click.Choice(["fine", "coarse"]), default="fine", show_default=True
)
policy_option = click.option(
    "--policy",
    type=click.Choice(["strict", "conlleval", "repair"]),
    default="conlleval",
    show_default=True,
)
lenient_option = click.option(
    "--lenient", is_flag=True, help="Accept unknown classes and extra columns."
)
separator_option = click.option(
    "--separator",
    type=click.Choice(["space", "tab"]),
    default="space",
    show_default=True,
    help="Column separator of the corpus files.",
)
format_option = click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True
)


def _sep(separator: str) -> str:
    return "\t" if separator == "tab" else " "


@click.group()
@click.version_option(__version__, prog_name="lerkit")
def main() -> None:
    """Corpus processing, fold splitting and entity-level scoring for the LER dataset."""


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path())
@server_option
@granularity_option
@lenient_option
@separator_option
@format_option
def validate(paths, server, granularity, lenient, separator, fmt) -> None:
    """Check corpus files line by line; exit 1 if any file has errors."""
    doc = _post(
        server,
        "/validate",
        {
            "files": _sources(paths),
            "granularity": granularity,
            "strict": not lenient,
            "separator": _sep(separator),
        },
    )
    if fmt == "json":
        click.echo(json.dumps(doc, ensure_ascii=False, indent=2))
    else:
        for entry in doc["files"]:
            click.echo(
                f"{entry['source']}: {entry['sentences']:,} sentences, "
                f"{entry['tokens']:,} tokens, {entry['errors']} errors, "
                f"{entry['warnings']} warnings"
            )
            for issue in entry["issues"]:
                line = f":{issue['line']}" if issue["line"] is not None else ""
                click.echo(f"  {issue['severity']}{line}: [{issue['kind']}] {issue['message']}")
        click.echo(_provenance_line(doc["provenance"]))
    if not doc["ok"]:
        sys.exit(1)


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path())
@server_option
@granularity_option
@policy_option
@lenient_option
@separator_option
@format_option
def stats(paths, server, granularity, policy, lenient, separator, fmt) -> None:
    """Corpus statistics: tokens/sentences per source, entities per class."""
    doc = _post(
        server,
        "/stats",
        {
            "files": _sources(paths),
            "granularity": granularity,
            "policy": policy,
            "strict": not lenient,
            "separator": _sep(separator),
        },
    )
    _emit(doc, fmt)


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path())
@server_option
@granularity_option
@lenient_option
@separator_option
@format_option
@click.option("-k", "--folds", "k", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option(
    "--stratify-on",
    type=click.Choice(["fine", "coarse", "source"]),
    default="fine",
    show_default=True,
)
@click.option("--allow-skew", is_flag=True, help="Record stratification violations instead of failing.")
@click.option("--out-manifest", type=click.Path(), help="Write the fold manifest JSON here.")
@click.option("--write-folds", "write_folds_dir", type=click.Path(), help="Materialize per-fold train/validation files in this directory.")
@click.option("--only-fold", "only_folds", type=int, multiple=True, help="Restrict materialization to these fold ids.")
def split(paths, server, granularity, lenient, separator, fmt, k, seed, stratify_on, allow_skew, out_manifest, write_folds_dir, only_folds) -> None:
    """Build a deterministic stratified k-fold manifest."""
    doc = _post(
        server,
        "/split",
        {
            "files": _sources(paths),
            "granularity": granularity,
            "strict": not lenient,
            "separator": _sep(separator),
            "k": k,
            "seed": seed,
            "stratify_on": stratify_on,
            "allow_skew": allow_skew,
            "out_manifest": out_manifest,
            "write_folds_dir": write_folds_dir,
            "folds": list(only_folds) or None,
        },
    )
    if fmt == "json":
        click.echo(json.dumps(doc, ensure_ascii=False, indent=2))
    else:
        manifest = doc["manifest"]
        click.echo(f"k={manifest['k']} seed={manifest['seed']} strategy={manifest['strategy']}")
        click.echo(f"checksum: {manifest['checksum']}")
        click.echo(f"fold sizes: {doc['fold_sizes']}")
        for warning in manifest["warnings"]:
            click.echo(f"warning: {warning}")
        for written in doc["written_files"]:
            click.echo(f"wrote {written}")
        click.echo(_provenance_line(doc["provenance"]))


@main.command()
@click.option("--gold", required=True, type=click.Path(), help="Gold-standard corpus file.")
@click.option("--pred", required=True, type=click.Path(), help="Predicted corpus file, token-aligned with gold.")
@server_option
@granularity_option
@policy_option
@lenient_option
@separator_option
@format_option
@click.option(
    "--baseline",
    type=click.Choice(["german-bert", "bilstm-crf"]),
    default=None,
    help="Also report per-class F1 deltas against this published reference column.",
)
@click.option("--out", "out_path", type=click.Path(), help="Write the JSON report here.")
def score(gold, pred, server, granularity, policy, lenient, separator, fmt, baseline, out_path) -> None:
    """Entity-level precision/recall/F1 of predictions against gold."""
    doc = _post(
        server,
        "/score",
        {
            "gold": {"path": gold},
            "pred": {"path": pred},
            "granularity": granularity,
            "policy": policy,
            "strict": not lenient,
            "separator": _sep(separator),
            "baseline": baseline,
        },
    )
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fp:
            json.dump(doc, fp, ensure_ascii=False, indent=2)
            fp.write("\n")
    _emit(doc, fmt)


@main.command("map-coarse")
@click.argument("in_path", type=click.Path())
@click.argument("out_path", type=click.Path())
@server_option
@lenient_option
@separator_option
def map_coarse(in_path, out_path, server, lenient, separator) -> None:
    """Rewrite a fine-grained corpus file with coarse-grained classes."""
    doc = _post(
        server,
        "/map-coarse",
        {
            "file": {"path": in_path},
            "strict": not lenient,
            "separator": _sep(separator),
            "out_path": out_path,
        },
    )
    click.echo(f"wrote {doc['out_path']} ({doc['sentences']:,} sentences, {doc['tokens']:,} tokens)")
    click.echo(_provenance_line(doc["provenance"]))


@main.command("chunk")
@click.argument("path", type=click.Path())
@server_option
@granularity_option
@policy_option
@lenient_option
@separator_option
@format_option
def chunk_cmd(path, server, granularity, policy, lenient, separator, fmt) -> None:
    """List the entity spans of every sentence in a corpus file."""
    doc = _post(
        server,
        "/chunk",
        {
            "file": {"path": path},
            "granularity": granularity,
            "policy": policy,
            "strict": not lenient,
            "separator": _sep(separator),
        },
    )
    if fmt == "json":
        click.echo(json.dumps(doc, ensure_ascii=False, indent=2))
    else:
        for sentence in doc["sentences"]:
            spans = " ".join(
                f"{s['label']}[{s['start']}:{s['end']}]" for s in sentence["spans"]
            )
            suffix = ""
            if sentence["repaired_positions"]:
                suffix = f"  (repaired at {sentence['repaired_positions']})"
            click.echo(f"{sentence['index']}: {spans}{suffix}")
        click.echo(_provenance_line(doc["provenance"]))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the scoring service."""
    import uvicorn

    uvicorn.run("lerkit.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
