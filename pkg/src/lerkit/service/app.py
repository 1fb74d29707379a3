"""FastAPI service wrapping the corpus toolkit.

Endpoints mirror the CLI verbs one-to-one; the CLI is a thin client of
this app. Corpora arrive either as server-side paths or inline text, and
every response embeds provenance (toolkit version, option values, input
digests) so reported numbers stay traceable.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..chunking import chunk, repaired_positions
from ..conll import (
    Corpus,
    concat_corpora,
    corpus_stats,
    format_corpus,
    legal_entity_share,
    map_to_coarse,
    parse_corpus,
    validate_text,
)
from ..folds import make_folds, split, write_manifest
from ..labels import parse_tag
from ..metrics import compare_to_baseline, evaluate, render_report_text, report_to_dict
from ..reference_scores import (
    REFERENCE_COURT_STATS,
    REFERENCE_LEGAL_ENTITIES,
    REFERENCE_LEGAL_SHARE,
    REFERENCE_TOTALS,
)
from . import schemas as sc


def _digest(data: bytes) -> str:
    return f"sha256:{hashlib.sha256(data).hexdigest()}"


def _source_name(source: sc.CorpusSource, ordinal: int) -> str:
    if source.source_id:
        return source.source_id
    if source.path:
        return Path(source.path).stem
    return f"inline-{ordinal}"


def _read_source(
    source: sc.CorpusSource, ordinal: int, inputs: dict[str, str], key: str | None = None
) -> tuple[str, str]:
    """Return (name, text) and record the input digest under ``key``."""
    name = _source_name(source, ordinal)
    if source.path is not None:
        path = Path(source.path)
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"no such file: {source.path}")
        data = path.read_bytes()
        inputs[key or name] = _digest(data)
        return name, data.decode("utf-8")
    assert source.text is not None
    inputs[key or name] = _digest(source.text.encode("utf-8"))
    return name, source.text


def _load_corpus(
    source: sc.CorpusSource,
    ordinal: int,
    inputs: dict[str, str],
    *,
    granularity: str,
    strict: bool,
    separator: str,
    key: str | None = None,
) -> Corpus:
    name, text = _read_source(source, ordinal, inputs, key)
    return parse_corpus(
        text, granularity, source_id=name, strict=strict, separator=separator
    )


def _load_many(
    sources: list[sc.CorpusSource],
    inputs: dict[str, str],
    *,
    granularity: str,
    strict: bool,
    separator: str,
) -> Corpus:
    return concat_corpora(
        _load_corpus(s, i, inputs, granularity=granularity, strict=strict, separator=separator)
        for i, s in enumerate(sources)
    )


def _render_stats_table(response: sc.StatsResponse) -> str:
    width = 47
    lines = [
        f"{'Source':<12} {'Documents':>10} {'Tokens':>12} {'Sentences':>10}",
        "-" * width,
    ]
    for row in response.per_source:
        documents = "n/a" if row.documents is None else f"{row.documents:,}"
        lines.append(
            f"{row.source:<12} {documents:>10} {row.tokens:>12,} {row.sentences:>10,}"
        )
    lines.append("-" * width)
    lines.append(
        f"{'Total':<12} {'n/a':>10} {response.total_tokens:>12,} {response.total_sentences:>10,}"
    )
    lines.append("")
    lines.append(f"Entities per class ({response.provenance.policy} chunking):")
    for label, count in response.per_class_entities.items():
        lines.append(f"  {label:<6} {count:>10,}")
    lines.append(f"Total entities: {response.total_entities:,}")
    legal = response.legal
    lines.append(
        f"Legal-domain entities (NRM+REG+RS+LIT): {legal.entities:,} ({legal.share_percent:.2f}%)"
    )
    if legal.reference_entities is not None:
        lines.append(
            f"  expected for the full distribution: {legal.reference_entities:,} "
            f"({legal.reference_share_percent:.2f}%)"
        )
    if response.drift:
        lines.append("")
        lines.append("Drift against the published reference counts:")
        for entry in response.drift:
            lines.append(f"  {entry}")
    return "\n".join(lines) + "\n"


def create_app() -> FastAPI:
    app = FastAPI(
        title="lerkit",
        description="Corpus processing and entity-level scoring for German legal NER",
        version=__version__,
    )

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={"detail": {"error": type(exc).__name__, "message": str(exc)}},
        )

    @app.exception_handler(FileNotFoundError)
    async def _not_found(request: Request, exc: FileNotFoundError) -> JSONResponse:
        return JSONResponse(
            status_code=404,
            content={"detail": {"error": "FileNotFoundError", "message": str(exc)}},
        )

    @app.get("/health", response_model=sc.HealthResponse)
    def health() -> sc.HealthResponse:
        return sc.HealthResponse(status="ok", version=__version__)

    @app.get("/schemas/{name}")
    def schema(name: str) -> dict:
        try:
            text = resources.files("lerkit.schemas").joinpath(f"{name}.schema.json").read_text()
        except FileNotFoundError:
            raise HTTPException(status_code=404, detail=f"no schema named {name!r}")
        return json.loads(text)

    @app.post("/validate", response_model=sc.ValidateResponse)
    def validate(request: sc.ValidateRequest) -> sc.ValidateResponse:
        inputs: dict[str, str] = {}
        files: list[sc.FileValidation] = []
        for i, source in enumerate(request.files):
            name, text = _read_source(source, i, inputs)
            _, result = validate_text(
                text,
                request.granularity,
                strict=request.strict,
                separator=request.separator,
                source_id=name,
            )
            files.append(
                sc.FileValidation(
                    source=name,
                    sentences=result.sentences,
                    tokens=result.tokens,
                    errors=result.error_count,
                    warnings=result.warning_count,
                    issues=[
                        sc.IssueModel(
                            severity=issue.severity,
                            kind=issue.kind,
                            message=issue.message,
                            line=issue.line,
                        )
                        for issue in result.issues
                    ],
                )
            )
        return sc.ValidateResponse(
            ok=all(f.errors == 0 for f in files),
            files=files,
            provenance=sc.Provenance(
                toolkit_version=__version__,
                granularity=request.granularity,
                inputs=inputs,
            ),
        )

    @app.post("/stats", response_model=sc.StatsResponse)
    def stats(request: sc.StatsRequest) -> sc.StatsResponse:
        inputs: dict[str, str] = {}
        corpus = _load_many(
            request.files,
            inputs,
            granularity=request.granularity,
            strict=request.strict,
            separator=request.separator,
        )
        measured = corpus_stats(corpus, request.policy)
        per_source: list[sc.SourceStatsModel] = []
        drift: list[str] = []
        matched_courts: set[str] = set()
        for name, row in measured.per_source.items():
            reference = REFERENCE_COURT_STATS.get(name.lower())
            model = sc.SourceStatsModel(
                source=name,
                documents=row.documents,
                tokens=row.tokens,
                sentences=row.sentences,
            )
            if reference is not None:
                matched_courts.add(name.lower())
                model.reference_documents = reference.documents
                model.reference_tokens = reference.tokens
                model.reference_sentences = reference.sentences
                if row.tokens != reference.tokens:
                    drift.append(
                        f"{name}: {row.tokens:,} tokens, reference says {reference.tokens:,}"
                    )
                if row.sentences != reference.sentences:
                    drift.append(
                        f"{name}: {row.sentences:,} sentences, reference says {reference.sentences:,}"
                    )
            per_source.append(model)

        full_set = matched_courts == set(REFERENCE_COURT_STATS)
        reference_totals = REFERENCE_TOTALS if full_set else None
        if reference_totals is not None:
            if measured.total_tokens != reference_totals.tokens:
                drift.append(
                    f"total: {measured.total_tokens:,} tokens, reference says {reference_totals.tokens:,}"
                )
            if measured.total_sentences != reference_totals.sentences:
                drift.append(
                    f"total: {measured.total_sentences:,} sentences, "
                    f"reference says {reference_totals.sentences:,}"
                )

        legal_count, legal_share = legal_entity_share(measured)
        legal = sc.LegalShareModel(
            entities=legal_count,
            share_percent=round(legal_share, 2),
            reference_entities=REFERENCE_LEGAL_ENTITIES if full_set else None,
            reference_share_percent=REFERENCE_LEGAL_SHARE if full_set else None,
        )
        response = sc.StatsResponse(
            per_source=per_source,
            total_tokens=measured.total_tokens,
            total_sentences=measured.total_sentences,
            reference_total_tokens=reference_totals.tokens if reference_totals else None,
            reference_total_sentences=reference_totals.sentences if reference_totals else None,
            per_class_entities=measured.per_class_entities,
            total_entities=measured.total_entities,
            legal=legal,
            drift=drift,
            text_table="",
            provenance=sc.Provenance(
                toolkit_version=__version__,
                granularity=request.granularity,
                policy=request.policy,
                inputs=inputs,
            ),
        )
        response.text_table = _render_stats_table(response)
        return response

    @app.post("/chunk", response_model=sc.ChunkResponse)
    def chunk_endpoint(request: sc.ChunkRequest) -> sc.ChunkResponse:
        inputs: dict[str, str] = {}
        if request.file is not None:
            corpus = _load_corpus(
                request.file,
                0,
                inputs,
                granularity=request.granularity,
                strict=request.strict,
                separator=request.separator,
            )
            tag_sequences = [s.tags for s in corpus.sentences]
        else:
            assert request.tags is not None
            tag_sequences = [
                tuple(parse_tag(t, request.granularity, request.strict) for t in sentence)
                for sentence in request.tags
            ]
        sentences: list[sc.SentenceChunks] = []
        for index, tags in enumerate(tag_sequences):
            spans = chunk(tags, request.policy)
            repaired = repaired_positions(tags) if request.policy == "repair" else []
            sentences.append(
                sc.SentenceChunks(
                    index=index,
                    spans=[sc.SpanModel(label=s.label, start=s.start, end=s.end) for s in spans],
                    repaired_positions=repaired,
                )
            )
        return sc.ChunkResponse(
            sentences=sentences,
            provenance=sc.Provenance(
                toolkit_version=__version__,
                granularity=request.granularity,
                policy=request.policy,
                inputs=inputs,
            ),
        )

    @app.post("/score", response_model=sc.ScoreResponse)
    def score(request: sc.ScoreRequest) -> sc.ScoreResponse:
        inputs: dict[str, str] = {}
        gold = _load_corpus(
            request.gold,
            0,
            inputs,
            granularity=request.granularity,
            strict=request.strict,
            separator=request.separator,
            key="gold",
        )
        pred = _load_corpus(
            request.pred,
            1,
            inputs,
            granularity=request.granularity,
            strict=request.strict,
            separator=request.separator,
            key="pred",
        )
        report = evaluate(gold, pred, request.policy)
        if request.baseline is not None:
            report = compare_to_baseline(report, request.baseline)
        provenance = sc.Provenance(
            toolkit_version=__version__,
            granularity=request.granularity,
            policy=request.policy,
            inputs=inputs,
        )
        doc = report_to_dict(report)
        return sc.ScoreResponse(
            **doc,
            text_table=render_report_text(report),
            provenance=provenance,
        )

    @app.post("/split", response_model=sc.SplitResponse)
    def split_endpoint(request: sc.SplitRequest) -> sc.SplitResponse:
        inputs: dict[str, str] = {}
        corpus = _load_many(
            request.files,
            inputs,
            granularity=request.granularity,
            strict=request.strict,
            separator=request.separator,
        )
        manifest = make_folds(
            corpus,
            request.k,
            request.seed,
            stratify_on=request.stratify_on,
            allow_skew=request.allow_skew,
        )
        written: list[str] = []
        if request.out_manifest:
            write_manifest(manifest, request.out_manifest)
            written.append(request.out_manifest)
        if request.write_folds_dir:
            out_dir = Path(request.write_folds_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            wanted = request.folds if request.folds is not None else list(range(request.k))
            for fold in wanted:
                train, validation = split(corpus, manifest, fold, verify_checksum=False)
                train_path = out_dir / f"fold{fold:02d}.train.conll"
                val_path = out_dir / f"fold{fold:02d}.validation.conll"
                train_path.write_text(format_corpus(train), encoding="utf-8")
                val_path.write_text(format_corpus(validation), encoding="utf-8")
                written.extend([str(train_path), str(val_path)])
        return sc.SplitResponse(
            manifest=sc.ManifestModel(
                version=manifest.version,
                k=manifest.k,
                seed=manifest.seed,
                strategy=manifest.strategy,
                checksum=manifest.checksum,
                warnings=list(manifest.warnings),
                assignment=list(manifest.assignment),
            ),
            fold_sizes=manifest.fold_sizes(),
            written_files=written,
            provenance=sc.Provenance(
                toolkit_version=__version__,
                granularity=request.granularity,
                seed=request.seed,
                inputs=inputs,
            ),
        )

    @app.post("/map-coarse", response_model=sc.MapCoarseResponse)
    def map_coarse(request: sc.MapCoarseRequest) -> sc.MapCoarseResponse:
        inputs: dict[str, str] = {}
        # tags parse leniently so an already-coarse file passes through
        # (idempotence); to_coarse still rejects genuinely unknown classes.
        name, text = _read_source(request.file, 0, inputs)
        corpus = parse_corpus(
            text,
            "fine",
            source_id=name,
            strict=request.strict,
            separator=request.separator,
            tag_strict=False,
        )
        mapped = map_to_coarse(corpus)
        text = format_corpus(mapped)
        out_path: str | None = None
        if request.out_path:
            Path(request.out_path).write_text(text, encoding="utf-8")
            out_path = request.out_path
        return sc.MapCoarseResponse(
            text=None if out_path else text,
            out_path=out_path,
            sentences=len(mapped),
            tokens=mapped.token_count,
            provenance=sc.Provenance(
                toolkit_version=__version__,
                granularity="coarse",
                inputs=inputs,
            ),
        )

    return app


app = create_app()
