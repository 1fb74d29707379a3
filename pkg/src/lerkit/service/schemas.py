"""Request/response models for the scoring service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator

Granularity = Literal["fine", "coarse"]
Policy = Literal["strict", "conlleval", "repair"]
Separator = Literal[" ", "\t"]


class CorpusSource(BaseModel):
    """A corpus to read: either a server-side path or inline text."""

    path: str | None = None
    text: str | None = None
    source_id: str | None = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "CorpusSource":
        if (self.path is None) == (self.text is None):
            raise ValueError("provide exactly one of 'path' or 'text'")
        return self


class Provenance(BaseModel):
    toolkit_version: str
    granularity: Granularity | None = None
    policy: Policy | None = None
    seed: int | None = None
    inputs: dict[str, str] = Field(default_factory=dict)  # name -> sha256 digest


class IssueModel(BaseModel):
    severity: Literal["error", "warning"]
    kind: str
    message: str
    line: int | None = None


class FileValidation(BaseModel):
    source: str
    sentences: int
    tokens: int
    errors: int
    warnings: int
    issues: list[IssueModel]


class ValidateRequest(BaseModel):
    files: list[CorpusSource]
    granularity: Granularity = "fine"
    strict: bool = True
    separator: Separator = " "


class ValidateResponse(BaseModel):
    ok: bool
    files: list[FileValidation]
    provenance: Provenance


class StatsRequest(BaseModel):
    files: list[CorpusSource]
    granularity: Granularity = "fine"
    strict: bool = True
    separator: Separator = " "
    policy: Policy = "conlleval"


class SourceStatsModel(BaseModel):
    source: str
    documents: int | None = None
    tokens: int
    sentences: int
    reference_documents: int | None = None
    reference_tokens: int | None = None
    reference_sentences: int | None = None


class LegalShareModel(BaseModel):
    entities: int
    share_percent: float
    reference_entities: int | None = None
    reference_share_percent: float | None = None


class StatsResponse(BaseModel):
    per_source: list[SourceStatsModel]
    total_tokens: int
    total_sentences: int
    reference_total_tokens: int | None = None
    reference_total_sentences: int | None = None
    per_class_entities: dict[str, int]
    total_entities: int
    legal: LegalShareModel
    drift: list[str]  # human-readable mismatches against the reference counts
    text_table: str
    provenance: Provenance


class ChunkRequest(BaseModel):
    file: CorpusSource | None = None
    tags: list[list[str]] | None = None  # inline alternative to a file
    granularity: Granularity = "fine"
    strict: bool = True
    separator: Separator = " "
    policy: Policy = "conlleval"

    @model_validator(mode="after")
    def _exactly_one(self) -> "ChunkRequest":
        if (self.file is None) == (self.tags is None):
            raise ValueError("provide exactly one of 'file' or 'tags'")
        return self


class SpanModel(BaseModel):
    label: str
    start: int
    end: int


class SentenceChunks(BaseModel):
    index: int
    spans: list[SpanModel]
    repaired_positions: list[int] = Field(default_factory=list)


class ChunkResponse(BaseModel):
    sentences: list[SentenceChunks]
    provenance: Provenance


class ScoreRequest(BaseModel):
    gold: CorpusSource
    pred: CorpusSource
    granularity: Granularity = "fine"
    strict: bool = True
    separator: Separator = " "
    policy: Policy = "conlleval"
    baseline: Literal["german-bert", "bilstm-crf"] | None = None


class ClassMetricsModel(BaseModel):
    tp: int
    fp: int
    fn: int
    support: int
    precision: float
    recall: float
    f1: float
    undefined: list[str] = Field(default_factory=list)


class BaselineModel(BaseModel):
    model: str
    f1_deltas: dict[str, float]
    published_winner_elsewhere: list[str]


class ScoreResponse(BaseModel):
    schema_version: int
    granularity: Granularity
    policy: Policy
    aggregation: str
    per_class: dict[str, ClassMetricsModel]
    micro: ClassMetricsModel
    macro_f1: float
    baseline: BaselineModel | None = None
    text_table: str
    provenance: Provenance


class SplitRequest(BaseModel):
    files: list[CorpusSource]
    granularity: Granularity = "fine"
    strict: bool = True
    separator: Separator = " "
    k: int = 10
    seed: int = 42
    stratify_on: Literal["fine", "coarse", "source"] = "fine"
    allow_skew: bool = False
    out_manifest: str | None = None  # server-side path to write the manifest
    write_folds_dir: str | None = None  # write train/validation files here
    folds: list[int] | None = None  # restrict materialization to these folds


class ManifestModel(BaseModel):
    version: int
    k: int
    seed: int
    strategy: str
    checksum: str
    warnings: list[str]
    assignment: list[int]


class SplitResponse(BaseModel):
    manifest: ManifestModel
    fold_sizes: list[int]
    written_files: list[str]
    provenance: Provenance


class MapCoarseRequest(BaseModel):
    file: CorpusSource
    strict: bool = True
    separator: Separator = " "
    out_path: str | None = None


class MapCoarseResponse(BaseModel):
    text: str | None = None
    out_path: str | None = None
    sentences: int
    tokens: int
    provenance: Provenance


class HealthResponse(BaseModel):
    status: str
    version: str
