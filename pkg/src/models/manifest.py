from typing import Any

from pydantic import BaseModel, Field


class ArtifactEntry(BaseModel):
    path: str = Field(..., description="Path relative to the output directory")
    stage: str
    sha256: str
    bytes: int


class RunManifest(BaseModel):
    tool: str = "scimap"
    versions: dict[str, str] = Field(default_factory=dict)
    seed: int
    parameters: dict[str, Any] = Field(default_factory=dict)
    stages: list[str] = Field(default_factory=list)
    summary: dict[str, Any] = Field(default_factory=dict)
    decisions: list[str] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)
    files: list[ArtifactEntry] = Field(default_factory=list)


class RunRequest(BaseModel):
    """Body of ``POST /api/runs``; omitted fields fall back to the server settings."""

    corpus_path: str
    output_dir: str | None = None
    stage: str = Field(default="run", description="Target stage, 'run' for the full pipeline")
    network_mode: str | None = None
    seed: int | None = None
    top_k: int | None = None
    accessibility_h: int | None = None
    layout_dims: int | None = None
    layout_iterations: int | None = None
    cut_threshold: float | None = None
    coverage_threshold: float | None = None
    timeline_min_papers: int | None = None
    keywords_file: str | None = None


class RunResponse(BaseModel):
    manifest: RunManifest
    message: str = Field(..., description="Response message")


class SyntheticRequest(BaseModel):
    output_path: str
    topics: int = 3
    papers_per_topic: int = 40
    intra_probability: float = 0.15
    inter_probability: float = 0.005
    seed: int = 0


class SyntheticResponse(BaseModel):
    output_path: str
    papers: int
    message: str = Field(..., description="Response message")
