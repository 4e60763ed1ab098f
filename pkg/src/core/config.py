from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.core.errors import ConfigError


class NetworkMode(str, Enum):
    CITATION = "citation"
    COCITATION = "cocitation"


class PipelineConfig(BaseSettings):
    corpus_path: Path | None = Field(default=None, description="Line-delimited JSON corpus")
    network_mode: NetworkMode = Field(default=NetworkMode.CITATION, description="Network mode")
    seed: int = Field(default=0, ge=0, description="Single seed for every random choice")

    top_k: int = Field(default=50, ge=1, description="Number of selected keywords")
    bigram_reference_size: int = Field(
        default=200, ge=1, description="Top-ranked terms whose bigrams subsume unigrams"
    )
    label_top_m: int = Field(default=3, ge=1, description="Keywords per community label")
    coverage_threshold: float = Field(
        default=0.5, gt=0.0, le=1.0, description="Generic keyword coverage fraction"
    )
    stopwords_path: Path | None = Field(default=None, description="Stopword file")
    lemmas_path: Path | None = Field(default=None, description="Lemma table (surface<TAB>lemma)")
    keywords_file: Path | None = Field(default=None, description="Expert keyword list")

    accessibility_h: int = Field(default=3, ge=1, le=10, description="Random-walk length")
    curve_points: int = Field(default=101, ge=2, description="Samples per cumulative curve")

    layout_dims: int = Field(default=3, ge=2, le=3, description="Layout dimensionality")
    layout_iterations: int = Field(default=50, ge=1, description="Force-directed iterations")
    layout_approximate_above: int = Field(
        default=20_000, ge=1, description="Node count above which repulsion uses a cutoff"
    )

    cut_threshold: float | None = Field(default=None, ge=0.0, description="Dendrogram cut height")
    timeline_min_papers: int = Field(default=10, ge=1, description="Leading sparse-year cutoff")

    output_dir: Path = Field(default=Path("scimap-output"), description="Artifact directory")
    log_level: str = Field(default="INFO", description="Logging level")

    model_config = SettingsConfigDict(
        env_prefix="SCIMAP_",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        return value.upper()

    def parameters(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


def load_config(config_file: Path | None = None, **overrides: Any) -> PipelineConfig:
    """Build a config with precedence: overrides > environment > config file > defaults.

    The config file is a flat ``KEY=value`` file using the ``SCIMAP_`` keys.
    Overrides equal to ``None`` are treated as "not given".
    """
    given = {key: value for key, value in overrides.items() if value is not None}
    if config_file is not None and not config_file.is_file():
        raise ConfigError(f"config file {config_file} not found")
    try:
        return PipelineConfig(_env_file=config_file, **given)  # type: ignore[call-arg]
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def get_settings() -> PipelineConfig:
    return load_config()
