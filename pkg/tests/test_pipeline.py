import hashlib
import json
from collections import Counter
from pathlib import Path

import pytest

from src.core.config import PipelineConfig, load_config
from src.core.errors import (
    ConfigError,
    EmptyNetworkError,
    ExitCode,
    PipelineStageError,
    exit_code_for,
)
from src.infrastructure.export import MANIFEST_NAME
from src.models.manifest import RunManifest
from src.models.synthetic import SyntheticCorpusSpec
from src.services.pipeline_service import STAGES, ExtraOutputs, PipelineService
from src.services.synthetic_service import SyntheticService

FULL_RUN_FILES = {
    "corpus_stats.json",
    "edges.tsv",
    "network.graphml",
    "partition.csv",
    "coarse_graph.csv",
    "keywords.csv",
    "community_labels.csv",
    "accessibility.csv",
    "peripherality.csv",
    "accessibility_curves.csv",
    "keyword_distances.csv",
    "dendrogram.nwk",
    "dendrogram.json",
    "coordinates.csv",
    "coordinates_2d.csv",
    "science_map.json",
    "vosviewer_map.txt",
    "vosviewer_network.txt",
    "keyword_timeline.csv",
    "papers_per_year.csv",
    "community_summary.csv",
}


@pytest.fixture
def corpus_path(
    tmp_path: Path, pipeline_service: PipelineService, small_spec: SyntheticCorpusSpec
) -> Path:
    path = tmp_path / "corpus.jsonl"
    pipeline_service.generate_synthetic(small_spec, path)
    return path


def _config(corpus_path: Path, output_dir: Path, **overrides) -> PipelineConfig:
    return load_config(
        corpus_path=corpus_path,
        output_dir=output_dir,
        top_k=10,
        layout_iterations=20,
        timeline_min_papers=2,
        **overrides,
    )


def _hashes(manifest: RunManifest) -> dict[str, str]:
    return {entry.path: entry.sha256 for entry in manifest.files}


def test_full_run_writes_declared_artifacts(
    pipeline_service: PipelineService, corpus_path: Path, tmp_path: Path
) -> None:
    output_dir = tmp_path / "out"

    manifest = pipeline_service.run_pipeline(_config(corpus_path, output_dir))

    assert manifest.stages == list(STAGES)
    assert {entry.path for entry in manifest.files} == FULL_RUN_FILES
    for entry in manifest.files:
        data = (output_dir / entry.path).read_bytes()
        assert hashlib.sha256(data).hexdigest() == entry.sha256
        assert len(data) == entry.bytes
    stored = RunManifest.model_validate_json((output_dir / MANIFEST_NAME).read_text())
    assert stored == manifest


def test_full_run_summary(
    pipeline_service: PipelineService,
    synthetic_service: SyntheticService,
    small_spec: SyntheticCorpusSpec,
    corpus_path: Path,
    tmp_path: Path,
) -> None:
    manifest = pipeline_service.run_pipeline(_config(corpus_path, tmp_path / "out"))
    summary = manifest.summary

    assert summary["papers"] == 90
    assert summary["communities"] >= 3
    assert summary["modularity"] > 0.4
    assert summary["keywords"] == 10
    assert summary["dendrogram_leaves"] == 10
    assert summary["layout_dims"] == 3
    assert manifest.seed == 0
    assert manifest.parameters["top_k"] == 10
    assert "scimap" in manifest.versions

    keywords = (tmp_path / "out" / "keywords.csv").read_text().splitlines()
    assert keywords[0] == "term,I,community,F_in,F_out"
    selected = {line.split(",")[0] for line in keywords[1:]}
    covered = next(
        (
            decision.split(": ", 1)[1].split(", ")
            for decision in manifest.decisions
            if decision.startswith("unigrams covered by top-200 bigrams")
        ),
        [],
    )
    for signature in synthetic_service.signature_words(small_spec):
        assert signature in selected or signature in covered
        assert not (signature in selected and signature in covered)


def test_same_seed_reproduces_every_artifact(
    pipeline_service: PipelineService, corpus_path: Path, tmp_path: Path
) -> None:
    first = pipeline_service.run_pipeline(_config(corpus_path, tmp_path / "a"))
    second = pipeline_service.run_pipeline(_config(corpus_path, tmp_path / "b"))

    assert _hashes(first) == _hashes(second)
    assert first.summary == second.summary


def test_stage_target_runs_prerequisites_only(
    pipeline_service: PipelineService, corpus_path: Path, tmp_path: Path
) -> None:
    manifest = pipeline_service.run_pipeline(
        _config(corpus_path, tmp_path / "out"), target="communities"
    )

    assert manifest.stages == ["corpus", "citenet", "communities"]
    paths = {entry.path for entry in manifest.files}
    assert "partition.csv" in paths
    assert "community_summary.csv" in paths
    assert "keywords.csv" not in paths


@pytest.mark.parametrize(
    ("target", "stages"),
    [
        ("ingest", ["corpus"]),
        ("network", ["corpus", "citenet"]),
        ("keywords", ["corpus", "citenet", "communities", "salience"]),
        ("accessibility", ["corpus", "citenet", "communities", "accessibility"]),
        ("timeline", ["corpus", "citenet", "communities", "salience", "timeline"]),
    ],
)
def test_stage_closure(pipeline_service: PipelineService, target: str, stages: list[str]) -> None:
    assert pipeline_service.stages_for(target) == stages


def test_unknown_target_rejected(pipeline_service: PipelineService) -> None:
    with pytest.raises(ConfigError):
        pipeline_service.stages_for("publish")


def test_empty_corpus_fails_at_network_stage(
    pipeline_service: PipelineService, tmp_path: Path
) -> None:
    corpus = tmp_path / "empty.jsonl"
    corpus.write_text("")
    output_dir = tmp_path / "out"

    with pytest.raises(PipelineStageError) as excinfo:
        pipeline_service.run_pipeline(_config(corpus, output_dir))

    assert excinfo.value.stage == "citenet"
    assert isinstance(excinfo.value.cause, EmptyNetworkError)
    assert exit_code_for(excinfo.value) is ExitCode.STAGE_FAILURE
    assert not (output_dir / "corpus_stats.json").exists()
    assert not (output_dir / MANIFEST_NAME).exists()


def test_missing_corpus_is_input_error(pipeline_service: PipelineService, tmp_path: Path) -> None:
    with pytest.raises(PipelineStageError) as excinfo:
        pipeline_service.run_pipeline(_config(tmp_path / "absent.jsonl", tmp_path / "out"))

    assert excinfo.value.stage == "corpus"
    assert exit_code_for(excinfo.value) is ExitCode.INPUT_ERROR


def test_malformed_corpus_is_input_error(
    pipeline_service: PipelineService, tmp_path: Path
) -> None:
    corpus = tmp_path / "bad.jsonl"
    corpus.write_text('{"id": "P1"}\n{"id": "P1"}\n')

    with pytest.raises(PipelineStageError) as excinfo:
        pipeline_service.run_pipeline(_config(corpus, tmp_path / "out"))

    assert "P1" in str(excinfo.value)
    assert exit_code_for(excinfo.value) is ExitCode.INPUT_ERROR


def test_rerun_removes_stale_artifacts(
    pipeline_service: PipelineService, corpus_path: Path, tmp_path: Path
) -> None:
    output_dir = tmp_path / "out"
    pipeline_service.run_pipeline(_config(corpus_path, output_dir))
    unrelated = output_dir / "notes.txt"
    unrelated.write_text("keep me")

    manifest = pipeline_service.run_pipeline(_config(corpus_path, output_dir), target="ingest")

    assert {entry.path for entry in manifest.files} == {"corpus_stats.json"}
    assert not (output_dir / "keywords.csv").exists()
    assert unrelated.exists()


def test_cut_threshold_produces_groups(
    pipeline_service: PipelineService, corpus_path: Path, tmp_path: Path
) -> None:
    output_dir = tmp_path / "out"

    manifest = pipeline_service.run_pipeline(
        _config(corpus_path, output_dir, cut_threshold=1000.0), target="taxonomy"
    )

    assert manifest.summary["keyword_groups"] == 1
    groups = (output_dir / "keyword_groups.csv").read_text().splitlines()
    assert len(groups) == 11
    assert (output_dir / "group_assignment.csv").exists()
    assert (output_dir / "group_coarse_graph.csv").exists()


def test_without_cut_threshold_no_groups(
    pipeline_service: PipelineService, corpus_path: Path, tmp_path: Path
) -> None:
    manifest = pipeline_service.run_pipeline(
        _config(corpus_path, tmp_path / "out"), target="taxonomy"
    )

    assert "keyword_groups.csv" not in {entry.path for entry in manifest.files}
    assert any("no cut threshold" in decision for decision in manifest.decisions)


def test_expert_keywords_bypass_ranking(
    pipeline_service: PipelineService,
    synthetic_service: SyntheticService,
    small_spec: SyntheticCorpusSpec,
    corpus_path: Path,
    tmp_path: Path,
) -> None:
    signatures = synthetic_service.signature_words(small_spec)
    keywords_file = tmp_path / "keywords.txt"
    keywords_file.write_text("# expert list\n" + "\n".join([*signatures, "zzzunknown"]) + "\n")

    manifest = pipeline_service.run_pipeline(
        _config(corpus_path, tmp_path / "out", keywords_file=keywords_file), target="keywords"
    )

    lines = (tmp_path / "out" / "keywords.csv").read_text().splitlines()
    assert [line.split(",")[0] for line in lines[1:]] == signatures
    assert any("zzzunknown" in warning for warning in manifest.warnings)


def test_extra_output_locations(
    pipeline_service: PipelineService, corpus_path: Path, tmp_path: Path
) -> None:
    edges = tmp_path / "elsewhere" / "edges.tsv"
    partition = tmp_path / "elsewhere" / "partition.csv"

    manifest = pipeline_service.run_pipeline(
        _config(corpus_path, tmp_path / "out"),
        target="communities",
        extra=ExtraOutputs(edges=edges, partition=partition),
    )

    assert edges.exists()
    assert partition.read_text().startswith("id,community\n")
    assert edges.as_posix() in {entry.path for entry in manifest.files}


def test_cocitation_mode_recorded(
    pipeline_service: PipelineService, corpus_path: Path, tmp_path: Path
) -> None:
    manifest = pipeline_service.run_pipeline(
        _config(corpus_path, tmp_path / "out", network_mode="cocitation"), target="network"
    )

    assert manifest.summary["network_mode"] == "cocitation"
    first = (tmp_path / "out" / "edges.tsv").read_text().splitlines()[0]
    assert len(first.split("\t")) == 3


def test_generate_synthetic_round_trips(
    pipeline_service: PipelineService, small_spec: SyntheticCorpusSpec, corpus_path: Path
) -> None:
    written = corpus_path.read_text().splitlines()

    assert len(written) == 90
    assert json.loads(written[0])["id"] == "syn-00-0000"
    assert pipeline_service.corpus_service.load(corpus_path) == (
        pipeline_service.synthetic_service.generate_synthetic_corpus(small_spec)
    )


@pytest.mark.slow
def test_large_planted_corpus(
    pipeline_service: PipelineService, synthetic_service: SyntheticService, tmp_path: Path
) -> None:
    spec = SyntheticCorpusSpec(
        topics=5, papers_per_topic=400, intra_probability=0.02, inter_probability=0.0005, seed=3
    )
    corpus_path = tmp_path / "large.jsonl"
    pipeline_service.generate_synthetic(spec, corpus_path)
    _, topics = synthetic_service.generate_with_topics(spec)
    output_dir = tmp_path / "out"

    manifest = pipeline_service.run_pipeline(
        load_config(corpus_path=corpus_path, output_dir=output_dir)
    )
    rerun = pipeline_service.run_pipeline(
        load_config(corpus_path=corpus_path, output_dir=tmp_path / "again")
    )

    assert manifest.summary["papers"] == 2000
    assert manifest.summary["communities"] >= 4
    assert manifest.summary["keywords"] == 50
    assert manifest.summary["dendrogram_leaves"] == 50
    assert _hashes(manifest) == _hashes(rerun)
    rows = (output_dir / "partition.csv").read_text().splitlines()[1:]
    labels = dict(line.split(",") for line in rows)
    agreeing = 0
    for community in set(labels.values()):
        members = [paper_id for paper_id, label in labels.items() if label == community]
        agreeing += Counter(topics[m] for m in members).most_common(1)[0][1]
    assert agreeing / 2000 >= 0.9
