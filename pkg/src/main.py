from pathlib import Path
from typing import Annotated, Any

import typer
import uvicorn
from pydantic import ValidationError

from src.core.config import NetworkMode, PipelineConfig, load_config
from src.core.di import create_container
from src.core.errors import ConfigError, ExitCode, ScimapError, exit_code_for
from src.core.log import configure_logging
from src.models.synthetic import SyntheticCorpusSpec
from src.services.pipeline_service import COMMAND_STAGES, ExtraOutputs, PipelineService

app = typer.Typer(
    name="scimap",
    help="Build science maps (communities, keywords, taxonomy, layout) from a paper corpus.",
    no_args_is_help=True,
    add_completion=False,
)

ConfigOption = Annotated[
    Path | None, typer.Option("--config", help="KEY=value file with SCIMAP_ settings.")
]
CorpusOption = Annotated[Path | None, typer.Option("--corpus", help="JSON-lines corpus.")]
NetworkOption = Annotated[
    NetworkMode | None, typer.Option("--network", help="Network mode.", case_sensitive=False)
]
SeedOption = Annotated[int | None, typer.Option("--seed", help="Seed for every random choice.")]
TopKOption = Annotated[int | None, typer.Option("--top-k", help="Number of keywords to select.")]
StopwordsOption = Annotated[Path | None, typer.Option("--stopwords", help="Stopword list.")]
LemmasOption = Annotated[Path | None, typer.Option("--lemmas", help="Lemma table (TSV).")]
KeywordsFileOption = Annotated[
    Path | None, typer.Option("--keywords-file", help="Expert keywords, one per line.")
]
CoverageOption = Annotated[
    float | None,
    typer.Option("--coverage-threshold", help="Drop keywords in more than this paper share."),
]
CutOption = Annotated[
    float | None, typer.Option("--cut-threshold", help="Dendrogram cut height.")
]
WalkOption = Annotated[
    int | None, typer.Option("--accessibility-h", help="Random-walk length for accessibility.")
]
DimsOption = Annotated[int | None, typer.Option("--layout-dims", help="Layout dimensions (2|3).")]
IterationsOption = Annotated[
    int | None, typer.Option("--layout-iterations", help="Force-directed iterations.")
]
MinPapersOption = Annotated[
    int | None,
    typer.Option("--timeline-min-papers", help="Drop leading years with fewer papers."),
]
OutputOption = Annotated[Path | None, typer.Option("--output-dir", help="Artifact directory.")]
EdgesOption = Annotated[
    Path | None, typer.Option("--export-edges", help="Write the edge list to this path.")
]
PartitionOption = Annotated[
    Path | None, typer.Option("--export-partition", help="Write the partition to this path.")
]
DendrogramOption = Annotated[
    Path | None, typer.Option("--dendrogram", help="Write the Newick dendrogram to this path.")
]
LogLevelOption = Annotated[str | None, typer.Option("--log-level", help="Logging level.")]

_COMMAND_HELP = {
    "ingest": "Validate a corpus and report its statistics.",
    "network": "Build the citation or co-citation network.",
    "communities": "Detect communities and the coarse-grained graph.",
    "keywords": "Rank terms by importance and select keywords.",
    "accessibility": "Compute accessibility and peripherality of communities.",
    "taxonomy": "Cluster keywords by network distance into a dendrogram.",
    "layout": "Compute the force-directed science-map layout.",
    "timeline": "Compute per-year keyword frequencies.",
    "run": "Run the full pipeline.",
}


def _fail(error: BaseException) -> typer.Exit:
    typer.echo(f"error: {error}", err=True)
    return typer.Exit(code=int(exit_code_for(error)))


def _execute(target: str, config: PipelineConfig, extra: ExtraOutputs) -> None:
    configure_logging(config.log_level)
    container = create_container()
    try:
        with container() as request_container:
            pipeline = request_container.get(PipelineService)
            manifest = pipeline.run_pipeline(config, target, extra)
    except (ScimapError, FileNotFoundError) as e:
        raise _fail(e) from e
    finally:
        container.close()
    typer.echo(
        f"{target}: {len(manifest.files)} artifacts written to {config.output_dir} "
        f"(stages: {', '.join(manifest.stages)})"
    )


def _stage_command(target: str) -> Any:
    def command(
        config_file: ConfigOption = None,
        corpus: CorpusOption = None,
        network: NetworkOption = None,
        seed: SeedOption = None,
        top_k: TopKOption = None,
        stopwords: StopwordsOption = None,
        lemmas: LemmasOption = None,
        keywords_file: KeywordsFileOption = None,
        coverage_threshold: CoverageOption = None,
        cut_threshold: CutOption = None,
        accessibility_h: WalkOption = None,
        layout_dims: DimsOption = None,
        layout_iterations: IterationsOption = None,
        timeline_min_papers: MinPapersOption = None,
        output_dir: OutputOption = None,
        export_edges: EdgesOption = None,
        export_partition: PartitionOption = None,
        dendrogram: DendrogramOption = None,
        log_level: LogLevelOption = None,
    ) -> None:
        try:
            config = load_config(
                config_file,
                corpus_path=corpus,
                network_mode=network,
                seed=seed,
                top_k=top_k,
                stopwords_path=stopwords,
                lemmas_path=lemmas,
                keywords_file=keywords_file,
                coverage_threshold=coverage_threshold,
                cut_threshold=cut_threshold,
                accessibility_h=accessibility_h,
                layout_dims=layout_dims,
                layout_iterations=layout_iterations,
                timeline_min_papers=timeline_min_papers,
                output_dir=output_dir,
                log_level=log_level,
            )
        except ConfigError as e:
            raise _fail(e) from e
        extra = ExtraOutputs(
            edges=export_edges, partition=export_partition, dendrogram=dendrogram
        )
        _execute(target, config, extra)

    command.__name__ = f"{target}_command"
    command.__doc__ = _COMMAND_HELP[target]
    return command


for _name in [*COMMAND_STAGES, "run"]:
    app.command(name=_name)(_stage_command(_name))


@app.command(name="synth")
def synth(
    output: Annotated[Path, typer.Argument(help="Where to write the JSON-lines corpus.")],
    topics: Annotated[int, typer.Option("--topics", help="Planted topics.")] = 3,
    papers_per_topic: Annotated[int, typer.Option("--papers-per-topic")] = 40,
    intra_probability: Annotated[
        float, typer.Option("--intra", help="Citation probability within a topic.")
    ] = 0.15,
    inter_probability: Annotated[
        float, typer.Option("--inter", help="Citation probability across topics.")
    ] = 0.005,
    abstract_length: Annotated[int, typer.Option("--abstract-length")] = 40,
    first_year: Annotated[int, typer.Option("--first-year")] = 2000,
    last_year: Annotated[int, typer.Option("--last-year")] = 2015,
    seed: Annotated[int, typer.Option("--seed")] = 0,
    log_level: LogLevelOption = None,
) -> None:
    """Generate a synthetic corpus with planted topics."""
    configure_logging(log_level or "INFO")
    try:
        spec = SyntheticCorpusSpec(
            topics=topics,
            papers_per_topic=papers_per_topic,
            intra_probability=intra_probability,
            inter_probability=inter_probability,
            abstract_length=abstract_length,
            first_year=first_year,
            last_year=last_year,
            seed=seed,
        )
    except ValidationError as e:
        raise _fail(ConfigError(str(e))) from e

    container = create_container()
    try:
        with container() as request_container:
            pipeline = request_container.get(PipelineService)
            corpus = pipeline.generate_synthetic(spec, output)
    except ScimapError as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(code=int(ExitCode.INPUT_ERROR)) from e
    finally:
        container.close()
    typer.echo(f"synth: {corpus.N} papers in {topics} topics written to {output}")


@app.command(name="serve")
def serve(
    host: Annotated[str, typer.Option("--host")] = "127.0.0.1",
    port: Annotated[int, typer.Option("--port")] = 8000,
    log_level: LogLevelOption = None,
) -> None:
    """Serve the HTTP API."""
    configure_logging(log_level or "INFO")
    uvicorn.run("src.api.app:app", host=host, port=port, log_level=(log_level or "info").lower())


if __name__ == "__main__":
    app()
