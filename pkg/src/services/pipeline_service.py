import platform
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Any

import networkx as nx
import numpy as np
import scipy
import structlog

from src import __version__
from src.core.config import NetworkMode, PipelineConfig
from src.core.errors import AccessibilityError, ConfigError, EmptyNetworkError, PipelineStageError
from src.infrastructure.export import ArtifactExporter, ArtifactStore
from src.infrastructure.text.preprocessor import TextPreprocessor
from src.models.accessibility import AccessibilityProfile, PeripheralityRanking
from src.models.community import CoarseGraph, CommunityPartition, community_letter
from src.models.corpus import Corpus
from src.models.keywords import KeywordSelection, KeywordTable, TermSet
from src.models.manifest import RunManifest
from src.models.network import CitationNetwork
from src.models.synthetic import SyntheticCorpusSpec
from src.repositories.lexicon_repository import LexiconRepository
from src.services.accessibility_service import AccessibilityService
from src.services.citation_network_service import CitationNetworkService
from src.services.community_service import CommunityService
from src.services.corpus_service import CorpusService
from src.services.layout_service import LayoutService
from src.services.salience_service import SalienceService
from src.services.synthetic_service import SyntheticService
from src.services.taxonomy_service import TaxonomyService
from src.services.timeline_service import TimelineService

logger = structlog.get_logger()

STAGES = (
    "corpus",
    "citenet",
    "communities",
    "salience",
    "accessibility",
    "taxonomy",
    "layout",
    "timeline",
)

_REQUIRES: dict[str, tuple[str, ...]] = {
    "corpus": (),
    "citenet": ("corpus",),
    "communities": ("citenet",),
    "salience": ("communities",),
    "accessibility": ("communities",),
    "taxonomy": ("salience",),
    "layout": ("salience",),
    "timeline": ("salience",),
}

COMMAND_STAGES = {
    "ingest": "corpus",
    "network": "citenet",
    "communities": "communities",
    "keywords": "salience",
    "accessibility": "accessibility",
    "taxonomy": "taxonomy",
    "layout": "layout",
    "timeline": "timeline",
}

_REPORT_STAGE = "report"
_TOP_CITED = 3


@dataclass(frozen=True)
class ExtraOutputs:
    """Alternative destinations for artifacts users often want elsewhere."""

    edges: Path | None = None
    partition: Path | None = None
    dendrogram: Path | None = None


@dataclass
class RunState:
    config: PipelineConfig
    extra: ExtraOutputs
    corpus: Corpus | None = None
    network: CitationNetwork | None = None
    partition: CommunityPartition | None = None
    coarse: CoarseGraph | None = None
    termsets: TermSet | None = None
    table: KeywordTable | None = None
    selection: KeywordSelection | None = None
    labels: dict[int, list[str]] = field(default_factory=dict)
    profile: AccessibilityProfile | None = None
    ranking: PeripheralityRanking | None = None
    summary: dict[str, Any] = field(default_factory=dict)
    decisions: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


class PipelineService:
    """Runs the science-map stages in order and records every artifact in a manifest."""

    def __init__(
        self,
        corpus_service: CorpusService,
        network_service: CitationNetworkService,
        community_service: CommunityService,
        salience_service: SalienceService,
        accessibility_service: AccessibilityService,
        taxonomy_service: TaxonomyService,
        layout_service: LayoutService,
        timeline_service: TimelineService,
        synthetic_service: SyntheticService,
        lexicon_repository: LexiconRepository,
        exporter: ArtifactExporter,
    ) -> None:
        self.corpus_service = corpus_service
        self.network_service = network_service
        self.community_service = community_service
        self.salience_service = salience_service
        self.accessibility_service = accessibility_service
        self.taxonomy_service = taxonomy_service
        self.layout_service = layout_service
        self.timeline_service = timeline_service
        self.synthetic_service = synthetic_service
        self.lexicon_repository = lexicon_repository
        self.exporter = exporter

    def stages_for(self, target: str) -> list[str]:
        """Stages needed for ``target`` (a stage, a command name or ``run``), in run order."""
        if target == "run":
            return list(STAGES)
        stage = COMMAND_STAGES.get(target, target)
        if stage not in _REQUIRES:
            msg = f"unknown stage {target!r}"
            raise ConfigError(msg)
        needed: set[str] = set()
        pending = [stage]
        while pending:
            current = pending.pop()
            if current not in needed:
                needed.add(current)
                pending.extend(_REQUIRES[current])
        return [name for name in STAGES if name in needed]

    def run_pipeline(
        self,
        config: PipelineConfig,
        target: str = "run",
        extra: ExtraOutputs | None = None,
    ) -> RunManifest:
        stages = self.stages_for(target)
        store = ArtifactStore(config.output_dir)
        store.prepare()
        state = RunState(config=config, extra=extra or ExtraOutputs())
        logger.info("Pipeline started", target=target, stages=stages, seed=config.seed)

        for stage in [*stages, _REPORT_STAGE]:
            handler = getattr(self, f"_stage_{stage}")
            try:
                handler(state, store)
            except Exception as e:
                logger.exception("Stage failed", stage=stage)
                store.discard()
                raise PipelineStageError(stage, e) from e

        manifest = RunManifest(
            versions=self._versions(),
            seed=config.seed,
            parameters=config.parameters(),
            stages=stages,
            summary=state.summary,
            decisions=state.decisions,
            warnings=state.warnings,
            files=store.entries,
        )
        store.write_manifest(manifest)
        logger.info("Pipeline finished", stages=stages, files=len(manifest.files))
        return manifest

    def generate_synthetic(self, spec: SyntheticCorpusSpec, output_path: Path) -> Corpus:
        corpus = self.synthetic_service.generate_synthetic_corpus(spec)
        self.corpus_service.save(output_path, corpus)
        return corpus

    def _stage_corpus(self, state: RunState, store: ArtifactStore) -> None:
        if state.config.corpus_path is None:
            msg = "no corpus path configured"
            raise ConfigError(msg)
        corpus = self.corpus_service.load(state.config.corpus_path)
        stats = self.corpus_service.corpus_stats(corpus)
        store.write("corpus_stats.json", self.exporter.corpus_stats(stats), "corpus")

        report = corpus.report
        notes = {
            "self references dropped": report.dropped_self_references,
            "duplicate references dropped": report.dropped_duplicate_references,
            "papers with empty abstracts": report.empty_abstracts,
            "references outside the corpus": stats.out_of_corpus_references,
        }
        state.warnings.extend(f"{count} {what}" for what, count in notes.items() if count)
        if report.empty_abstracts:
            state.decisions.append(
                "papers with empty abstracts are kept; titles supply their terms"
            )
        state.summary["papers"] = corpus.N
        state.corpus = corpus

    def _stage_citenet(self, state: RunState, store: ArtifactStore) -> None:
        assert state.corpus is not None
        if state.corpus.N == 0:
            msg = "corpus has no papers, the network would be empty"
            raise EmptyNetworkError(msg)
        network = self.network_service.build(state.corpus, state.config.network_mode)
        edges_path = state.extra.edges or Path("edges.tsv")
        store.write(edges_path, self.exporter.edge_list(network), "citenet")
        store.write("network.graphml", self.exporter.graphml(network, state.corpus), "citenet")

        components = self.network_service.connected_components(network)
        average = self.network_service.average_degree(network)
        state.summary.update(
            {
                "network_mode": network.mode.value,
                "nodes": network.n_nodes,
                "edges": network.n_edges,
                "average_degree": float(average),
                "average_degree_exact": str(average),
                "components": len(set(components.values())),
                "isolated_nodes": network.report.isolated_nodes,
            }
        )
        if network.report.isolated_nodes:
            state.warnings.append(
                f"{network.report.isolated_nodes} isolated papers kept in the network"
            )
        if network.mode is NetworkMode.COCITATION:
            state.decisions.append(
                "co-citation: papers joined when cited together; weight = common citers"
            )
        state.decisions.append("distances and walks use unit edge lengths (topology only)")
        state.network = network

    def _stage_communities(self, state: RunState, store: ArtifactStore) -> None:
        assert state.network is not None
        partition = self.community_service.detect_communities(state.network, state.config.seed)
        coarse = self.community_service.coarse_grain(state.network, partition)
        partition_path = state.extra.partition or Path("partition.csv")
        store.write(partition_path, self.exporter.partition(partition), "communities")
        store.write("coarse_graph.csv", self.exporter.coarse_graph(coarse), "communities")
        state.summary.update(
            {
                "communities": partition.n_communities,
                "modularity": partition.q,
                "community_sizes": list(partition.sizes),
            }
        )
        state.decisions.append(
            f"communities from one multilevel modularity run with seed {state.config.seed}"
        )
        state.partition = partition
        state.coarse = coarse

    def _stage_salience(self, state: RunState, store: ArtifactStore) -> None:
        assert state.corpus is not None
        assert state.partition is not None
        config = state.config
        lexicon = self.lexicon_repository.load(config.stopwords_path, config.lemmas_path)
        preprocessor = TextPreprocessor(lexicon)
        termsets = self.salience_service.build_term_sets(state.corpus, preprocessor)
        table = self.salience_service.community_frequencies(termsets, state.partition)

        if config.keywords_file is not None:
            selection = self._expert_selection(state, termsets, preprocessor)
        else:
            limit = config.coverage_threshold * state.corpus.N
            ranked = self.salience_service.importance_index(table)
            eligible = [t for t in ranked if table.document_frequency(t.term) <= limit]
            if len(eligible) < len(ranked):
                state.decisions.append(
                    f"{len(ranked) - len(eligible)} terms in more than "
                    f"{config.coverage_threshold:g} of the papers left out as generic"
                )
            selection = self.salience_service.select_keywords(
                eligible,
                k=config.top_k,
                reference_size=config.bigram_reference_size,
                full_ranking=ranked,
            )
            if selection.skipped_unigrams:
                state.decisions.append(
                    f"unigrams covered by top-{config.bigram_reference_size} bigrams: "
                    + ", ".join(selection.skipped_unigrams)
                )
        state.warnings.extend(selection.warnings)

        labels = self.salience_service.label_communities(
            state.partition, table, config.label_top_m, config.bigram_reference_size
        )
        state.warnings.extend(
            f"community {community_letter(c)} has no terms to label it"
            for c, terms in labels.items()
            if not terms
        )
        statistics = [
            self.salience_service.keyword_statistics(keyword, termsets, state.partition)
            for keyword in selection.keywords
        ]
        store.write("keywords.csv", self.exporter.keywords(statistics), "salience")
        store.write(
            "community_labels.csv",
            self.exporter.community_labels(state.partition, labels),
            "salience",
        )
        state.summary.update(
            {"keywords": len(selection.keywords), "vocabulary": len(termsets.vocabulary)}
        )
        state.termsets = termsets
        state.table = table
        state.selection = selection
        state.labels = labels

    def _expert_selection(
        self, state: RunState, termsets: TermSet, preprocessor: TextPreprocessor
    ) -> KeywordSelection:
        assert state.config.keywords_file is not None
        phrases = self.lexicon_repository.load_keywords(state.config.keywords_file)
        keywords: list[str] = []
        for phrase in phrases:
            keyword = self.salience_service.normalize_keyword(phrase, preprocessor)
            if not keyword or keyword in keywords:
                continue
            if not self.salience_service.occurrences(termsets, keyword).any():
                logger.warning("Expert keyword absent from the corpus", keyword=phrase)
                state.warnings.append(f"expert keyword {phrase!r} occurs in no paper; dropped")
                continue
            keywords.append(keyword)
        kept = self.salience_service.filter_generic_keywords(
            keywords, termsets, state.config.coverage_threshold
        )
        state.decisions.append(
            f"expert keyword list used as given ({len(kept)} of {len(phrases)} phrases kept); "
            "importance ranking not applied"
        )
        return KeywordSelection(keywords=tuple(kept))

    def _stage_accessibility(self, state: RunState, store: ArtifactStore) -> None:
        assert state.network is not None
        assert state.partition is not None
        config = state.config
        profile = self.accessibility_service.accessibility_profile(
            state.network, state.partition, config.accessibility_h
        )
        store.write("accessibility.csv", self.exporter.accessibility(profile), "accessibility")
        isolated = int(profile.isolated.sum())
        if isolated:
            state.warnings.append(f"{isolated} isolated nodes have accessibility 0")
        state.decisions.append(
            f"accessibility from ordinary random walks of length {config.accessibility_h}"
        )
        state.profile = profile

        try:
            ranking = self.accessibility_service.rank_peripherality(profile)
        except AccessibilityError as e:
            logger.warning("Peripherality ranking skipped", reason=str(e))
            state.warnings.append(f"peripherality ranking skipped: {e}")
            return
        lower, upper = ranking.kappa_range
        curves = [
            self.accessibility_service.cumulative_curve(profile, community)
            for community in sorted(ranking.areas)
        ]
        store.write(
            "peripherality.csv", self.exporter.peripherality(ranking, profile), "accessibility"
        )
        store.write(
            "accessibility_curves.csv",
            self.exporter.curve_points(curves, lower, upper, config.curve_points),
            "accessibility",
        )
        state.summary["most_peripheral_community"] = (
            community_letter(ranking.order[0]) if ranking.order else None
        )
        state.ranking = ranking

    def _stage_taxonomy(self, state: RunState, store: ArtifactStore) -> None:
        assert state.network is not None
        assert state.termsets is not None
        assert state.selection is not None
        keywords = list(state.selection.keywords)
        matrix = self.taxonomy_service.keyword_distance_matrix(
            keywords, state.network, state.termsets
        )
        filled, substituted = self.taxonomy_service.resolve_undefined(matrix)
        if substituted:
            state.warnings.append(f"{substituted} keyword pairs have no reachable papers")
            state.decisions.append(
                "undefined keyword distances set to the largest defined distance plus one"
            )
        dendrogram = self.taxonomy_service.build_dendrogram(keywords, filled)
        if dendrogram.violations:
            state.warnings.append(
                f"non-monotone merge heights at steps {list(dendrogram.violations)}"
            )
        dendrogram_path = state.extra.dendrogram or Path("dendrogram.nwk")
        store.write("keyword_distances.csv", self.exporter.distance_matrix(matrix), "taxonomy")
        store.write(dendrogram_path, self.exporter.newick(dendrogram), "taxonomy")
        store.write("dendrogram.json", self.exporter.dendrogram_json(dendrogram), "taxonomy")
        state.summary["dendrogram_leaves"] = dendrogram.n_leaves

        threshold = state.config.cut_threshold
        if threshold is None:
            state.decisions.append("no cut threshold given; keyword groups not produced")
            return
        groups = self.taxonomy_service.cut_dendrogram(dendrogram, threshold)
        assignment = self.taxonomy_service.assign_papers_to_groups(groups, state.termsets)
        group_coarse = self.community_service.coarse_grain_labels(
            state.network,
            self.taxonomy_service.group_labels(assignment, state.network.ids),
            len(groups.groups),
        )
        store.write("keyword_groups.csv", self.exporter.keyword_groups(groups), "taxonomy")
        store.write(
            "group_assignment.csv",
            self.exporter.group_assignment(assignment, state.network.ids),
            "taxonomy",
        )
        store.write("group_coarse_graph.csv", self.exporter.coarse_graph(group_coarse), "taxonomy")
        state.summary.update(
            {
                "keyword_groups": len(groups.groups),
                "papers_assigned_to_groups": assignment.assigned,
            }
        )

    def _stage_layout(self, state: RunState, store: ArtifactStore) -> None:
        assert state.network is not None
        assert state.partition is not None
        assert state.coarse is not None
        config = state.config
        layout = self.layout_service.layout_network(
            state.network,
            dims=config.layout_dims,
            iterations=config.layout_iterations,
            seed=config.seed,
            approximate_above=config.layout_approximate_above,
        )
        store.write("coordinates.csv", self.exporter.coordinates(layout, state.partition), "layout")
        planar = layout
        if layout.dims == 3:  # noqa: PLR2004
            planar = self.layout_service.project_2d(layout)
            store.write(
                "coordinates_2d.csv", self.exporter.coordinates(planar, state.partition), "layout"
            )
        areas = state.ranking.areas if state.ranking is not None else None
        store.write(
            "science_map.json",
            self.exporter.science_map(layout, state.partition, state.coarse, state.labels, areas),
            "layout",
        )
        store.write(
            "vosviewer_map.txt", self.exporter.vosviewer_map(planar, state.partition), "layout"
        )
        store.write(
            "vosviewer_network.txt", self.exporter.vosviewer_network(state.network), "layout"
        )
        if layout.approximate:
            state.decisions.append(
                f"layout repulsion limited to 2k neighbourhoods above "
                f"{config.layout_approximate_above} nodes"
            )
        state.summary["layout_dims"] = layout.dims

    def _stage_timeline(self, state: RunState, store: ArtifactStore) -> None:
        assert state.corpus is not None
        assert state.termsets is not None
        assert state.selection is not None
        timeline = self.timeline_service.build_timelines(
            state.selection.keywords, state.corpus, state.termsets
        )
        truncated = self.timeline_service.truncate_sparse_years(
            timeline, state.config.timeline_min_papers
        )
        state.warnings.extend(truncated.warnings)
        store.write("keyword_timeline.csv", self.exporter.timeline(truncated), "timeline")
        store.write(
            "papers_per_year.csv", self.exporter.papers_per_year(timeline.totals), "timeline"
        )
        state.summary["timeline_years"] = list(truncated.years)

    def _stage_report(self, state: RunState, store: ArtifactStore) -> None:
        if state.partition is None or state.coarse is None or state.corpus is None:
            return
        areas = state.ranking.areas if state.ranking is not None else None
        store.write(
            "community_summary.csv",
            self.exporter.community_summary(
                state.corpus, state.partition, state.coarse, state.labels, areas, _TOP_CITED
            ),
            "communities",
        )

    @staticmethod
    def _versions() -> dict[str, str]:
        try:
            own = metadata.version("scimap")
        except metadata.PackageNotFoundError:
            own = __version__
        return {
            "scimap": own,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "networkx": nx.__version__,
        }
