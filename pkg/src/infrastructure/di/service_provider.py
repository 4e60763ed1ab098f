from dishka import Provider, Scope, provide

from src.infrastructure.export import ArtifactExporter
from src.repositories.corpus_repository import CorpusRepository
from src.repositories.lexicon_repository import LexiconRepository
from src.services.accessibility_service import AccessibilityService
from src.services.citation_network_service import CitationNetworkService
from src.services.community_service import CommunityService
from src.services.corpus_service import CorpusService
from src.services.layout_service import LayoutService
from src.services.pipeline_service import PipelineService
from src.services.salience_service import SalienceService
from src.services.synthetic_service import SyntheticService
from src.services.taxonomy_service import TaxonomyService
from src.services.timeline_service import TimelineService


class ServiceProvider(Provider):
    scope = Scope.APP

    citation_network_service = provide(CitationNetworkService)
    community_service = provide(CommunityService)
    salience_service = provide(SalienceService)
    accessibility_service = provide(AccessibilityService)
    layout_service = provide(LayoutService)
    synthetic_service = provide(SyntheticService)

    @provide
    def provide_corpus_service(self, corpus_repository: CorpusRepository) -> CorpusService:
        return CorpusService(corpus_repository=corpus_repository)

    @provide
    def provide_taxonomy_service(
        self,
        network_service: CitationNetworkService,
        salience_service: SalienceService,
    ) -> TaxonomyService:
        return TaxonomyService(network_service=network_service, salience_service=salience_service)

    @provide
    def provide_timeline_service(self, salience_service: SalienceService) -> TimelineService:
        return TimelineService(salience_service=salience_service)

    @provide(scope=Scope.REQUEST)
    def provide_pipeline_service(
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
    ) -> PipelineService:
        return PipelineService(
            corpus_service=corpus_service,
            network_service=network_service,
            community_service=community_service,
            salience_service=salience_service,
            accessibility_service=accessibility_service,
            taxonomy_service=taxonomy_service,
            layout_service=layout_service,
            timeline_service=timeline_service,
            synthetic_service=synthetic_service,
            lexicon_repository=lexicon_repository,
            exporter=exporter,
        )
