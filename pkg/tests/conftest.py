import pytest

from src.infrastructure.export import ArtifactExporter
from src.infrastructure.text.preprocessor import TextPreprocessor
from src.models.synthetic import SyntheticCorpusSpec
from src.repositories.corpus_repository import CorpusRepository
from src.repositories.lexicon_repository import Lexicon, LexiconRepository
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


@pytest.fixture
def corpus_service() -> CorpusService:
    return CorpusService(corpus_repository=CorpusRepository())


@pytest.fixture
def network_service() -> CitationNetworkService:
    return CitationNetworkService()


@pytest.fixture
def community_service() -> CommunityService:
    return CommunityService()


@pytest.fixture
def salience_service() -> SalienceService:
    return SalienceService()


@pytest.fixture
def taxonomy_service(
    network_service: CitationNetworkService, salience_service: SalienceService
) -> TaxonomyService:
    return TaxonomyService(network_service=network_service, salience_service=salience_service)


@pytest.fixture
def accessibility_service() -> AccessibilityService:
    return AccessibilityService()


@pytest.fixture
def layout_service() -> LayoutService:
    return LayoutService()


@pytest.fixture
def timeline_service(salience_service: SalienceService) -> TimelineService:
    return TimelineService(salience_service=salience_service)


@pytest.fixture
def synthetic_service() -> SyntheticService:
    return SyntheticService()


@pytest.fixture
def lexicon() -> Lexicon:
    return LexiconRepository().load()


@pytest.fixture
def preprocessor(lexicon: Lexicon) -> TextPreprocessor:
    return TextPreprocessor(lexicon)


@pytest.fixture
def pipeline_service(
    corpus_service: CorpusService,
    network_service: CitationNetworkService,
    community_service: CommunityService,
    salience_service: SalienceService,
    accessibility_service: AccessibilityService,
    taxonomy_service: TaxonomyService,
    layout_service: LayoutService,
    timeline_service: TimelineService,
    synthetic_service: SyntheticService,
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
        lexicon_repository=LexiconRepository(),
        exporter=ArtifactExporter(),
    )


@pytest.fixture
def small_spec() -> SyntheticCorpusSpec:
    return SyntheticCorpusSpec(
        topics=3,
        papers_per_topic=30,
        intra_probability=0.3,
        inter_probability=0.005,
        seed=11,
    )
