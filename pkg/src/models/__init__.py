from src.models.community import CoarseGraph, CommunityPartition
from src.models.corpus import Corpus, CorpusStats, Paper
from src.models.keywords import KeywordSelection, KeywordTable, TermSet
from src.models.manifest import RunManifest, RunRequest, RunResponse
from src.models.network import CitationNetwork, DistanceMatrix
from src.models.synthetic import SyntheticCorpusSpec
from src.models.taxonomy import Dendrogram, KeywordDistanceMatrix

__all__ = [
    "CitationNetwork",
    "CoarseGraph",
    "CommunityPartition",
    "Corpus",
    "CorpusStats",
    "Dendrogram",
    "DistanceMatrix",
    "KeywordDistanceMatrix",
    "KeywordSelection",
    "KeywordTable",
    "Paper",
    "RunManifest",
    "RunRequest",
    "RunResponse",
    "SyntheticCorpusSpec",
    "TermSet",
]
