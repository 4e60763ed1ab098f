from collections import Counter
from collections.abc import Iterable
from pathlib import Path

import structlog

from src.models.corpus import Corpus, CorpusStats
from src.repositories.corpus_repository import CorpusRepository

logger = structlog.get_logger()


class CorpusService:
    def __init__(self, corpus_repository: CorpusRepository) -> None:
        self.repository = corpus_repository

    def parse_records(self, stream: Iterable[str | bytes]) -> Corpus:
        return self.repository.parse_records(stream)

    def serialize(self, corpus: Corpus) -> str:
        return self.repository.serialize_records(corpus)

    def load(self, path: Path) -> Corpus:
        return self.repository.load(path)

    def save(self, path: Path, corpus: Corpus) -> None:
        self.repository.save(path, corpus)

    def corpus_stats(self, corpus: Corpus) -> CorpusStats:
        histogram = Counter(paper.year for paper in corpus.papers if paper.year is not None)
        years = sorted(histogram)
        out_of_corpus = sum(
            1
            for paper in corpus.papers
            for reference in paper.references
            if reference not in corpus
        )
        stats = CorpusStats(
            paper_count=corpus.N,
            year_min=years[0] if years else None,
            year_max=years[-1] if years else None,
            papers_per_year={year: histogram[year] for year in years},
            papers_without_year=corpus.N - sum(histogram.values()),
            empty_abstracts=corpus.report.empty_abstracts,
            out_of_corpus_references=out_of_corpus,
        )
        logger.info(
            "Corpus summarised",
            papers=stats.paper_count,
            year_min=stats.year_min,
            year_max=stats.year_max,
            empty_abstracts=stats.empty_abstracts,
        )
        return stats
