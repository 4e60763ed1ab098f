from collections.abc import Sequence

import numpy as np
import structlog

from src.core.errors import TimelineError
from src.models.corpus import Corpus
from src.models.keywords import TermSet
from src.models.timeline import KeywordTimeline
from src.services.salience_service import SalienceService

logger = structlog.get_logger()


class TimelineService:
    def __init__(self, salience_service: SalienceService) -> None:
        self.salience_service = salience_service

    def keyword_timeline(
        self,
        keyword: str,
        corpus: Corpus,
        termsets: TermSet,
        year_range: tuple[int, int] | None = None,
    ) -> KeywordTimeline:
        return self.build_timelines([keyword], corpus, termsets, year_range)

    def build_timelines(
        self,
        keywords: Sequence[str],
        corpus: Corpus,
        termsets: TermSet,
        year_range: tuple[int, int] | None = None,
    ) -> KeywordTimeline:
        """Count papers per year containing each keyword; years without papers are omitted.

        Papers without a year are left out of every count.
        """
        if termsets.ids != corpus.ids:
            msg = "term sets do not follow the corpus order"
            raise TimelineError(msg)
        if year_range is not None and year_range[0] > year_range[1]:
            msg = f"empty year range {year_range[0]}..{year_range[1]}"
            raise TimelineError(msg)

        years = np.array(
            [-1 if paper.year is None else paper.year for paper in corpus.papers], dtype=np.int64
        )
        dated = years >= 0
        if year_range is not None:
            dated &= (years >= year_range[0]) & (years <= year_range[1])
        present = sorted({int(year) for year in years[dated]})
        totals = {year: int(np.count_nonzero(years[dated] == year)) for year in present}

        counts: dict[str, dict[int, int]] = {}
        warnings: list[str] = []
        for keyword in keywords:
            occurs = self.salience_service.occurrences(termsets, keyword)
            if not occurs.any():
                logger.warning("Keyword absent from the vocabulary", keyword=keyword)
                warnings.append(f"keyword {keyword!r} occurs in no paper; timeline is all zero")
            matched = years[occurs & dated]
            counts[keyword] = {year: int(np.count_nonzero(matched == year)) for year in present}

        logger.info("Keyword timelines built", keywords=len(counts), years=len(present))
        return KeywordTimeline(totals=totals, counts=counts, warnings=tuple(warnings))

    def truncate_sparse_years(self, timeline: KeywordTimeline, min_papers: int) -> KeywordTimeline:
        """Drop leading years with fewer than ``min_papers`` papers."""
        if min_papers < 1:
            msg = "min_papers must be at least 1"
            raise TimelineError(msg)
        years = timeline.years
        start = next(
            (i for i, year in enumerate(years) if timeline.totals[year] >= min_papers), len(years)
        )
        kept = years[start:]
        warnings = list(timeline.warnings)
        if years and not kept:
            logger.warning("Every year is below the paper threshold", min_papers=min_papers)
            warnings.append(f"no year reaches {min_papers} papers; timeline is empty")
        elif start:
            logger.info("Sparse leading years dropped", dropped=list(years[:start]), first=kept[0])
        return KeywordTimeline(
            totals={year: timeline.totals[year] for year in kept},
            counts={
                keyword: {year: row[year] for year in kept}
                for keyword, row in timeline.counts.items()
            },
            warnings=tuple(warnings),
        )
