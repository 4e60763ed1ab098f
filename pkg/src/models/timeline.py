from dataclasses import dataclass, field


@dataclass(frozen=True)
class KeywordTimeline:
    """Per-year fraction of papers containing each keyword.

    Years without papers never appear; ``totals`` is the papers-per-year series.
    """

    totals: dict[int, int]
    counts: dict[str, dict[int, int]]
    warnings: tuple[str, ...] = field(default=())

    @property
    def keywords(self) -> tuple[str, ...]:
        return tuple(self.counts)

    @property
    def years(self) -> tuple[int, ...]:
        return tuple(sorted(self.totals))

    def frequency(self, keyword: str, year: int) -> float:
        return self.counts[keyword][year] / self.totals[year]

    def row(self, keyword: str) -> dict[int, float]:
        return {year: self.frequency(keyword, year) for year in self.years}
