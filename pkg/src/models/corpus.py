from typing import Any

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from src.core.errors import DuplicatePaperIdError, UnknownNodeError


class Paper(BaseModel):
    model_config = ConfigDict(frozen=True, extra="ignore")

    id: str = Field(..., min_length=1, description="Opaque unique paper id")
    title: str = Field(default="", description="Title text")
    abstract: str = Field(default="", description="Abstract text, may be empty")
    year: int | None = Field(default=None, ge=1800, le=2100, description="Publication year")
    citation_count: int = Field(default=0, ge=0, description="Citations received")
    references: tuple[str, ...] = Field(default=(), description="Referenced paper ids")

    @field_validator("title", "abstract", mode="before")
    @classmethod
    def _none_is_empty(cls, value: Any) -> Any:
        return "" if value is None else value

    @model_validator(mode="after")
    def _simple_references(self) -> "Paper":
        if self.id in self.references:
            msg = f"paper {self.id!r} references itself"
            raise ValueError(msg)
        if len(set(self.references)) != len(self.references):
            msg = f"paper {self.id!r} has duplicate references"
            raise ValueError(msg)
        return self


class ParseReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    dropped_self_references: int = 0
    dropped_duplicate_references: int = 0
    empty_abstracts: int = 0
    blank_lines: int = 0


class Corpus(BaseModel):
    model_config = ConfigDict(frozen=True)

    papers: tuple[Paper, ...] = ()
    report: ParseReport = Field(default_factory=ParseReport)

    _index: dict[str, int] = PrivateAttr(default_factory=dict)

    def model_post_init(self, context: Any, /) -> None:
        index: dict[str, int] = {}
        for position, paper in enumerate(self.papers):
            if paper.id in index:
                raise DuplicatePaperIdError(paper.id, position + 1)
            index[paper.id] = position
        self._index = index

    @property
    def N(self) -> int:  # noqa: N802
        return len(self.papers)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(paper.id for paper in self.papers)

    def index_of(self, paper_id: str) -> int:
        try:
            return self._index[paper_id]
        except KeyError:
            raise UnknownNodeError(paper_id) from None

    def get(self, paper_id: str) -> Paper:
        return self.papers[self.index_of(paper_id)]

    def __eq__(self, other: object) -> bool:
        """Corpora compare by their papers; ``report`` describes one particular parse."""
        if not isinstance(other, Corpus):
            return NotImplemented
        return self.papers == other.papers

    def __hash__(self) -> int:
        return hash(self.ids)

    def __contains__(self, paper_id: object) -> bool:
        return paper_id in self._index

    def __len__(self) -> int:
        return len(self.papers)


class CorpusStats(BaseModel):
    paper_count: int
    year_min: int | None = None
    year_max: int | None = None
    papers_per_year: dict[int, int] = Field(default_factory=dict)
    papers_without_year: int = 0
    empty_abstracts: int = 0
    out_of_corpus_references: int = 0
