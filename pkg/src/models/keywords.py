from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import sparse


@dataclass(frozen=True)
class TermSet:
    """Per-paper term sets A_i plus the preprocessed text used for phrase matching."""

    ids: tuple[str, ...]
    terms: tuple[frozenset[str], ...]
    texts: tuple[str, ...]

    @cached_property
    def index(self) -> dict[str, int]:
        return {paper_id: position for position, paper_id in enumerate(self.ids)}

    @cached_property
    def vocabulary(self) -> tuple[str, ...]:
        return tuple(sorted(set().union(*self.terms))) if self.terms else ()

    @cached_property
    def term_index(self) -> dict[str, int]:
        return {term: position for position, term in enumerate(self.vocabulary)}

    @cached_property
    def incidence(self) -> sparse.csr_array:
        """Binary paper x term matrix over ``vocabulary``."""
        rows: list[int] = []
        cols: list[int] = []
        for paper, terms in enumerate(self.terms):
            for term in sorted(terms):
                rows.append(paper)
                cols.append(self.term_index[term])
        data = np.ones(len(rows), dtype=np.int64)
        return sparse.csr_array(
            (data, (rows, cols)), shape=(len(self.ids), len(self.vocabulary))
        )

    def terms_of(self, paper_id: str) -> frozenset[str]:
        return self.terms[self.index[paper_id]]


@dataclass(frozen=True)
class RankedTerm:
    term: str
    importance: float
    community: int
    f_in: float
    f_out: float


@dataclass(frozen=True)
class KeywordTable:
    """Document counts n_a(w) and the derived in/out-community frequencies.

    Rows follow ``terms`` (sorted), columns follow community labels.
    """

    terms: tuple[str, ...]
    counts: np.ndarray
    sizes: tuple[int, ...]
    n_papers: int
    f_in: np.ndarray
    f_out: np.ndarray

    @cached_property
    def row_of(self) -> dict[str, int]:
        return {term: row for row, term in enumerate(self.terms)}

    @property
    def n_communities(self) -> int:
        return len(self.sizes)

    @cached_property
    def contrast(self) -> np.ndarray:
        return self.f_in - self.f_out

    @cached_property
    def importance(self) -> np.ndarray:
        if not self.terms:
            return np.zeros(0)
        return self.contrast.max(axis=1)

    @cached_property
    def best_community(self) -> np.ndarray:
        if not self.terms:
            return np.zeros(0, dtype=np.int64)
        return self.contrast.argmax(axis=1)

    def document_frequency(self, term: str) -> int:
        return int(self.counts[self.row_of[term]].sum())

    def ranked(self, row: int) -> RankedTerm:
        community = int(self.best_community[row])
        return RankedTerm(
            term=self.terms[row],
            importance=float(self.importance[row]),
            community=community,
            f_in=float(self.f_in[row, community]),
            f_out=float(self.f_out[row, community]),
        )


@dataclass(frozen=True)
class KeywordSelection:
    keywords: tuple[str, ...]
    skipped_unigrams: tuple[str, ...] = ()
    skipped_bigrams: tuple[str, ...] = ()
    warnings: tuple[str, ...] = field(default=())
