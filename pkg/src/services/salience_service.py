from collections.abc import Iterable, Mapping, Sequence

import numpy as np
import structlog
from scipy import sparse

from src.core.errors import PartitionError
from src.infrastructure.text.preprocessor import TextPreprocessor, extract_terms, joined_text
from src.models.community import CommunityPartition
from src.models.corpus import Corpus
from src.models.keywords import KeywordSelection, KeywordTable, RankedTerm, TermSet
from src.repositories.lexicon_repository import Lexicon

logger = structlog.get_logger()

_BIGRAM_WORDS = 2


def _term_names(ranked: Sequence[RankedTerm] | Sequence[str]) -> list[str]:
    return [item if isinstance(item, str) else item.term for item in ranked]


class SalienceService:
    """Term sets per paper and the community-relative importance index I(w)."""

    def preprocess(
        self, text: str, stopword_list: Iterable[str], lemma_table: Mapping[str, str]
    ) -> list[str]:
        lexicon = Lexicon(stopwords=frozenset(stopword_list), lemmas=dict(lemma_table))
        return TextPreprocessor(lexicon).tokens(text)

    def extract_terms(self, *segments: Sequence[str]) -> frozenset[str]:
        return extract_terms(*segments)

    def build_term_sets(self, corpus: Corpus, preprocessor: TextPreprocessor) -> TermSet:
        terms: list[frozenset[str]] = []
        texts: list[str] = []
        for paper in corpus.papers:
            segments = preprocessor.paper_segments(paper.title, paper.abstract)
            terms.append(extract_terms(*segments))
            texts.append(joined_text(segments))
        termsets = TermSet(ids=corpus.ids, terms=tuple(terms), texts=tuple(texts))
        logger.info(
            "Term sets extracted",
            papers=len(termsets.ids),
            vocabulary=len(termsets.vocabulary),
            empty=sum(1 for t in terms if not t),
        )
        return termsets

    def normalize_keyword(self, phrase: str, preprocessor: TextPreprocessor) -> str:
        """Run an expert phrase through the same pipeline as the abstracts."""
        return " ".join(preprocessor.tokens(phrase))

    def occurrences(self, termsets: TermSet, keyword: str) -> np.ndarray:
        """Boolean mask over papers containing ``keyword``.

        Unigrams and bigrams are looked up in the term sets; longer phrases are
        matched as substrings of the preprocessed text.
        """
        column = termsets.term_index.get(keyword)
        if column is not None:
            return termsets.incidence[:, [column]].toarray().ravel() > 0
        if len(keyword.split(" ")) > _BIGRAM_WORDS:
            needle = f" {keyword} "
            return np.array([needle in f" {text} " for text in termsets.texts], dtype=bool)
        return np.zeros(len(termsets.ids), dtype=bool)

    def community_frequencies(
        self, termsets: TermSet, partition: CommunityPartition
    ) -> KeywordTable:
        assignment = partition.assignment
        missing = [paper_id for paper_id in termsets.ids if paper_id not in assignment]
        if missing:
            msg = f"partition misses {len(missing)} paper(s), first {missing[0]!r}"
            raise PartitionError(msg)

        n_papers = len(partition.ids)
        sizes = np.asarray(partition.sizes, dtype=np.int64)
        degenerate = np.flatnonzero(sizes == n_papers)
        if degenerate.size:
            msg = (
                f"community {int(degenerate[0])} spans the whole network "
                f"(|a| = N = {n_papers}); out-community frequency is undefined"
            )
            raise PartitionError(msg)

        labels = np.array([assignment[paper_id] for paper_id in termsets.ids], dtype=np.int64)
        membership = sparse.csr_array(
            (np.ones(labels.size, dtype=np.int64), (np.arange(labels.size), labels)),
            shape=(labels.size, partition.n_communities),
        )
        counts = (termsets.incidence.T @ membership).toarray().astype(np.int64)
        outside = counts.sum(axis=1, keepdims=True) - counts
        f_in = counts / sizes
        f_out = outside / (n_papers - sizes)
        logger.info(
            "Community frequencies computed",
            terms=counts.shape[0],
            communities=partition.n_communities,
        )
        return KeywordTable(
            terms=termsets.vocabulary,
            counts=counts,
            sizes=tuple(int(s) for s in sizes),
            n_papers=n_papers,
            f_in=f_in,
            f_out=f_out,
        )

    def keyword_statistics(
        self, keyword: str, termsets: TermSet, partition: CommunityPartition
    ) -> RankedTerm:
        """I, best community and F_in/F_out for any keyword, phrases included."""
        mask = self.occurrences(termsets, keyword)
        labels = np.array([partition.assignment[paper_id] for paper_id in termsets.ids])
        sizes = np.asarray(partition.sizes, dtype=np.int64)
        counts = np.bincount(labels[mask], minlength=partition.n_communities)
        n_papers = len(partition.ids)
        f_in = counts / sizes
        f_out = (counts.sum() - counts) / (n_papers - sizes)
        contrast = f_in - f_out
        community = int(contrast.argmax())
        return RankedTerm(
            term=keyword,
            importance=float(contrast[community]),
            community=community,
            f_in=float(f_in[community]),
            f_out=float(f_out[community]),
        )

    def importance_index(self, table: KeywordTable) -> list[RankedTerm]:
        """I(w) = max_a [F_in - F_out], sorted descending, ties by term."""
        order = sorted(
            range(len(table.terms)), key=lambda row: (-table.importance[row], table.terms[row])
        )
        return [table.ranked(row) for row in order]

    def select_keywords(
        self,
        ranked: Sequence[RankedTerm] | Sequence[str],
        k: int = 50,
        reference_size: int = 200,
        full_ranking: Sequence[RankedTerm] | Sequence[str] | None = None,
    ) -> KeywordSelection:
        """Walk the ranking, dropping unigrams that are words of a bigram near the top.

        Bigrams in the first ``reference_size`` ranks of ``full_ranking`` (``ranked``
        when omitted) subsume their words. A bigram outside that region is skipped
        if one of its words was already chosen.
        """
        terms = _term_names(ranked)
        head = _term_names(full_ranking if full_ranking is not None else ranked)[:reference_size]
        reference = {term for term in head if self._words(term) == _BIGRAM_WORDS}
        subsumed = {word for term in reference for word in term.split(" ")}

        selected: list[str] = []
        chosen_unigrams: set[str] = set()
        skipped_unigrams: list[str] = []
        skipped_bigrams: list[str] = []
        for term in terms:
            if len(selected) == k:
                break
            words = term.split(" ")
            if len(words) == 1:
                if term in subsumed:
                    skipped_unigrams.append(term)
                    continue
                chosen_unigrams.add(term)
            elif len(words) == _BIGRAM_WORDS:
                if term not in reference and chosen_unigrams.intersection(words):
                    skipped_bigrams.append(term)
                    continue
                subsumed.update(words)
            selected.append(term)

        warnings: tuple[str, ...] = ()
        if len(selected) < k:
            warning = f"only {len(selected)} eligible keywords for k={k}"
            logger.warning("Fewer keywords than requested", selected=len(selected), k=k)
            warnings = (warning,)
        return KeywordSelection(
            keywords=tuple(selected),
            skipped_unigrams=tuple(skipped_unigrams),
            skipped_bigrams=tuple(skipped_bigrams),
            warnings=warnings,
        )

    def label_communities(
        self,
        partition: CommunityPartition,
        table: KeywordTable,
        top_m: int = 3,
        reference_size: int = 200,
    ) -> dict[int, list[str]]:
        """Top ``top_m`` keywords per community by F_in - F_out for that community."""
        labels: dict[int, list[str]] = {}
        for community in range(partition.n_communities):
            present = np.flatnonzero(table.counts[:, community] > 0) if table.terms else []
            ordered = sorted(
                (int(row) for row in present),
                key=lambda row: (-table.contrast[row, community], table.terms[row]),
            )
            if not ordered:
                logger.warning("Community has no terms to label it", community=community)
                labels[community] = []
                continue
            selection = self.select_keywords(
                [table.terms[row] for row in ordered], k=top_m, reference_size=reference_size
            )
            labels[community] = list(selection.keywords)
        return labels

    def filter_generic_keywords(
        self, keywords: Sequence[str], termsets: TermSet, coverage_threshold: float = 0.5
    ) -> list[str]:
        """Drop keywords present in strictly more than ``coverage_threshold * N`` papers."""
        limit = coverage_threshold * len(termsets.ids)
        kept = []
        for keyword in keywords:
            coverage = int(self.occurrences(termsets, keyword).sum())
            if coverage > limit:
                logger.info("Generic keyword dropped", keyword=keyword, papers=coverage)
                continue
            kept.append(keyword)
        return kept

    @staticmethod
    def _words(term: str) -> int:
        return term.count(" ") + 1
