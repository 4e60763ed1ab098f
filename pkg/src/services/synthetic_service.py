import numpy as np
import structlog

from src.core.errors import SyntheticSpecError
from src.models.corpus import Corpus, Paper
from src.models.synthetic import SyntheticCorpusSpec

logger = structlog.get_logger()

_CONSONANTS = "bdgklmnptvz"
_VOWELS = "aeiou"
_SYLLABLES = 3
_CONNECTORS = ("of", "the", "and", "in", "for", "with")
_CONNECTOR_RATE = 0.5
_ROW_BLOCK = 512


class SyntheticService:
    """Planted-topic corpora for fixtures and demos.

    Every topic owns a vocabulary whose first word is its signature and appears in
    every title of the topic. Citations are Bernoulli draws per paper pair, and
    the later paper (by year, then by position) cites the earlier one.
    """

    def generate_synthetic_corpus(self, spec: SyntheticCorpusSpec) -> Corpus:
        corpus, _ = self.generate_with_topics(spec)
        return corpus

    def generate_with_topics(self, spec: SyntheticCorpusSpec) -> tuple[Corpus, dict[str, int]]:
        """Return the corpus together with the planted topic of every paper."""
        if spec.topics == 0:
            msg = "a synthetic corpus needs at least one topic"
            raise SyntheticSpecError(msg)

        rng = np.random.default_rng(spec.seed)
        topic_vocabularies, shared = self._vocabularies(spec, rng)

        n = spec.topics * spec.papers_per_topic
        topic_of = np.repeat(np.arange(spec.topics), spec.papers_per_topic)
        ids = [
            f"syn-{topic:02d}-{position:04d}"
            for topic in range(spec.topics)
            for position in range(spec.papers_per_topic)
        ]
        years = rng.integers(spec.first_year, spec.last_year + 1, size=n)
        citing, cited = self._draw_citations(spec, topic_of, years, rng)

        references: list[list[str]] = [[] for _ in range(n)]
        for source, target in zip(citing.tolist(), cited.tolist(), strict=True):
            references[source].append(ids[target])
        citation_count = np.bincount(cited, minlength=n)

        papers = []
        for position in range(n):
            vocabulary = topic_vocabularies[int(topic_of[position])]
            papers.append(
                Paper(
                    id=ids[position],
                    title=self._title(vocabulary, rng),
                    abstract=self._abstract(spec, vocabulary, shared, rng),
                    year=int(years[position]),
                    citation_count=int(citation_count[position]),
                    references=tuple(references[position]),
                )
            )
        corpus = Corpus(papers=tuple(papers))
        logger.info(
            "Synthetic corpus generated",
            papers=n,
            topics=spec.topics,
            citations=int(citing.size),
            seed=spec.seed,
        )
        return corpus, {ids[i]: int(topic_of[i]) for i in range(n)}

    @staticmethod
    def signature_words(spec: SyntheticCorpusSpec) -> list[str]:
        """Signature word per topic, reproducing the vocabulary draw of the generator."""
        vocabularies, _ = SyntheticService._vocabularies(spec, np.random.default_rng(spec.seed))
        return [vocabulary[0] for vocabulary in vocabularies]

    @staticmethod
    def _vocabularies(
        spec: SyntheticCorpusSpec, rng: np.random.Generator
    ) -> tuple[list[list[str]], list[str]]:
        taken: set[str] = set(spec.shared_vocabulary or ())
        if spec.topic_vocabularies is not None:
            for vocabulary in spec.topic_vocabularies:
                taken.update(vocabulary)

        def fresh(count: int) -> list[str]:
            words: list[str] = []
            while len(words) < count:
                letters = rng.integers(0, [len(_CONSONANTS), len(_VOWELS)] * _SYLLABLES)
                word = "".join(
                    _CONSONANTS[letters[2 * s]] + _VOWELS[letters[2 * s + 1]]
                    for s in range(_SYLLABLES)
                )
                if word not in taken:
                    taken.add(word)
                    words.append(word)
            return words

        if spec.topic_vocabularies is not None:
            topic_vocabularies = [list(vocabulary) for vocabulary in spec.topic_vocabularies]
        else:
            topic_vocabularies = [fresh(spec.topic_vocabulary_size) for _ in range(spec.topics)]
        if any(not vocabulary for vocabulary in topic_vocabularies):
            msg = "topic vocabularies must not be empty"
            raise SyntheticSpecError(msg)
        shared = (
            list(spec.shared_vocabulary)
            if spec.shared_vocabulary is not None
            else fresh(spec.shared_vocabulary_size)
        )
        return topic_vocabularies, shared

    @staticmethod
    def _draw_citations(
        spec: SyntheticCorpusSpec,
        topic_of: np.ndarray,
        years: np.ndarray,
        rng: np.random.Generator,
    ) -> tuple[np.ndarray, np.ndarray]:
        n = topic_of.size
        firsts: list[np.ndarray] = []
        seconds: list[np.ndarray] = []
        columns = np.arange(n)
        for start in range(0, n, _ROW_BLOCK):
            rows = np.arange(start, min(start + _ROW_BLOCK, n))
            same = topic_of[rows, None] == topic_of[None, :]
            probability = np.where(same, spec.intra_probability, spec.inter_probability)
            hits = (rng.random((rows.size, n)) < probability) & (columns[None, :] > rows[:, None])
            r, c = np.nonzero(hits)
            firsts.append(rows[r])
            seconds.append(c)
        first = np.concatenate(firsts) if firsts else np.zeros(0, dtype=np.int64)
        second = np.concatenate(seconds) if seconds else np.zeros(0, dtype=np.int64)
        # first < second, so a same-year pair is cited by the later position
        first_is_later = years[first] > years[second]
        citing = np.where(first_is_later, first, second)
        cited = np.where(first_is_later, second, first)
        return citing.astype(np.int64), cited.astype(np.int64)

    @staticmethod
    def _title(vocabulary: list[str], rng: np.random.Generator) -> str:
        picks = rng.integers(0, len(vocabulary), size=2)
        return f"{vocabulary[0].capitalize()} of {vocabulary[picks[0]]} and {vocabulary[picks[1]]}"

    @staticmethod
    def _abstract(
        spec: SyntheticCorpusSpec,
        vocabulary: list[str],
        shared: list[str],
        rng: np.random.Generator,
    ) -> str:
        length = spec.abstract_length
        from_topic = rng.random(length) < spec.topic_focus
        if not shared:
            from_topic[:] = True
        topic_picks = rng.integers(0, len(vocabulary), size=length)
        shared_picks = rng.integers(0, max(len(shared), 1), size=length)
        connect = rng.random(length) < _CONNECTOR_RATE
        connectors = rng.integers(0, len(_CONNECTORS), size=length)

        words: list[str] = []
        for position in range(length):
            if position and connect[position]:
                words.append(_CONNECTORS[connectors[position]])
            if from_topic[position]:
                words.append(vocabulary[topic_picks[position]])
            else:
                words.append(shared[shared_picks[position]])
        return " ".join(words) + "."
