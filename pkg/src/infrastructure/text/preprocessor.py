import re
from collections.abc import Iterable, Sequence

from src.repositories.lexicon_repository import Lexicon

_LETTER_RUN = re.compile(r"[^\W\d_]+")
_MIN_STEM = 3
_ES_ENDINGS = ("sses", "shes", "ches", "xes", "zes")
_KEEP_S_ENDINGS = ("ss", "us", "is")


def fallback_lemma(token: str) -> str:
    """Rule-based plural stripping for tokens missing from the lemma table."""
    if len(token) <= _MIN_STEM:
        return token
    if token.endswith("ies") and len(token) > _MIN_STEM + 1:
        return token[:-3] + "y"
    if token.endswith(_ES_ENDINGS):
        return token[:-2]
    if token.endswith("s") and not token.endswith(_KEEP_S_ENDINGS):
        return token[:-1]
    return token


class TextPreprocessor:
    """Lowercase, split on non-letters, drop stopwords, lemmatize.

    ``segments`` keeps runs of tokens that were adjacent in the original text, so
    a removed stopword breaks the run and never joins its neighbours into a bigram.
    """

    def __init__(self, lexicon: Lexicon) -> None:
        self.lexicon = lexicon

    def lemma(self, token: str) -> str:
        return self.lexicon.lemmas.get(token) or fallback_lemma(token)

    def segments(self, text: str) -> list[list[str]]:
        runs: list[list[str]] = []
        current: list[str] = []
        for token in _LETTER_RUN.findall(text.lower()):
            if token in self.lexicon.stopwords:
                if current:
                    runs.append(current)
                    current = []
                continue
            current.append(self.lemma(token))
        if current:
            runs.append(current)
        return runs

    def tokens(self, text: str) -> list[str]:
        return [token for run in self.segments(text) for token in run]

    def paper_segments(self, title: str, abstract: str) -> list[list[str]]:
        return self.segments(title) + self.segments(abstract)


def extract_terms(*segments: Sequence[str]) -> frozenset[str]:
    """Unigrams plus adjacent bigrams, each segment contributing its own bigrams."""
    terms: set[str] = set()
    for run in segments:
        terms.update(run)
        terms.update(f"{first} {second}" for first, second in zip(run, run[1:], strict=False))
    return frozenset(terms)


def joined_text(segments: Iterable[Sequence[str]]) -> str:
    """Preprocessed text with segment breaks kept as `` | `` for phrase matching."""
    return " | ".join(" ".join(run) for run in segments)
