from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import structlog

from src.core.errors import ConfigError

logger = structlog.get_logger()

_DATA_PACKAGE = "src.infrastructure.text.data"


@dataclass(frozen=True)
class Lexicon:
    stopwords: frozenset[str] = field(default_factory=frozenset)
    lemmas: dict[str, str] = field(default_factory=dict)


class LexiconRepository:
    """Loads stopword lists (one word per line) and lemma tables (``surface<TAB>lemma``).

    Without explicit paths the files bundled with the package are used.
    """

    def load(self, stopwords_path: Path | None = None, lemmas_path: Path | None = None) -> Lexicon:
        stopwords = self._parse_stopwords(self._read(stopwords_path, "stopwords.txt"))
        lemmas = self._parse_lemmas(self._read(lemmas_path, "lemmas.tsv"))
        logger.debug("Lexicon loaded", stopwords=len(stopwords), lemmas=len(lemmas))
        return Lexicon(stopwords=stopwords, lemmas=lemmas)

    def load_keywords(self, path: Path) -> list[str]:
        """Expert keyword file: one phrase per line, blank lines and ``#`` comments skipped."""
        text = self._read(path, "")
        keywords: list[str] = []
        for line in text.splitlines():
            phrase = line.strip()
            if phrase and not phrase.startswith("#") and phrase not in keywords:
                keywords.append(phrase)
        return keywords

    @staticmethod
    def _read(path: Path | None, bundled: str) -> str:
        if path is None:
            return resources.files(_DATA_PACKAGE).joinpath(bundled).read_text(encoding="utf-8")
        if not path.is_file():
            msg = f"lexicon file {path} not found"
            raise ConfigError(msg)
        return path.read_text(encoding="utf-8")

    @staticmethod
    def _parse_stopwords(text: str) -> frozenset[str]:
        return frozenset(
            word.strip().lower()
            for word in text.splitlines()
            if word.strip() and not word.startswith("#")
        )

    @staticmethod
    def _parse_lemmas(text: str) -> dict[str, str]:
        lemmas: dict[str, str] = {}
        for line_number, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():  # noqa: PLR2004
                msg = f"lemma table line {line_number}: expected 'surface<TAB>lemma'"
                raise ConfigError(msg)
            lemmas[parts[0].strip().lower()] = parts[1].strip().lower()
        return lemmas
