from src.repositories.corpus_repository import CorpusRepository
from src.repositories.lexicon_repository import Lexicon, LexiconRepository

__all__ = ["CorpusRepository", "Lexicon", "LexiconRepository"]
