from dishka import Provider, Scope, provide

from src.repositories.corpus_repository import CorpusRepository
from src.repositories.lexicon_repository import LexiconRepository


class RepositoryProvider(Provider):
    scope = Scope.APP

    @provide
    def provide_corpus_repository(self) -> CorpusRepository:
        return CorpusRepository()

    @provide
    def provide_lexicon_repository(self) -> LexiconRepository:
        return LexiconRepository()
