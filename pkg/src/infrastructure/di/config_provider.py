from dishka import Provider, Scope, provide

from src.core.config import PipelineConfig, get_settings


class ConfigProvider(Provider):
    scope = Scope.APP

    @provide
    def provide_settings(self) -> PipelineConfig:
        return get_settings()
