from dishka import Provider, Scope, provide

from src.infrastructure.export import ArtifactExporter


class InfrastructureProvider(Provider):
    scope = Scope.APP

    @provide
    def provide_artifact_exporter(self) -> ArtifactExporter:
        return ArtifactExporter()
