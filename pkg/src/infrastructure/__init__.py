from src.infrastructure.export import ArtifactExporter, ArtifactStore

__all__ = ["ArtifactExporter", "ArtifactStore"]
