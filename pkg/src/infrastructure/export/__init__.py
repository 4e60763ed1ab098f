from src.infrastructure.export.exporter import ArtifactExporter
from src.infrastructure.export.store import MANIFEST_NAME, ArtifactStore

__all__ = ["MANIFEST_NAME", "ArtifactExporter", "ArtifactStore"]
