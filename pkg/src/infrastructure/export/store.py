import hashlib
import os
from pathlib import Path

import structlog
from pydantic import ValidationError

from src.core.errors import ConfigError
from src.models.manifest import ArtifactEntry, RunManifest

logger = structlog.get_logger()

MANIFEST_NAME = "manifest.json"


class ArtifactStore:
    """Writes run artifacts and remembers them, so a failed run can take them back."""

    def __init__(self, output_dir: Path) -> None:
        self.output_dir = output_dir
        self._entries: dict[Path, ArtifactEntry] = {}

    @property
    def manifest_path(self) -> Path:
        return self.output_dir / MANIFEST_NAME

    @property
    def entries(self) -> list[ArtifactEntry]:
        return sorted(self._entries.values(), key=lambda entry: entry.path)

    def prepare(self) -> None:
        """Create the output directory and delete files a previous manifest declared."""
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            msg = f"cannot create output directory {self.output_dir}: {e}"
            raise ConfigError(msg) from e
        if not os.access(self.output_dir, os.W_OK):
            msg = f"output directory {self.output_dir} is not writable"
            raise ConfigError(msg)

        previous = self.read_manifest()
        if previous is None:
            return
        for entry in previous.files:
            self._resolve(entry.path).unlink(missing_ok=True)
        self.manifest_path.unlink(missing_ok=True)
        logger.info("Previous run outputs removed", files=len(previous.files))

    def read_manifest(self) -> RunManifest | None:
        if not self.manifest_path.is_file():
            return None
        try:
            return RunManifest.model_validate_json(self.manifest_path.read_text(encoding="utf-8"))
        except ValidationError:
            logger.warning("Unreadable manifest left in place", path=str(self.manifest_path))
            return None

    def write(self, name: str | Path, content: str, stage: str) -> Path:
        path = self._resolve(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = content.encode("utf-8")
        path.write_bytes(data)
        entry = ArtifactEntry(
            path=self._display(path),
            stage=stage,
            sha256=hashlib.sha256(data).hexdigest(),
            bytes=len(data),
        )
        self._entries[path] = entry
        logger.debug("Artifact written", path=entry.path, stage=stage, bytes=entry.bytes)
        return path

    def write_manifest(self, manifest: RunManifest) -> Path:
        self.manifest_path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return self.manifest_path

    def discard(self) -> None:
        for path in self._entries:
            path.unlink(missing_ok=True)
        logger.info("Partial outputs removed", files=len(self._entries))
        self._entries.clear()

    def _resolve(self, name: str | Path) -> Path:
        path = Path(name)
        return path if path.is_absolute() else self.output_dir / path

    def _display(self, path: Path) -> str:
        try:
            return path.relative_to(self.output_dir).as_posix()
        except ValueError:
            return path.as_posix()
