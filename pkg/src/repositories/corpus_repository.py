import json
from collections.abc import Iterable
from pathlib import Path
from typing import Any

import structlog
from pydantic import ValidationError

from src.core.errors import DuplicatePaperIdError, MalformedRecordError, MissingPaperIdError
from src.models.corpus import Corpus, Paper, ParseReport

logger = structlog.get_logger()


class CorpusRepository:
    """Reads and writes corpora as UTF-8 JSON lines, one paper per line."""

    def parse_records(self, stream: Iterable[str | bytes]) -> Corpus:
        """Parse JSON lines; byte lines are decoded as UTF-8 one at a time."""
        papers: list[Paper] = []
        seen: dict[str, int] = {}
        self_refs = duplicate_refs = empty_abstracts = blank_lines = 0

        for line_number, raw in enumerate(stream, start=1):
            try:
                line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
            except UnicodeDecodeError as e:
                msg = f"invalid UTF-8 at byte {e.start}"
                raise MalformedRecordError(msg, line_number) from e
            if not line.strip():
                blank_lines += 1
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise MalformedRecordError(f"invalid JSON ({e.msg})", line_number) from e
            if not isinstance(record, dict):
                raise MalformedRecordError("record is not an object", line_number)

            paper_id = record.get("id")
            if paper_id is None or (isinstance(paper_id, str) and not paper_id.strip()):
                raise MissingPaperIdError(line_number)
            if not isinstance(paper_id, str):
                raise MalformedRecordError("id must be a string", line_number)
            if paper_id in seen:
                raise DuplicatePaperIdError(paper_id, line_number)

            references, dropped_self, dropped_duplicates = self._clean_references(
                paper_id, record.get("references") or [], line_number
            )
            self_refs += dropped_self
            duplicate_refs += dropped_duplicates

            try:
                paper = Paper.model_validate({**record, "references": references})
            except ValidationError as e:
                raise MalformedRecordError(self._describe(e), line_number) from e

            if not paper.abstract.strip():
                empty_abstracts += 1
            seen[paper_id] = line_number
            papers.append(paper)

        report = ParseReport(
            dropped_self_references=self_refs,
            dropped_duplicate_references=duplicate_refs,
            empty_abstracts=empty_abstracts,
            blank_lines=blank_lines,
        )
        if self_refs or duplicate_refs:
            logger.warning(
                "Dropped references while parsing",
                self_references=self_refs,
                duplicate_references=duplicate_refs,
            )
        if empty_abstracts:
            logger.warning("Papers with empty abstracts admitted", count=empty_abstracts)
        return Corpus(papers=tuple(papers), report=report)

    def serialize_records(self, corpus: Corpus) -> str:
        lines = [
            json.dumps(paper.model_dump(mode="json"), ensure_ascii=False, sort_keys=False)
            for paper in corpus.papers
        ]
        return "".join(f"{line}\n" for line in lines)

    def load(self, path: Path) -> Corpus:
        if not path.is_file():
            msg = f"corpus file {path} not found"
            raise FileNotFoundError(msg)
        with path.open("rb") as handle:
            corpus = self.parse_records(handle)
        logger.info("Corpus loaded", path=str(path), papers=corpus.N)
        return corpus

    def save(self, path: Path, corpus: Corpus) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.serialize_records(corpus), encoding="utf-8")
        logger.info("Corpus written", path=str(path), papers=corpus.N)

    @staticmethod
    def _clean_references(
        paper_id: str, references: Any, line_number: int
    ) -> tuple[list[str], int, int]:
        if not isinstance(references, list) or not all(isinstance(r, str) for r in references):
            raise MalformedRecordError("references must be an array of strings", line_number)
        cleaned: list[str] = []
        kept: set[str] = set()
        dropped_self = dropped_duplicates = 0
        for reference in references:
            if reference == paper_id:
                dropped_self += 1
            elif reference in kept:
                dropped_duplicates += 1
            else:
                kept.add(reference)
                cleaned.append(reference)
        return cleaned, dropped_self, dropped_duplicates

    @staticmethod
    def _describe(error: ValidationError) -> str:
        first = error.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "record"
        return f"{location}: {first['msg']}"
