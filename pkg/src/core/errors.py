from enum import IntEnum


class ExitCode(IntEnum):
    OK = 0
    INPUT_ERROR = 1
    STAGE_FAILURE = 2


class ScimapError(Exception):
    """Base class for every error raised by the toolkit."""


class ConfigError(ScimapError):
    pass


class CorpusError(ScimapError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedRecordError(CorpusError):
    pass


class MissingPaperIdError(CorpusError):
    def __init__(self, line: int | None = None) -> None:
        super().__init__("record has no id", line)


class DuplicatePaperIdError(CorpusError):
    def __init__(self, paper_id: str, line: int | None = None) -> None:
        self.paper_id = paper_id
        super().__init__(f"duplicate paper id {paper_id!r}", line)


class UnknownNodeError(ScimapError):
    def __init__(self, node_id: str) -> None:
        self.node_id = node_id
        super().__init__(f"unknown node {node_id!r}")


class EmptyNetworkError(ScimapError):
    pass


class IsolatedNodeError(ScimapError):
    def __init__(self, node_id: str) -> None:
        self.node_id = node_id
        super().__init__(f"node {node_id!r} has no neighbours, random walk undefined")


class PartitionError(ScimapError):
    pass


class UnknownKeywordError(ScimapError):
    def __init__(self, keyword: str) -> None:
        self.keyword = keyword
        super().__init__(f"keyword {keyword!r} does not occur in any paper")


class DendrogramError(ScimapError):
    pass


class AccessibilityError(ScimapError):
    pass


class LayoutError(ScimapError):
    pass


class TimelineError(ScimapError):
    pass


class SyntheticSpecError(ScimapError):
    pass


class PipelineStageError(ScimapError):
    def __init__(self, stage: str, cause: BaseException) -> None:
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")


def exit_code_for(error: BaseException) -> ExitCode:
    if isinstance(error, PipelineStageError):
        if isinstance(error.cause, CorpusError | ConfigError | FileNotFoundError):
            return ExitCode.INPUT_ERROR
        return ExitCode.STAGE_FAILURE
    if isinstance(error, CorpusError | ConfigError | FileNotFoundError):
        return ExitCode.INPUT_ERROR
    return ExitCode.STAGE_FAILURE
