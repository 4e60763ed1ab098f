from pathlib import Path

import structlog
from dishka import FromDishka
from dishka.integrations.fastapi import inject
from fastapi import APIRouter, HTTPException, status
from pydantic import ValidationError
from starlette.concurrency import run_in_threadpool

from src.core.config import PipelineConfig, load_config
from src.core.errors import (
    ConfigError,
    ExitCode,
    PipelineStageError,
    ScimapError,
    exit_code_for,
)
from src.models.manifest import (
    RunRequest,
    RunResponse,
    SyntheticRequest,
    SyntheticResponse,
)
from src.models.synthetic import SyntheticCorpusSpec
from src.services.pipeline_service import PipelineService

logger = structlog.get_logger()

router = APIRouter(prefix="/api", tags=["runs"])


@router.post("/runs", response_model=RunResponse)
@inject
async def start_run(
    run_request: RunRequest,
    settings: FromDishka[PipelineConfig],
    pipeline: FromDishka[PipelineService],
) -> RunResponse:
    overrides = run_request.model_dump(exclude={"stage"}, exclude_none=True)
    try:
        config = load_config(**{**settings.model_dump(), **overrides})
        manifest = await run_in_threadpool(pipeline.run_pipeline, config, run_request.stage)
    except ConfigError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e)) from e
    except PipelineStageError as e:
        await logger.awarning("Run failed", stage=e.stage, error=str(e.cause))
        code = (
            status.HTTP_400_BAD_REQUEST
            if exit_code_for(e) is ExitCode.INPUT_ERROR
            else status.HTTP_422_UNPROCESSABLE_ENTITY
        )
        raise HTTPException(status_code=code, detail=str(e)) from e

    return RunResponse(
        manifest=manifest,
        message=f"Run finished with {len(manifest.files)} artifacts",
    )


@router.post("/synthetic", response_model=SyntheticResponse)
@inject
async def generate_synthetic(
    synthetic_request: SyntheticRequest,
    pipeline: FromDishka[PipelineService],
) -> SyntheticResponse:
    try:
        spec = SyntheticCorpusSpec(
            **synthetic_request.model_dump(exclude={"output_path"}),
        )
    except ValidationError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e)) from e
    output_path = Path(synthetic_request.output_path)
    try:
        corpus = await run_in_threadpool(pipeline.generate_synthetic, spec, output_path)
    except ScimapError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e)) from e

    return SyntheticResponse(
        output_path=str(output_path),
        papers=corpus.N,
        message="Synthetic corpus generated",
    )
