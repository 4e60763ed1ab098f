from collections.abc import AsyncIterator
from contextlib import asynccontextmanager

import structlog
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from src.api.routers import runs_router
from src.core.config import get_settings
from src.core.di import setup_di
from src.core.log import configure_logging

logger = structlog.get_logger()


@asynccontextmanager
async def lifespan(app: FastAPI) -> AsyncIterator[None]:
    await logger.ainfo("Starting scimap API")
    yield
    await app.state.dishka_container.close()
    await logger.ainfo("Shutting down scimap API")


def create_app() -> FastAPI:
    settings = get_settings()
    configure_logging(settings.log_level)

    app = FastAPI(
        title="scimap",
        description="Science maps from bibliographic corpora",
        version="0.1.0",
        lifespan=lifespan,
    )

    setup_di(app)
    app.include_router(runs_router)

    @app.get("/health")
    async def health_check() -> dict[str, str]:
        return {"status": "healthy", "service": "scimap"}

    @app.exception_handler(Exception)
    async def global_exception_handler(request: Request, exc: Exception) -> JSONResponse:
        await logger.aerror(
            "Unhandled exception",
            path=request.url.path,
            method=request.method,
            error=str(exc),
        )
        return JSONResponse(
            status_code=500,
            content={"detail": "Internal server error", "error": str(exc)},
        )

    return app


app = create_app()
