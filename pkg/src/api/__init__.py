from src.api.routers import runs_router

__all__ = ["runs_router"]
