from src.services.pipeline_service import PipelineService

__all__ = ["PipelineService"]
