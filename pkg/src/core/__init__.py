# Core module
# Import what you need directly, e.g.:
# from src.core.config import PipelineConfig, load_config
