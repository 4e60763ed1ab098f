"""scimap: science maps from bibliographic corpora."""

__version__ = "0.1.0"

__all__ = ["__version__"]
