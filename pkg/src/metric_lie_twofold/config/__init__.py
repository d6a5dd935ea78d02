"""Configuration subpackage initialization."""

from .settings import AnalysisConfig, OUTPUT_FORMATS, LOG_LEVELS

__all__ = ["AnalysisConfig", "OUTPUT_FORMATS", "LOG_LEVELS"]
