"""Utility functions and helpers."""

from .cache_manager import SeriesCache
from .config_loader import ConfigLoader
from .logger import setup_logger, get_logger

__all__ = [
    "SeriesCache",
    "ConfigLoader",
    "setup_logger",
    "get_logger"
]
