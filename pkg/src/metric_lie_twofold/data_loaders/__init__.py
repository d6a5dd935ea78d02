"""Data loaders subpackage initialization."""

from .json_loader import JsonLoader

__all__ = ["JsonLoader"]
