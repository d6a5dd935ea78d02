"""Workflows subpackage initialization."""

from .command_workflow import CommandWorkflow

__all__ = ["CommandWorkflow"]
