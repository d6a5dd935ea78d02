"""
Metric Lie algebra twofold extensions

Exact computations with metric Lie algebras built as twofold extensions of
abelian Lie algebras by an orthogonal module.

This package provides functionality for:
- Verifying metric Lie algebras given by structure constants
- Building twofold extensions and deciding regularity and decomposability
- Deciding extension equivalence under the action of 1-cochains
- Canonical invariants and isomorphism witnesses for the classification families
"""

__version__ = "0.1.0"

from .errors import InputError, UnsupportedCaseError, OrbitSearchExceeded
from .config.settings import AnalysisConfig
from .algebra.liecore import MetricLieAlgebra
from .algebra.twofold import TwofoldData, build
from .processors.classifier import FamilyClassifier
from .processors.families import FamilySpec, build_family
from .data_loaders.json_loader import JsonLoader
from .workflows.command_workflow import CommandWorkflow

__all__ = [
    "InputError",
    "UnsupportedCaseError",
    "OrbitSearchExceeded",
    "AnalysisConfig",
    "MetricLieAlgebra",
    "TwofoldData",
    "build",
    "FamilyClassifier",
    "FamilySpec",
    "build_family",
    "JsonLoader",
    "CommandWorkflow",
]
