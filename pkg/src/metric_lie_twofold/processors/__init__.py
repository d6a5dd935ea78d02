"""Processors subpackage initialization."""

from .orbits import SignedPermutation, canonicalize
from .families import FamilySpec, WeightMatrix, build_family, lambda_admissible
from .classifier import FamilyClassifier

__all__ = [
    "SignedPermutation",
    "canonicalize",
    "FamilySpec",
    "WeightMatrix",
    "build_family",
    "lambda_admissible",
    "FamilyClassifier",
]
