"""Exact linear algebra, metric Lie algebras, cochains and twofold extensions."""

from .liecore import MetricLieAlgebra, Subspace, verify
from .cochain import Rep, Cochain, ScalarForm
from .twofold import TwofoldData, build, regularity, extension_equivalent, extract
from .decomp import DecompWitness, euclidean_decomposable

__all__ = [
    "MetricLieAlgebra",
    "Subspace",
    "verify",
    "Rep",
    "Cochain",
    "ScalarForm",
    "TwofoldData",
    "build",
    "regularity",
    "extension_equivalent",
    "extract",
    "DecompWitness",
    "euclidean_decomposable",
]
