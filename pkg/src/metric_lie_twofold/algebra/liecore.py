"""
Metric Lie algebras given by structure constants.

A metric Lie algebra is stored as a structure tensor C with
[e_i, e_j] = sum_k C[i, j, k] e_k and a symmetric Gram matrix G. This module
verifies the axioms exactly and computes the subspaces used throughout the
package: centre, derived algebra, derived and lower central series,
orthogonal complements and ideals.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from ..errors import InputError
from .linalg import (
    Signature, as_exact, contains, equal, integral_form, is_symmetric, is_zero, nullspace,
    rank, row_basis, signature, stack, zeros,
)


logger = logging.getLogger(__name__)


class Subspace:
    """Subspace of Q^n stored by the canonical (rref) basis of its span."""

    def __init__(self, ambient: int, vectors: Iterable[np.ndarray] = ()):
        vectors = list(vectors)
        self.ambient = ambient
        self.basis = row_basis(stack(vectors, ambient)) if vectors else zeros((0, ambient))

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(ambient, list(np.eye(ambient, dtype=int).astype(object)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def vectors(self) -> List[np.ndarray]:
        return [row.copy() for row in self.basis]

    def contains(self, v: np.ndarray) -> bool:
        return contains(self.basis, v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def key(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return tuple(tuple(row) for row in self.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.ambient, self.key()))

    def __repr__(self) -> str:
        rows = [[str(x) for x in row] for row in self.basis]
        return f"Subspace(ambient={self.ambient}, basis={rows})"


class MetricLieAlgebra:
    """Structure constants plus a Gram matrix; nothing is verified on construction."""

    def __init__(self, structure: np.ndarray, gram: np.ndarray,
                 labels: Optional[List[str]] = None):
        self.gram = as_exact(gram)
        n = self.gram.shape[0] if self.gram.ndim == 2 else -1
        if n < 0 or self.gram.shape != (n, n):
            raise InputError(f"Gram matrix must be square, got shape {self.gram.shape}")
        self.structure = as_exact(structure) if n else zeros((0, 0, 0))
        if self.structure.shape != (n, n, n):
            raise InputError(f"structure tensor must have shape {(n, n, n)}, "
                             f"got {self.structure.shape}")
        self.labels = list(labels) if labels is not None else [f"e{i + 1}" for i in range(n)]
        if len(self.labels) != n:
            raise InputError(f"expected {n} basis labels, got {len(self.labels)}")

    @classmethod
    def from_brackets(cls, gram: np.ndarray, brackets: Mapping[Tuple[int, int], np.ndarray],
                      labels: Optional[List[str]] = None) -> "MetricLieAlgebra":
        """
        Build from listed brackets [e_i, e_j] = v.

        A pair listed in one order only is extended antisymmetrically; pairs
        listed in both orders are stored as given so ``verify`` can check them.
        """
        gram = as_exact(gram)
        n = gram.shape[0]
        structure = zeros((n, n, n))
        for (i, j), v in brackets.items():
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"bracket index ({i}, {j}) out of range for dimension {n}")
            v = as_exact(v).reshape(-1)
            if v.shape[0] != n:
                raise InputError(f"bracket ({i}, {j}) has {v.shape[0]} entries, expected {n}")
            structure[i, j] = v
            if (j, i) not in brackets:
                structure[j, i] = -v
        return cls(structure, gram, labels)

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def basis_vector(self, i: int) -> np.ndarray:
        e = zeros(self.dim)
        e[i] = Fraction(1)
        return e

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        partial = np.tensordot(np.asarray(x, dtype=object), self.structure, axes=([0], [0]))
        return np.tensordot(np.asarray(y, dtype=object), partial, axes=([0], [0]))

    def ad(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> [x, y]."""
        return np.tensordot(np.asarray(x, dtype=object), self.structure, axes=([0], [0])).T

    def inner(self, x: np.ndarray, y: np.ndarray) -> Fraction:
        return np.asarray(x, dtype=object) @ self.gram @ np.asarray(y, dtype=object)

    def brackets(self) -> Dict[Tuple[int, int], np.ndarray]:
        """Nonzero brackets [e_i, e_j] with i < j."""
        return {(i, j): self.structure[i, j].copy()
                for i in range(self.dim) for j in range(i + 1, self.dim)
                if not is_zero(self.structure[i, j])}


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of one axiom together with the first failing basis index tuple."""

    name: str
    passed: bool
    witness: Optional[Tuple[int, ...]] = None

    def to_dict(self) -> Dict[str, object]:
        result: Dict[str, object] = {"status": "pass" if self.passed else "fail"}
        if self.witness is not None:
            result["first_failure"] = list(self.witness)
        return result


@dataclass(frozen=True)
class AxiomReport:
    antisymmetry: AxiomCheck
    jacobi: AxiomCheck
    invariance: AxiomCheck
    nondegeneracy: AxiomCheck

    @property
    def checks(self) -> List[AxiomCheck]:
        return [self.antisymmetry, self.jacobi, self.invariance, self.nondegeneracy]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def to_dict(self) -> Dict[str, object]:
        report: Dict[str, object] = {check.name: "pass" if check.passed else "fail"
                                     for check in self.checks}
        report["details"] = {check.name: check.to_dict() for check in self.checks}
        report["passed"] = self.passed
        return report


def _first_nonzero(values: np.ndarray, depth: int) -> Optional[Tuple[int, ...]]:
    for index in np.ndindex(*values.shape[:depth]):
        if not is_zero(values[index]):
            return tuple(int(i) for i in index)
    return None


def verify(g: MetricLieAlgebra) -> AxiomReport:
    """
    Check antisymmetry, Jacobi, ad-invariance and nondegeneracy exactly.

    Failures are reported with the first failing basis index tuple in
    lexicographic order; nothing is raised.
    """
    n = g.dim
    C = g.structure
    swapped = C + C.transpose(1, 0, 2)
    antisymmetry = _first_nonzero(swapped, 2)

    ints, _ = integral_form(C) if n else (C, 1)
    nested = np.tensordot(ints, ints, axes=([2], [0])) if n else zeros((0, 0, 0, 0))
    cyclic = nested + nested.transpose(1, 2, 0, 3) + nested.transpose(2, 0, 1, 3)
    jacobi = _first_nonzero(cyclic, 3)

    gram_ints, _ = integral_form(g.gram) if n else (g.gram, 1)
    paired = np.tensordot(ints, gram_ints, axes=([2], [0])) if n else zeros((0, 0, 0))
    invariance_defect = paired + paired.transpose(0, 2, 1)
    invariance = _first_nonzero(invariance_defect, 3)

    nondegenerate = is_symmetric(g.gram) and signature(g.gram).r == 0

    report = AxiomReport(
        antisymmetry=AxiomCheck("antisymmetry", antisymmetry is None, antisymmetry),
        jacobi=AxiomCheck("jacobi", jacobi is None, jacobi),
        invariance=AxiomCheck("invariance", invariance is None, invariance),
        nondegeneracy=AxiomCheck("nondegeneracy", nondegenerate),
    )
    logger.debug(f"Verified {n}-dimensional algebra: failures={report.failures()}")
    return report


def signature_of(g: MetricLieAlgebra) -> Signature:
    return signature(g.gram)


def centre(g: MetricLieAlgebra) -> Subspace:
    """Joint kernel of all ad maps."""
    n = g.dim
    if n == 0:
        return Subspace(0)
    stacked = g.structure.transpose(1, 2, 0).reshape(n * n, n)
    return Subspace(n, nullspace(stacked))


def bracket_span(g: MetricLieAlgebra, first: Subspace, second: Subspace) -> Subspace:
    vectors = [g.bracket(x, y) for x in first.basis for y in second.basis]
    return Subspace(g.dim, vectors)


def derived(g: MetricLieAlgebra) -> Subspace:
    n = g.dim
    return Subspace(n, [g.structure[i, j] for i in range(n) for j in range(i + 1, n)])


def derived_series(g: MetricLieAlgebra) -> List[Subspace]:
    """g, [g,g], [[g,g],[g,g]], ... until the dimension stops dropping."""
    series = [Subspace.full(g.dim)]
    while series[-1].dim > 0:
        following = bracket_span(g, series[-1], series[-1])
        if following.dim == series[-1].dim:
            break
        series.append(following)
    return series


def lower_central(g: MetricLieAlgebra) -> List[Subspace]:
    """g, [g,g], [g,[g,g]], ... until the dimension stops dropping."""
    whole = Subspace.full(g.dim)
    series = [whole]
    while series[-1].dim > 0:
        following = bracket_span(g, whole, series[-1])
        if following.dim == series[-1].dim:
            break
        series.append(following)
    return series


def is_solvable(g: MetricLieAlgebra) -> bool:
    return derived_series(g)[-1].dim == 0


def is_nilpotent(g: MetricLieAlgebra) -> bool:
    return lower_central(g)[-1].dim == 0


def is_abelian(g: MetricLieAlgebra) -> bool:
    return is_zero(g.structure)


def orthogonal_complement(g: MetricLieAlgebra, S: Subspace) -> Subspace:
    if S.dim == 0:
        return Subspace.full(g.dim)
    return Subspace(g.dim, nullspace(S.basis @ g.gram))


def centre_law_holds(g: MetricLieAlgebra) -> bool:
    """Whether the centre equals the orthogonal complement of the derived algebra."""
    return centre(g) == orthogonal_complement(g, derived(g))


def is_ideal(g: MetricLieAlgebra, S: Subspace) -> bool:
    return all(S.contains(g.bracket(g.basis_vector(i), s))
               for i in range(g.dim) for s in S.basis)


def is_nondegenerate_ideal(g: MetricLieAlgebra, S: Subspace) -> bool:
    if not is_ideal(g, S):
        logger.debug(f"{S!r} is not an ideal")
        return False
    restricted = S.basis @ g.gram @ S.basis.T
    return rank(restricted) == S.dim


def direct_sum(first: MetricLieAlgebra, second: MetricLieAlgebra) -> MetricLieAlgebra:
    n1, n2 = first.dim, second.dim
    n = n1 + n2
    structure = zeros((n, n, n))
    structure[:n1, :n1, :n1] = first.structure
    structure[n1:, n1:, n1:] = second.structure
    gram = zeros((n, n))
    gram[:n1, :n1] = first.gram
    gram[n1:, n1:] = second.gram
    return MetricLieAlgebra(structure, gram, first.labels + second.labels)


def verify_isomorphism(source: MetricLieAlgebra, target: MetricLieAlgebra,
                       F: np.ndarray) -> List[str]:
    """
    Check that F (columns = images of the source basis) is an isometric Lie isomorphism.

    Returns:
        Names of the failed conditions; empty when F is an isomorphism
    """
    n = source.dim
    F = as_exact(F)
    if target.dim != n or F.shape != (n, n):
        return ["dimension"]
    failures = []
    if rank(F) != n:
        failures.append("invertibility")
    if not equal(F.T @ target.gram @ F, source.gram):
        failures.append("isometry")
    if n:
        c1, d1 = integral_form(source.structure)
        c2, d2 = integral_form(target.structure)
        f, df = integral_form(F)
        image_of_bracket = np.tensordot(c1, f.T, axes=([2], [0]))
        partial = np.tensordot(f, c2, axes=([0], [0]))
        bracket_of_images = np.tensordot(partial, f, axes=([1], [0])).transpose(0, 2, 1)
        if not is_zero(image_of_bracket * (df * d2) - bracket_of_images * d1):
            failures.append("bracket")
    return failures
