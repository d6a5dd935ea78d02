"""
Isomorphism classification of the table families.

Two admissible family members are isomorphic iff they come from the same row
with the same (m, k, l) and their invariants agree modulo signed
permutations. For equal invariants an explicit isomorphism (S, U, tau) is
assembled from the canonicalization certificates and checked exactly.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

import numpy as np

from ..algebra.linalg import (
    as_exact, block_diagonal, complete_basis, determinant, equal, identity, inverse, is_zero,
    matrix, rank, solve, stack,
)
from ..algebra.cochain import Cochain
from ..algebra.twofold import extension_equivalent, pullback, witness_isomorphism
from ..config.settings import AnalysisConfig
from ..data_loaders.codec import cochain_to_dict, matrix_to_lists
from ..errors import InputError
from .families import (
    ROWS, BuiltFamily, FamilySpec, StabilizerDescription, admissibility_violations,
    build_family, stabilizer_description,
)
from .orbits import B_V_MOD_SCALE, GRAM, Canonical, SignedPermutation, canonicalize


logger = logging.getLogger(__name__)

UNDECIDED = "undecided"


def _serialize(value: Any) -> Any:
    # iterating an object array yields bare Fractions, not 0-d arrays
    if isinstance(value, np.ndarray):
        if value.ndim == 0:
            return str(value.item())
        return [_serialize(entry) for entry in value]
    return str(value)


# leading block of S whose determinant the row's alpha or gamma fixes to 1
_UNIT_BLOCK = {"l2-k1": 2, "l3-k0-volume": 3, "l3-k1": 2}


def _rational_sqrt(value: Fraction) -> Optional[Fraction]:
    if value <= 0:
        return None
    p, q = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if p * p != value.numerator or q * q != value.denominator:
        return None
    return Fraction(p, q)


def _reflect_onto(sources: np.ndarray, targets: np.ndarray) -> Optional[np.ndarray]:
    """
    Orthogonal R with R s_j = t_j for the rows s_j, t_j, as a product of reflections.

    Rows with equal Gram matrices are moved one at a time; each reflection
    fixes the targets already reached.
    """
    n = sources.shape[1]
    R = identity(n)
    for s, t in zip(sources, targets):
        diff = as_exact(R @ s) - t
        norm = sum((x * x for x in diff), Fraction(0))
        if norm != 0:
            R = (identity(n) - as_exact(np.outer(diff, diff)) * (2 / norm)) @ R
    return R if equal(R @ sources.T, targets.T) else None


def _conformal_completion(lam2: np.ndarray, target: np.ndarray) -> Optional[np.ndarray]:
    """
    S = [[s/c, 0, 0], [x, cQ], [y, cQ]] with Q in O(2) and lambda_2 S = target.

    c^2 is the ratio of the B forms of the two weight matrices and must be a
    rational square.
    """
    A2, TA = lam2[:, 1:3], target[:, 1:3]
    if is_zero(A2):
        if not is_zero(TA):
            return None
        j = next((j for j in range(lam2.shape[0]) if target[j, 0] != 0), None)
        if j is None or lam2[j, 0] == 0:
            return None
        c, Q = lam2[j, 0] / target[j, 0], identity(2)
    else:
        B2, BT = as_exact(A2 @ A2.T), as_exact(TA @ TA.T)
        i = next(i for i in range(B2.shape[0]) if B2[i, i] != 0)
        c = _rational_sqrt(BT[i, i] / B2[i, i])
        if c is None:
            return None
        R = _reflect_onto(c * A2, TA)
        if R is None:
            return None
        Q = R.T
    for s in (1, -1):
        solved = solve(A2, target[:, 0] - (s / c) * lam2[:, 0])
        if solved is None:
            continue
        x, y = solved[0]
        S = matrix([[s / c, 0, 0], [x, c * Q[0, 0], c * Q[0, 1]], [y, c * Q[1, 0], c * Q[1, 1]]])
        if equal(lam2 @ S, target):
            return S
    return None


def _basis_completion(lam2: np.ndarray, target: np.ndarray, l: int,
                      block: int) -> Optional[np.ndarray]:
    """
    S mapping independent weights of lambda_2 to their targets, completed by
    standard basis vectors; the last completing image is scaled so that the
    leading ``block`` x ``block`` minor of S is 1.
    """
    chosen: List[int] = []
    for j in range(lam2.shape[0]):
        if rank(lam2[chosen + [j]]) > len(chosen):
            chosen.append(j)
    sources, images = lam2[chosen], target[chosen]
    extra_sources, extra_images = complete_basis(sources, l), complete_basis(images, l)
    if not extra_sources or len(extra_sources) != len(extra_images):
        return None
    basis = inverse(stack(list(sources) + extra_sources, l))
    mapped = stack(list(images) + extra_images, l)
    S = basis @ mapped
    if block:
        scale = determinant(S[:block, :block])
        if scale == 0:
            return None
        mapped[-1] = mapped[-1] / scale
        S = basis @ mapped
    return S if equal(lam2 @ S, target) else None


@dataclass(frozen=True, eq=False)
class InvariantValue:
    """Canonical invariant of a family member, tagged by its row."""

    row: str
    canonical: Canonical

    @property
    def tag(self) -> str:
        return self.canonical.tag

    @property
    def certificate(self) -> SignedPermutation:
        return self.canonical.certificate

    @property
    def key(self) -> tuple:
        return (self.row,) + self.canonical.key

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {"tag": self.tag, "row": self.row}
        for name, value in self.canonical.parts:
            result[name] = _serialize(value)
        result["certificate"] = self.certificate.to_dict()
        if self.canonical.normalization is not None:
            result["normalization"] = str(self.canonical.normalization)
        return result


@dataclass(frozen=True, eq=False)
class IsoWitness:
    S: np.ndarray
    U: np.ndarray
    tau: Cochain
    matrix: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {"S": matrix_to_lists(self.S), "U": matrix_to_lists(self.U),
                "tau": cochain_to_dict(self.tau), "matrix": matrix_to_lists(self.matrix)}


@dataclass(frozen=True, eq=False)
class FamilyComparison:
    """Verdict of isomorphic_family; ``isomorphic`` is True, False or "undecided"."""

    isomorphic: Union[bool, str]
    reason: str
    witness: Optional[IsoWitness] = None

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {"isomorphic": self.isomorphic, "reason": self.reason}
        if self.witness is not None:
            result["witness"] = self.witness.to_dict()
        return result


class FamilyClassifier:
    """Computes and compares family invariants under the configured orbit bound."""

    def __init__(self, config: Optional[AnalysisConfig] = None):
        self.config = config or AnalysisConfig()

    def invariant(self, spec: FamilySpec) -> InvariantValue:
        """
        Canonical invariant of a family member.

        Raises:
            OrbitSearchExceeded: if m exceeds the configured orbit bound
        """
        row = spec.table_row
        violations = admissibility_violations(row.id, spec.weights)
        if violations:
            logger.warning(f"Invariant of inadmissible weights for {row.id}: {violations}")
        canonical = canonicalize(row.tag, spec.weights.entries, self.config.orbit_bound)
        return InvariantValue(row.id, canonical)

    def orbits_equal(self, first: InvariantValue, second: InvariantValue) -> bool:
        if first.row != second.row or first.tag != second.tag:
            logger.info(f"Invariants of different rows ({first.row}/{first.tag} vs "
                        f"{second.row}/{second.tag}) are never equal")
            return False
        return first.key == second.key

    def isomorphic_family(self, first: FamilySpec, second: FamilySpec) -> FamilyComparison:
        """Decide isomorphism of two family members and build a witness when they are."""
        if first.row != second.row:
            return FamilyComparison(False, f"different rows {first.row} and {second.row}")
        if (first.m, first.k, first.l) != (second.m, second.k, second.l):
            return FamilyComparison(False, f"different (m, k, l): {(first.m, first.k, first.l)} "
                                           f"and {(second.m, second.k, second.l)}")
        bad = [s for s in (first, second) if admissibility_violations(s.row, s.weights)]
        if bad:
            return FamilyComparison(UNDECIDED, "inadmissible weights; the classification "
                                               "covers admissible weights only")
        v1, v2 = self.invariant(first), self.invariant(second)
        if not self.orbits_equal(v1, v2):
            logger.info(f"Row {first.row}: invariants differ")
            return FamilyComparison(False, "canonical invariants differ")
        witness = self.build_witness(first, second, v1, v2) if self.config.emit_witnesses else None
        logger.info(f"Row {first.row}: invariants agree, witness "
                    f"{'verified' if witness else 'not emitted'}")
        return FamilyComparison(True, "canonical invariants agree", witness)

    def build_witness(self, first: FamilySpec, second: FamilySpec, v1: InvariantValue,
                      v2: InvariantValue) -> Optional[IsoWitness]:
        """
        Explicit isomorphism build_family(first) -> build_family(second).

        With h = g_2^-1 g_1 for the certificates g_i, S solves lambda_2 S =
        h lambda_1, U acts on the planes by h and on the extra coordinates by
        the unique map carrying alpha_1 to alpha_2(S., S.); tau comes from
        extension equivalence of the pulled back data. Returns None if any step
        has no solution or the result fails witness_isomorphism.
        """
        h = v2.certificate.inverse().compose(v1.certificate)
        lam1, lam2 = first.weights.entries, second.weights.entries
        S = self._solve_linear_part(first.row, lam2, h.apply(lam1), first.l)
        if S is None:
            logger.warning("No invertible S relates the weights; witness not emitted")
            return None
        built1, built2 = build_family(first), build_family(second)
        U_extra = self._extra_isometry(built1, built2, S)
        if U_extra is None:
            logger.warning("No isometry of the extra coordinates matches alpha; "
                           "witness not emitted")
            return None
        U = block_diagonal(h.plane_matrix(), U_extra)
        d1, d2 = built1.data, built2.data
        try:
            pulled = pullback(d2, S, U, d1.rep)
        except InputError:
            return None
        equivalence = extension_equivalent(d1, pulled)
        if equivalence is None:
            logger.warning("Pulled back data is not extension equivalent; witness not emitted")
            return None
        check = witness_isomorphism(d1, d2, S, U, equivalence.tau)
        if not check.ok:
            logger.warning(f"Witness rejected: {check.failures}")
            return None
        return IsoWitness(as_exact(S), U, equivalence.tau, check.matrix)

    @staticmethod
    def _solve_linear_part(row: str, lam2: np.ndarray, target: np.ndarray,
                           l: int) -> Optional[np.ndarray]:
        """
        Invertible S with lambda_2 S = target in the stabilizer shape of ``row``.

        Injective weights fix S; otherwise S is completed on the kernel of
        lambda_2: orthogonally for l3-k3, conformally for l3-k2 and by basis
        completion with a unit determinant for the remaining rows.
        """
        if equal(lam2, target):
            return identity(l)
        columns = []
        for i in range(l):
            solved = solve(lam2, target[:, i])
            if solved is None:
                return None
            particular, kernel = solved
            if kernel:
                break
            columns.append(particular)
        else:
            S = stack(columns, l).T
            return S if rank(S) == l else None
        tag = ROWS[row].tag
        if tag == GRAM:
            R = _reflect_onto(lam2, target)
            S = R.T if R is not None else None
        elif tag == B_V_MOD_SCALE:
            S = _conformal_completion(lam2, target)
        else:
            S = _basis_completion(lam2, target, l, _UNIT_BLOCK.get(row, 0))
        if S is None or rank(S) < l:
            return None
        logger.debug(f"Completed S on the kernel of the weights of {row}")
        return S

    @staticmethod
    def _extra_isometry(built1: BuiltFamily, built2: BuiltFamily,
                        S: np.ndarray) -> Optional[np.ndarray]:
        k = built1.spec.k
        offset = built1.extra_offset
        d1, d2 = built1.data, built2.data
        if built1.spec.row == "dA":
            # L acts on the boost pair, so S = -1 flips B_1
            s = S[0, 0]
            return matrix([[1, 0], [0, s]]) if s in (1, -1) else None
        if d1.alpha.is_zero():
            return identity(k)
        pairs = [index for index, _ in d1.alpha.items()]
        M1 = stack([d1.alpha.value(p)[offset:] for p in pairs], k).T
        M2 = stack([d2.alpha.evaluate(S[:, i], S[:, j])[offset:] for i, j in pairs], k).T
        rows = []
        for r in range(k):
            solved = solve(M1.T, M2[r])
            if solved is None or solved[1]:
                return None
            rows.append(solved[0])
        U_extra = stack(rows, k)
        gram = d1.rep.gram[offset:, offset:]
        if not equal(U_extra.T @ gram @ U_extra, gram):
            return None
        return U_extra

    def classify_index2(self, spec: FamilySpec) -> Dict[str, Any]:
        """
        Normal form of an indecomposable metric Lie algebra of index 2.

        Case 1 is the boost family (sorted weights), case 2 the oscillator
        family with two weight columns (span of the weights), case 3 the
        family d with alpha = Z_1 ^ Z_2 (span and 2-form up to sign); sl(2, R)
        with the negative Killing form is reported as the simple case.
        Violated conditions are reported instead of an invariant.
        """
        if spec.family == "sl2":
            return {"case": "simple", "algebra": "sl(2,R)", "signature": [2, 1]}
        cases = {"dA": 1, "l2-k0": 2, "l2-k1": 3}
        if spec.row not in cases:
            raise InputError(f"row {spec.row} is not an index-2 family; expected dA, "
                             f"osc with two weight columns or d")
        case = cases[spec.row]
        violations = admissibility_violations(spec.row, spec.weights)
        if violations:
            logger.info(f"Index-2 input of case {case} is decomposable: {violations}")
            return {"case": case, "decomposable": True, "violations": violations}
        value = self.invariant(spec)
        if case == 1:
            return {"case": 1, "lambda": _serialize(value.canonical.parts[0][1])}
        return {"case": case, "invariant": value.to_dict()}

    def stabilizer_projection(self, row: str) -> StabilizerDescription:
        return stabilizer_description(row)

