"""
Decomposability of twofold extensions.

A decomposition witness consists of splittings a = a1 + a2 (orthogonal) and
l = l1 + l2 together with maps T1: l1 -> a2 and T2: l2 -> a1. When the witness
conditions hold, build(data) is the orthogonal sum of two nondegenerate ideals.

For Euclidean a the module also decides decomposability:

- non-regular data of dimension > 2 decomposes with an explicit witness,
- regular data in the standard rotation-block layout is searched exhaustively
  for l <= 3 over splittings l = ker(phi) + R v forced by the weights.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import InputError, UnsupportedCaseError
from .cochain import Cochain, Rep, act, coboundary, nil_split
from .linalg import (
    as_exact, complete_basis, contains, equal, identity, inverse, is_zero, nullspace, rank,
    signature, solve, stack, zeros,
)
from .liecore import Subspace
from .twofold import TwofoldData, psi_matrix, regularity


logger = logging.getLogger(__name__)

Decision = Union[bool, str]
UNDECIDED = "undecided"


@dataclass(frozen=True, eq=False)
class DecompWitness:
    """
    Splittings of a and l with the maps T1, T2.

    Attributes:
        a1, a2: Rows are basis vectors of the two sides of a
        l1, l2: Rows are basis vectors of the two sides of l
        t1: Row i is T1 applied to row i of l1 (a vector of a)
        t2: Row i is T2 applied to row i of l2
    """

    a1: np.ndarray
    a2: np.ndarray
    l1: np.ndarray
    l2: np.ndarray
    t1: np.ndarray
    t2: np.ndarray

    def validate(self, rep: Rep) -> None:
        """
        Raises:
            InputError: if the splittings are malformed
        """
        l, a = rep.l, rep.a
        for name, block, width in (("a1", self.a1, a), ("a2", self.a2, a), ("l1", self.l1, l),
                                   ("l2", self.l2, l), ("T1", self.t1, a), ("T2", self.t2, a)):
            if block.ndim != 2 or block.shape[1] != width:
                raise InputError(f"{name} must have rows of length {width}", field=name)
        if self.t1.shape[0] != self.l1.shape[0] or self.t2.shape[0] != self.l2.shape[0]:
            raise InputError("T1 and T2 need one image per basis vector of l1 and l2")
        if rank(np.vstack([self.a1, self.a2])) != a or self.a1.shape[0] + self.a2.shape[0] != a:
            raise InputError("a1 and a2 are not complementary")
        if rank(np.vstack([self.l1, self.l2])) != l or self.l1.shape[0] + self.l2.shape[0] != l:
            raise InputError("l1 and l2 are not complementary")
        if not is_zero(self.a1 @ rep.gram @ self.a2.T):
            raise InputError("a1 and a2 are not orthogonal")
        if self.a1.shape[0] + self.l1.shape[0] == 0 or self.a2.shape[0] + self.l2.shape[0] == 0:
            raise InputError("both sides of the splitting must be nonzero")
        if any(not contains(self.a2, v) for v in self.t1):
            raise InputError("T1 must take values in a2", field="T1")
        if any(not contains(self.a1, v) for v in self.t2):
            raise InputError("T2 must take values in a1", field="T2")

    def to_dict(self) -> Dict[str, Any]:
        def rows(M: np.ndarray) -> List[List[str]]:
            return [[str(x) for x in row] for row in M]

        return {"a1": rows(self.a1), "a2": rows(self.a2), "l1": rows(self.l1),
                "l2": rows(self.l2), "T1": rows(self.t1), "T2": rows(self.t2)}


def _spans_into(rep: Rep, vectors: np.ndarray, target: np.ndarray) -> bool:
    return all(contains(target, rep.action(L) @ v)
               for L in np.eye(rep.l, dtype=int).astype(object) for v in vectors)


def witness_failures(data: TwofoldData, w: DecompWitness) -> List[str]:
    """Names of the violated witness conditions; empty when the witness is valid."""
    w.validate(data.rep)
    rep = data.rep
    alpha, gamma = data.alpha, data.gamma
    failed = []

    if not (_spans_into(rep, w.a1, w.a1) and _spans_into(rep, w.a2, w.a2)):
        failed.append("invariant_splitting")
    if any(not is_zero(rep.action(L) @ v) for L in w.l1 for v in w.a2) or \
            any(not is_zero(rep.action(L) @ v) for L in w.l2 for v in w.a1):
        failed.append("representation_split")

    if any(not contains(w.a1, alpha.evaluate(u, v)) for u in w.l1 for v in w.l1) or \
            any(not contains(w.a2, alpha.evaluate(u, v)) for u in w.l2 for v in w.l2):
        failed.append("alpha_blocks")

    mixed = True
    for u, t1u in zip(w.l1, w.t1):
        for v, t2v in zip(w.l2, w.t2):
            expected = rep.action(u) @ t2v - rep.action(v) @ t1u
            if not equal(alpha.evaluate(u, v), expected):
                mixed = False
    if not mixed:
        failed.append("alpha_mixed")

    first = all(
        gamma.evaluate(u, u2, v) == rep.inner(alpha.evaluate(u, u2), t2v)
        + rep.inner(alpha.evaluate(u2, v), t1u)
        for u, t1u in zip(w.l1, w.t1) for u2 in w.l1 for v, t2v in zip(w.l2, w.t2))
    second = all(
        gamma.evaluate(v, v2, u) == rep.inner(alpha.evaluate(v, v2), t1u)
        + rep.inner(alpha.evaluate(v2, u), t2v)
        for v, t2v in zip(w.l2, w.t2) for v2 in w.l2 for u, t1u in zip(w.l1, w.t1))
    if not (first and second):
        failed.append("gamma_identities")
    return failed


def verify_witness(data: TwofoldData, w: DecompWitness) -> bool:
    """
    Check a decomposition witness exactly.

    Raises:
        InputError: if the witness is malformed
    """
    failed = witness_failures(data, w)
    if failed:
        logger.debug(f"Decomposition witness rejected: {failed}")
    return not failed


def witness_tau(data: TwofoldData, w: DecompWitness) -> Cochain:
    """The 1-cochain tau = T1 + T2 on l = l1 + l2."""
    rep = data.rep
    basis = np.vstack([w.l1, w.l2]) if rep.l else zeros((0, 0))
    images = np.vstack([w.t1, w.t2]) if rep.l else zeros((0, rep.a))
    coefficients = inverse(basis) if rep.l else zeros((0, 0))
    columns = (coefficients @ images).T if rep.l else zeros((rep.a, 0))
    return Cochain.from_matrix(rep, columns)


def induced_ideal(data: TwofoldData, w: DecompWitness) -> Subspace:
    """
    The nondegenerate ideal of build(data) determined by a valid witness.

    Acting with -(T1 + T2) makes alpha and gamma block diagonal; there the
    ideal is Ann(l2) + a1 + l1, transported back along the psi isometry.
    """
    rep = data.rep
    l, a = rep.l, rep.a
    n = 2 * l + a
    tau = witness_tau(data, w).scale(-1)
    vectors = []
    annihilator = nullspace(w.l2) if w.l2.shape[0] else list(identity(l))
    for phi in annihilator:
        v = zeros(n)
        v[:l] = phi
        vectors.append(v)
    for x in w.a1:
        v = zeros(n)
        v[l:l + a] = x
        vectors.append(v)
    for L in w.l1:
        v = zeros(n)
        v[l + a:] = L
        vectors.append(v)
    back = inverse(psi_matrix(rep, tau))
    return Subspace(n, [back @ v for v in vectors])


def detect_weights(data: TwofoldData) -> Optional[Tuple[np.ndarray, int]]:
    """
    Read weights off the standard rotation-block layout.

    The layout is a = (X_1..X_m, Y_1..Y_m, A_1..A_k) with identity inner
    product and rho(L_i) X_j = w[j, i] Y_j, rho(L_i) Y_j = -w[j, i] X_j.

    Returns:
        (m x l weight matrix, k) for the largest m fitting the layout, or None
    """
    rep = data.rep
    l, a = rep.l, rep.a
    if not equal(rep.gram, identity(a)):
        return None
    for m in range(a // 2, -1, -1):
        weights = zeros((m, l))
        fits = True
        for i, r in enumerate(rep.rho):
            expected = zeros((a, a))
            for j in range(m):
                weights[j, i] = r[m + j, j]
                expected[m + j, j] = r[m + j, j]
                expected[j, m + j] = -r[m + j, j]
            if not equal(r, expected):
                fits = False
                break
        if fits:
            return weights, a - 2 * m
    return None


def reduce_to_invariants(data: TwofoldData) -> Tuple[TwofoldData, Cochain]:
    """
    Move alpha into the invariants by the C^1-action.

    Splits alpha = alpha_inv + alpha_R along a = a^l + a^R, solves
    d tau = alpha_R inside C^1(l, a^R) and returns (act(data, -tau), tau).

    Raises:
        UnsupportedCaseError: if a is not Euclidean
        InputError: if alpha_R is not a coboundary
    """
    rep = data.rep
    fixed, moving = nil_split(rep)
    inv_basis = stack(fixed, rep.a)
    if all(contains(inv_basis, v) for _, v in data.alpha.items()):
        return data, Cochain.zero(rep, 1)
    M = stack(moving, rep.a)
    projection = M.T @ inverse(M @ rep.gram @ M.T) @ M @ rep.gram
    target = Cochain(rep, 2, {key: projection @ v for key, v in data.alpha.items()})
    candidates = [Cochain(rep, 1, {(j,): c}) for j in range(rep.l) for c in moving]
    columns = [coboundary(c).flatten() for c in candidates]
    flat = target.flatten()
    D = as_exact(np.column_stack(columns)) if columns else zeros((flat.shape[0], 0))
    solved = solve(D, flat)
    if solved is None:
        raise InputError("alpha cannot be moved into the invariants")
    tau = Cochain.zero(rep, 1)
    for coefficient, c in zip(solved[0], candidates):
        if coefficient != 0:
            tau = tau + c.scale(coefficient)
    alpha, gamma = act(data.alpha, data.gamma, tau.scale(-1))
    logger.debug("Reduced alpha to invariant values")
    return data.with_forms(alpha, gamma), tau


@dataclass(frozen=True, eq=False)
class DecompositionResult:
    """
    Outcome of the Euclidean decomposability decision.

    ``data`` is the (possibly reduced) data the witness refers to.
    """

    decision: Decision
    data: TwofoldData
    witness: Optional[DecompWitness] = None
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {"decomposable": self.decision, "reason": self.reason}
        if self.witness is not None:
            result["witness"] = self.witness.to_dict()
        return result


def _unit_rows(indices: Sequence[int], dim: int) -> np.ndarray:
    rows = []
    for i in indices:
        e = zeros(dim)
        e[i] = Fraction(1)
        rows.append(e)
    return stack(rows, dim)


def _nonregular_witness(data: TwofoldData, L0: np.ndarray, A0: np.ndarray) -> DecompWitness:
    rep = data.rep
    l, a = rep.l, rep.a
    if is_zero(L0):
        a1 = stack([A0], a)
        a2 = stack(nullspace(a1 @ rep.gram), a)
        return DecompWitness(a1=a1, a2=a2, l1=zeros((0, l)), l2=identity(l),
                             t1=zeros((0, a)), t2=zeros((l, a)))
    l1 = stack([L0], l)
    l2 = stack(complete_basis(l1, l), l)
    return DecompWitness(a1=zeros((0, a)), a2=identity(a), l1=l1, l2=l2,
                         t1=stack([-A0], a), t2=zeros((l - 1, a)))


def _direction_key(v: np.ndarray) -> Tuple[Fraction, ...]:
    pivot = next(x for x in v if x != 0)
    return tuple(x / pivot for x in v)


def _distinct_directions(rows: Sequence[np.ndarray]) -> List[np.ndarray]:
    seen: Dict[Tuple[Fraction, ...], np.ndarray] = {}
    for row in rows:
        if not is_zero(row):
            seen.setdefault(_direction_key(row), as_exact(row))
    return list(seen.values())


def _radical(data: TwofoldData) -> List[np.ndarray]:
    """Vectors v with alpha(L, v) = 0 for all L."""
    rep = data.rep
    l, a = rep.l, rep.a
    rows = []
    for i in range(l):
        for r in range(a):
            rows.append([data.alpha.value((i, j))[r] for j in range(l)])
    if not rows:
        return list(identity(l))
    return nullspace(as_exact(rows))


def _small_side_candidates(data: TwofoldData, directions: List[np.ndarray]) -> List[np.ndarray]:
    l = data.l
    if not data.alpha.is_zero():
        radical = _radical(data)
        return _distinct_directions(radical)
    found: List[np.ndarray] = []
    for size in range(len(directions) + 1):
        for subset in itertools.combinations(directions, size):
            kernel = nullspace(stack(list(subset), l)) if subset else list(identity(l))
            found.extend(kernel)
    return _distinct_directions(found)


def _try_splitting(data: TwofoldData, weights: np.ndarray, k: int, v: np.ndarray,
                   phi: np.ndarray) -> Optional[DecompWitness]:
    rep = data.rep
    l, a = rep.l, rep.a
    m = weights.shape[0]
    big = stack(nullspace(stack([phi], l)), l)
    small = stack([v], l)
    side1, side2 = [], []
    for j in range(m):
        w = weights[j]
        if w @ v == 0:
            side1.append(j)
        elif rank(stack([w, phi], l)) == 1:
            side2.append(j)
        else:
            return None
    if any(not is_zero(data.alpha.evaluate(u, v)) for u in big):
        return None

    fixed = list(range(2 * m, a))
    fixed_rows = _unit_rows(fixed, a)
    pairs = list(itertools.combinations(range(big.shape[0]), 2))
    t2 = zeros(a)
    if pairs and k:
        coefficients = as_exact([[rep.inner(data.alpha.evaluate(big[i], big[j]), e)
                                  for e in fixed_rows] for i, j in pairs])
        rhs = [data.gamma.evaluate(big[i], big[j], v) for i, j in pairs]
        solved = solve(coefficients, rhs)
        if solved is None:
            return None
        t2 = solved[0] @ fixed_rows
    elif pairs and any(data.gamma.evaluate(big[i], big[j], v) != 0 for i, j in pairs):
        return None

    a1_indices = sorted([j for j in side1] + [m + j for j in side1] + fixed)
    a2_indices = sorted([j for j in side2] + [m + j for j in side2])
    witness = DecompWitness(
        a1=_unit_rows(a1_indices, a), a2=_unit_rows(a2_indices, a),
        l1=big, l2=small, t1=zeros((big.shape[0], a)), t2=stack([t2], a),
    )
    return witness if verify_witness(data, witness) else None


def euclidean_decomposable(data: TwofoldData,
                           weights: Optional[np.ndarray] = None) -> DecompositionResult:
    """
    Decide decomposability of twofold data with Euclidean a.

    Args:
        data: Valid twofold data; alpha is first moved into the invariants
        weights: Optional m x l weight matrix of the rotation-block layout;
            read from the data when omitted

    Returns:
        DecompositionResult with decision True, False or "undecided"

    Raises:
        UnsupportedCaseError: if the inner product of a is not positive definite
    """
    rep = data.rep
    sig = signature(rep.gram)
    if sig.p or sig.r:
        raise UnsupportedCaseError(f"decomposability is decided for Euclidean a only, "
                                   f"got signature {tuple(sig)}")
    data.validate()
    data, _ = reduce_to_invariants(data)
    l, a = data.l, data.a

    if l == 0:
        if a >= 2:
            a1 = _unit_rows([0], a)
            witness = DecompWitness(a1=a1, a2=_unit_rows(range(1, a), a), l1=zeros((0, 0)),
                                    l2=zeros((0, 0)), t1=zeros((0, a)), t2=zeros((0, a)))
            return DecompositionResult(True, data, witness, "abelian of dimension >= 2")
        return DecompositionResult(False, data, reason="abelian of dimension <= 1")

    report = regularity(data)
    if not report.regular:
        if 2 * l + a <= 2:
            return DecompositionResult(True, data, reason="two-dimensional abelian algebra")
        L0, A0 = report.witnesses[0]
        witness = _nonregular_witness(data, L0, A0)
        if not verify_witness(data, witness):
            logger.error("Non-regular witness failed verification")
            return DecompositionResult(UNDECIDED, data, reason="non-regular witness rejected")
        return DecompositionResult(True, data, witness, "not regular")

    if l == 1:
        return DecompositionResult(False, data, reason="regular with l = 1")

    if weights is None:
        detected = detect_weights(data)
        if detected is None:
            return DecompositionResult(UNDECIDED, data,
                                       reason="a is not in rotation-block layout")
        weights, k = detected
    else:
        weights = as_exact(weights)
        k = a - 2 * weights.shape[0]

    directions = _distinct_directions(list(weights))
    functionals = directions + list(identity(l))
    for v in _small_side_candidates(data, directions):
        for phi in functionals:
            if phi @ v == 0:
                continue
            logger.debug(f"Trying splitting v={[str(x) for x in v]}, phi={[str(x) for x in phi]}")
            witness = _try_splitting(data, weights, k, v, phi)
            if witness is not None:
                return DecompositionResult(True, data, witness, "splitting found")
    if l <= 3:
        return DecompositionResult(False, data, reason="no splitting exists")
    return DecompositionResult(UNDECIDED, data, reason="search is exhaustive only for l <= 3")
