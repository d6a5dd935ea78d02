"""
Cochains of an abelian Lie algebra with values in an orthogonal representation.

For an abelian Lie algebra l acting on an inner product space a by a commuting
family of skew maps rho(L_j), this module implements

- the cochain spaces C^p(l, a) and the scalar forms in the exterior algebra of l*,
- the differential  d tau(L_1..L_{p+1}) = sum_i (-1)^(i-1) rho(L_i) tau(..L_i omitted..),
- the product  <x ^ y>  (exterior product followed by the inner product of a),
- the quadratic condition on 2-cochains ("cup square vanishes"),
- the right action  (alpha, gamma) tau = (alpha + d tau, gamma + <(alpha + 1/2 d tau) ^ tau>),
- the invariant/complement split of a and the canonical representative of a
  3-form modulo <alpha ^ C^1(l, a^l)>.

Cochains are stored by their values on strictly increasing index tuples.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, TypeVar

import numpy as np

from ..errors import InputError, UnsupportedCaseError
from .linalg import (
    as_exact, equal, identity, is_symmetric, is_zero, nullspace, rref_with_pivots, signature,
    stack, to_scalar, vector, zeros,
)


logger = logging.getLogger(__name__)

Index = Tuple[int, ...]


def increasing_tuples(l: int, p: int) -> List[Index]:
    return list(itertools.combinations(range(l), p))


def permutation_sign(order: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(order)) for j in range(i + 1, len(order))
                     if order[i] > order[j])
    return -1 if inversions % 2 else 1


def normalize_index(index: Sequence[int]) -> Tuple[int, Index]:
    """Sort an index tuple; returns (sign, sorted tuple) with sign 0 on repeats."""
    index = tuple(int(i) for i in index)
    if len(set(index)) < len(index):
        return 0, ()
    return permutation_sign(index), tuple(sorted(index))


def _minor_determinant(vectors: Sequence[np.ndarray], columns: Index) -> Fraction:
    total = Fraction(0)
    p = len(columns)
    for order in itertools.permutations(range(p)):
        term = Fraction(permutation_sign(order))
        for row, col in enumerate(order):
            term *= vectors[row][columns[col]]
            if term == 0:
                break
        total += term
    return total


@dataclass(frozen=True, eq=False)
class Rep:
    """
    Orthogonal representation of an abelian Lie algebra.

    Attributes:
        l: Dimension of the acting abelian Lie algebra
        a: Dimension of the represented space
        gram: Inner product of the represented space (a x a, nondegenerate)
        rho: One skew, pairwise commuting a x a matrix per basis vector of l
    """

    l: int
    a: int
    gram: np.ndarray
    rho: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        gram = as_exact(self.gram).reshape(self.a, self.a) if self.a else zeros((0, 0))
        rho = tuple(as_exact(r).reshape(self.a, self.a) if self.a else zeros((0, 0))
                    for r in self.rho)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "rho", rho)
        if self.l < 0 or self.a < 0:
            raise InputError("dimensions must be non-negative")
        if len(rho) != self.l:
            raise InputError(f"expected {self.l} representation matrices, got {len(rho)}")
        if not is_symmetric(gram) or signature(gram).r:
            raise InputError("the inner product on a must be symmetric and nondegenerate")
        for j, r in enumerate(rho):
            if not is_zero(r.T @ gram + gram @ r):
                raise InputError(f"rho[{j}] is not skew with respect to the inner product",
                                 field=f"rho[{j}]")
        for i, j in itertools.combinations(range(self.l), 2):
            if not equal(rho[i] @ rho[j], rho[j] @ rho[i]):
                raise InputError(f"rho[{i}] and rho[{j}] do not commute", field="rho")

    @classmethod
    def trivial(cls, l: int, gram: np.ndarray) -> "Rep":
        a = as_exact(gram).shape[0] if np.asarray(gram).size else 0
        return cls(l, a, gram, tuple(zeros((a, a)) for _ in range(l)))

    @classmethod
    def from_weights(cls, weights: Any, fixed: int = 0, boost: Optional[Sequence[Any]] = None,
                     l: Optional[int] = None) -> "Rep":
        """
        Rotation representation on planes span{X_j, Y_j} with weights lambda^j.

        Coordinates are ordered X_1..X_m, Y_1..Y_m, then ``fixed`` invariant
        coordinates, then an optional boost pair (B_0, B_1) with inner product
        diag(-1, 1) on which L_i acts by boost[i] [[0, 1], [1, 0]].

        Args:
            weights: m x l matrix, weights[j, i] = lambda^j(L_i)
            fixed: Number of trivially acted coordinates
            boost: Boost parameters, one per basis vector of l
            l: Dimension of l, required when there are no weights
        """
        W = as_exact(weights)
        if W.ndim == 2:
            m = W.shape[0]
            l = W.shape[1] if l is None else l
        elif W.size == 0 and l is not None:
            m = 0
        else:
            raise InputError("weights must be an m x l matrix")
        W = W.reshape(m, l)
        a = 2 * m + fixed + (2 if boost is not None else 0)
        gram = identity(a)
        rho = [zeros((a, a)) for _ in range(l)]
        for i in range(l):
            for j in range(m):
                rho[i][m + j, j] = W[j, i]
                rho[i][j, m + j] = -W[j, i]
        if boost is not None:
            mu = [to_scalar(x) for x in boost]
            if len(mu) != l:
                raise InputError(f"expected {l} boost parameters, got {len(mu)}")
            b0 = 2 * m + fixed
            gram[b0, b0] = Fraction(-1)
            for i in range(l):
                rho[i][b0, b0 + 1] = mu[i]
                rho[i][b0 + 1, b0] = mu[i]
        return cls(l, a, gram, tuple(rho))

    def action(self, L: Sequence[Any]) -> np.ndarray:
        """rho(L) for L given in the basis of l."""
        result = zeros((self.a, self.a))
        for coefficient, r in zip(L, self.rho):
            if coefficient != 0:
                result = result + to_scalar(coefficient) * r
        return result

    def inner(self, x: np.ndarray, y: np.ndarray) -> Fraction:
        return x @ self.gram @ y

    def same_as(self, other: "Rep") -> bool:
        return (self.l == other.l and self.a == other.a and equal(self.gram, other.gram)
                and all(equal(r, s) for r, s in zip(self.rho, other.rho)))


F = TypeVar("F", bound="_AlternatingMap")


class _AlternatingMap:
    """Alternating multilinear map on l, stored on increasing index tuples."""

    def __init__(self, l: int, degree: int, values: Optional[Mapping[Index, Any]] = None):
        if degree < 0:
            raise InputError(f"degree must be non-negative, got {degree}")
        self.l = l
        self.degree = degree
        self._values: Dict[Index, Any] = {}
        for index, value in (values or {}).items():
            if len(index) != degree:
                raise InputError(f"index {list(index)} does not have length {degree}")
            if any(not 0 <= i < l for i in index):
                raise InputError(f"index {list(index)} out of range for dimension {l}")
            value = self._coerce(value)
            sign, key = normalize_index(index)
            if sign == 0:
                if not self._vanishes(value):
                    raise InputError(f"repeated index {list(index)} with nonzero value")
                continue
            if key in self._values:
                raise InputError(f"index {list(key)} listed twice")
            if not self._vanishes(value):
                self._values[key] = value if sign > 0 else -value

    def _coerce(self, value: Any) -> Any:
        raise NotImplementedError

    def _vanishes(self, value: Any) -> bool:
        raise NotImplementedError

    def _zero_value(self) -> Any:
        raise NotImplementedError

    def _like(self: F, values: Mapping[Index, Any]) -> F:
        raise NotImplementedError

    def value(self, index: Sequence[int]) -> Any:
        sign, key = normalize_index(index)
        if sign == 0 or key not in self._values:
            return self._zero_value()
        stored = self._values[key]
        return stored if sign > 0 else -stored

    def items(self) -> Iterator[Tuple[Index, Any]]:
        return iter(sorted(self._values.items()))

    def evaluate(self, *vectors: Sequence[Any]) -> Any:
        """Value on arbitrary vectors of l, by multilinear expansion."""
        if len(vectors) != self.degree:
            raise InputError(f"expected {self.degree} arguments, got {len(vectors)}")
        exact = [vector(v) for v in vectors]
        total = self._zero_value()
        for key, stored in self._values.items():
            weight = _minor_determinant(exact, key)
            if weight != 0:
                total = total + weight * stored
        return total

    def is_zero(self) -> bool:
        return not self._values

    def __add__(self: F, other: F) -> F:
        values = dict(self._values)
        for key, v in other._values.items():
            values[key] = values[key] + v if key in values else v
        return self._like(values)

    def __neg__(self: F) -> F:
        return self._like({key: -v for key, v in self._values.items()})

    def __sub__(self: F, other: F) -> F:
        return self + (-other)

    def scale(self: F, factor: Any) -> F:
        factor = to_scalar(factor)
        return self._like({key: factor * v for key, v in self._values.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.degree == other.degree and self.l == other.l and (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]


class Cochain(_AlternatingMap):
    """Element of C^p(l, a): alternating p-linear map from l to a."""

    def __init__(self, rep: Rep, degree: int, values: Optional[Mapping[Index, Any]] = None):
        self.rep = rep
        super().__init__(rep.l, degree, values)

    def _coerce(self, value: Any) -> np.ndarray:
        v = as_exact(value).reshape(-1)
        if v.shape[0] != self.rep.a:
            raise InputError(f"cochain value has {v.shape[0]} entries, expected {self.rep.a}")
        return v

    def _vanishes(self, value: np.ndarray) -> bool:
        return is_zero(value)

    def _zero_value(self) -> np.ndarray:
        return zeros(self.rep.a)

    def _like(self, values: Mapping[Index, Any]) -> "Cochain":
        return Cochain(self.rep, self.degree, values)

    @classmethod
    def zero(cls, rep: Rep, degree: int) -> "Cochain":
        return cls(rep, degree)

    def flatten(self) -> np.ndarray:
        """Coordinates over increasing tuples (lexicographic), then a-components."""
        parts = [self.value(key) for key in increasing_tuples(self.l, self.degree)]
        if not parts:
            return zeros(0)
        return np.concatenate(parts)

    @classmethod
    def from_flat(cls, rep: Rep, degree: int, flat: Sequence[Any]) -> "Cochain":
        keys = increasing_tuples(rep.l, degree)
        flat = as_exact(flat).reshape(-1)
        if flat.shape[0] != len(keys) * rep.a:
            raise InputError(f"expected {len(keys) * rep.a} coordinates, got {flat.shape[0]}")
        return cls(rep, degree, {key: flat[i * rep.a:(i + 1) * rep.a]
                                 for i, key in enumerate(keys)})

    @classmethod
    def basis(cls, rep: Rep, degree: int) -> List["Cochain"]:
        size = len(increasing_tuples(rep.l, degree)) * rep.a
        result = []
        for i in range(size):
            e = zeros(size)
            e[i] = Fraction(1)
            result.append(cls.from_flat(rep, degree, e))
        return result

    @classmethod
    def from_matrix(cls, rep: Rep, images: np.ndarray) -> "Cochain":
        """1-cochain whose value on L_j is column j of an (a x l) matrix."""
        images = as_exact(images).reshape(rep.a, rep.l)
        return cls(rep, 1, {(j,): images[:, j] for j in range(rep.l)})

    def as_matrix(self) -> np.ndarray:
        """(a x l) matrix of a 1-cochain: column j is the value on L_j."""
        if self.degree != 1:
            raise InputError("only 1-cochains have a matrix form")
        result = zeros((self.rep.a, self.l))
        for j in range(self.l):
            result[:, j] = self.value((j,))
        return result


class ScalarForm(_AlternatingMap):
    """Element of the p-th exterior power of l*."""

    def _coerce(self, value: Any) -> Fraction:
        return to_scalar(value)

    def _vanishes(self, value: Fraction) -> bool:
        return value == 0

    def _zero_value(self) -> Fraction:
        return Fraction(0)

    def _like(self, values: Mapping[Index, Any]) -> "ScalarForm":
        return ScalarForm(self.l, self.degree, values)

    @classmethod
    def zero(cls, l: int, degree: int) -> "ScalarForm":
        return cls(l, degree)

    def flatten(self) -> np.ndarray:
        return vector(self.value(key) for key in increasing_tuples(self.l, self.degree))

    @classmethod
    def from_flat(cls, l: int, degree: int, flat: Sequence[Any]) -> "ScalarForm":
        keys = increasing_tuples(l, degree)
        flat = as_exact(flat).reshape(-1)
        if flat.shape[0] != len(keys):
            raise InputError(f"expected {len(keys)} coordinates, got {flat.shape[0]}")
        return cls(l, degree, dict(zip(keys, flat)))


def coboundary(c: Cochain) -> Cochain:
    """The differential without the top-degree guard; vanishes above degree l."""
    p = c.degree
    rep = c.rep
    values = {}
    for key in increasing_tuples(rep.l, p + 1):
        total = zeros(rep.a)
        for position, i in enumerate(key):
            rest = key[:position] + key[position + 1:]
            v = c.value(rest)
            if not is_zero(v):
                term = rep.rho[i] @ v
                total = total + term if position % 2 == 0 else total - term
        values[key] = total
    return Cochain(rep, p + 1, values)


def differential(c: Cochain) -> Cochain:
    """
    The differential d: C^p(l, a) -> C^{p+1}(l, a).

    Raises:
        InputError: if p is the top degree l
    """
    if c.degree >= c.rep.l:
        raise InputError(f"top degree: cannot differentiate a {c.degree}-cochain "
                         f"on a {c.rep.l}-dimensional algebra")
    return coboundary(c)


def wedge_pairing(x: Cochain, y: Cochain) -> ScalarForm:
    """Sum over (p, q)-shuffles of sign * <x(first p), y(last q)>; no degree guard."""
    p, q = x.degree, y.degree
    l = x.rep.l
    gram = x.rep.gram
    values = {}
    for key in increasing_tuples(l, p + q):
        total = Fraction(0)
        for chosen in itertools.combinations(range(p + q), p):
            rest = tuple(i for i in range(p + q) if i not in chosen)
            left = x.value(tuple(key[i] for i in chosen))
            if is_zero(left):
                continue
            right = y.value(tuple(key[i] for i in rest))
            if is_zero(right):
                continue
            sign = -1 if sum(c - i for i, c in enumerate(chosen)) % 2 else 1
            total += sign * (left @ gram @ right)
        values[key] = total
    return ScalarForm(l, p + q, values)


def wedge_inner(x: Cochain, y: Cochain) -> ScalarForm:
    """
    Exterior product of x and y followed by the inner product of a.

    For a 2-cochain alpha and a 1-cochain tau this is
    <alpha(L1,L2),tau(L3)> + <alpha(L3,L1),tau(L2)> + <alpha(L2,L3),tau(L1)>.
    """
    if not x.rep.same_as(y.rep):
        raise InputError("cochains belong to different representations")
    if x.degree + y.degree > x.rep.l:
        raise InputError(f"degree overflow: {x.degree} + {y.degree} > {x.rep.l}")
    return wedge_pairing(x, y)


def check_cocycle(alpha: Cochain) -> bool:
    if alpha.degree >= alpha.rep.l:
        return True
    return coboundary(alpha).is_zero()


def check_ek(alpha: Cochain) -> bool:
    """The quadratic condition on a 2-cochain, evaluated on all increasing 4-tuples."""
    rep = alpha.rep
    for i1, i2, i3, i4 in increasing_tuples(rep.l, 4):
        total = (rep.inner(alpha.value((i1, i2)), alpha.value((i3, i4)))
                 + rep.inner(alpha.value((i2, i3)), alpha.value((i1, i4)))
                 + rep.inner(alpha.value((i3, i1)), alpha.value((i2, i4))))
        if total != 0:
            logger.debug(f"Quadratic condition fails on {(i1, i2, i3, i4)}: {total}")
            return False
    return True


def cup_selfcheck(alpha: Cochain) -> bool:
    """Whether 1/2 <alpha ^ alpha> vanishes; agrees with check_ek."""
    if 2 * alpha.degree > alpha.rep.l:
        return True
    return wedge_pairing(alpha, alpha).scale(Fraction(1, 2)).is_zero()


def act(alpha: Cochain, gamma: ScalarForm, tau: Cochain) -> Tuple[Cochain, ScalarForm]:
    """Right action (alpha, gamma) tau = (alpha + d tau, gamma + <(alpha + 1/2 d tau) ^ tau>)."""
    if alpha.degree != 2 or gamma.degree != 3 or tau.degree != 1:
        raise InputError("act expects a 2-cochain, a 3-form and a 1-cochain")
    d_tau = coboundary(tau)
    shifted = alpha + d_tau.scale(Fraction(1, 2))
    correction = wedge_pairing(shifted, tau) if alpha.rep.l >= 3 else ScalarForm.zero(alpha.l, 3)
    return alpha + d_tau, gamma + correction


def invariants(rep: Rep) -> List[np.ndarray]:
    """Basis of the joint kernel of all rho(L_j)."""
    if rep.l == 0:
        return [row for row in np.eye(rep.a, dtype=int).astype(object)]
    return nullspace(np.vstack(rep.rho)) if rep.a else []


def nil_split(rep: Rep) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """
    Split a Euclidean a into the invariants and their orthogonal complement.

    Raises:
        UnsupportedCaseError: if the inner product on a is not positive definite
    """
    sig = signature(rep.gram)
    if sig.p or sig.r:
        raise UnsupportedCaseError(f"invariant splitting needs a positive definite inner product, "
                                   f"got signature {tuple(sig)}")
    fixed = invariants(rep)
    if not fixed:
        complement = [row for row in np.eye(rep.a, dtype=int).astype(object)]
    else:
        complement = nullspace(stack(fixed, rep.a) @ rep.gram)
    return [as_exact(v) for v in fixed], [as_exact(v) for v in complement]


def three_form_quotient_basis(alpha: Cochain) -> np.ndarray:
    """Rows spanning <alpha ^ C^1(l, a^l)> in the coordinates of increasing triples."""
    rep = alpha.rep
    if rep.l < 3:
        return zeros((0, len(increasing_tuples(rep.l, 3))))
    rows = []
    for j in range(rep.l):
        for b in invariants(rep):
            tau = Cochain(rep, 1, {(j,): b})
            rows.append(wedge_pairing(alpha, tau).flatten())
    return stack(rows, len(increasing_tuples(rep.l, 3)))


def gamma_orbit_reduce(alpha: Cochain, gamma: ScalarForm) -> ScalarForm:
    """
    Canonical representative of gamma modulo <alpha ^ C^1(l, a^l)>.

    The subspace is brought to reduced row echelon form with columns ordered
    lexicographically by (i < j < k); gamma is reduced so that its coordinates
    at the pivot columns vanish.

    Raises:
        InputError: if alpha takes values outside the invariants
    """
    rep = alpha.rep
    for key, value in alpha.items():
        if any(not is_zero(r @ value) for r in rep.rho):
            raise InputError(f"alpha{list(key)} is not an invariant vector")
    if rep.l < 3:
        return ScalarForm.zero(rep.l, 3)
    reduced, pivots = rref_with_pivots(three_form_quotient_basis(alpha))
    coordinates = gamma.flatten()
    for row, pivot in enumerate(pivots):
        if coordinates[pivot] != 0:
            coordinates = coordinates - coordinates[pivot] * reduced[row]
    return ScalarForm.from_flat(rep.l, 3, coordinates)
