"""
Exact rational linear algebra.

Matrices and vectors are numpy arrays of dtype ``object`` holding
``fractions.Fraction`` entries, so products and sums stay exact. Row reduction
is delegated to sympy's ``DomainMatrix`` over ``QQ``; nullspaces, linear
solves, inverses and subspace bases are read off the reduced form.

Signatures follow the convention (negative squares, positive squares, nullity):
an inner product of signature (p, q) has a maximal negative definite subspace
of dimension p.
"""

import logging
from fractions import Fraction
from math import lcm
from typing import Any, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from ..errors import InputError


logger = logging.getLogger(__name__)


class Signature(NamedTuple):
    """Counts of negative squares, positive squares and the nullity."""

    p: int
    q: int
    r: int


def to_scalar(value: Any) -> Fraction:
    """
    Convert an exact scalar to a Fraction.

    Accepts Fractions, integers and rational strings such as ``"3"``,
    ``"-2/5"``. Floats are rejected because they are not exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational number: {value!r}") from None
    raise InputError(f"not an exact rational (use a 'p/q' string): {value!r}")


def zeros(shape: Any) -> np.ndarray:
    return np.full(shape, Fraction(0), dtype=object)


def identity(n: int) -> np.ndarray:
    result = zeros((n, n))
    for i in range(n):
        result[i, i] = Fraction(1)
    return result


def as_exact(values: Any) -> np.ndarray:
    """Return a copy of ``values`` as an object array of Fractions."""
    source = np.asarray(values, dtype=object)
    result = np.empty(source.shape, dtype=object)
    for index, entry in np.ndenumerate(source):
        result[index] = to_scalar(entry)
    return result


def vector(values: Iterable[Any]) -> np.ndarray:
    entries = [to_scalar(v) for v in values]
    result = np.empty(len(entries), dtype=object)
    for i, entry in enumerate(entries):
        result[i] = entry
    return result


def matrix(rows: Sequence[Sequence[Any]], cols: Optional[int] = None) -> np.ndarray:
    """
    Build a matrix from nested rows.

    Args:
        rows: Row lists of exact scalars
        cols: Column count, required when ``rows`` is empty

    Returns:
        Object array of Fractions with shape (len(rows), cols)
    """
    rows = [list(row) for row in rows]
    if not rows:
        return zeros((0, cols or 0))
    width = len(rows[0]) if cols is None else cols
    for index, row in enumerate(rows):
        if len(row) != width:
            raise InputError(f"row {index} has {len(row)} entries, expected {width}")
    result = zeros((len(rows), width))
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            result[i, j] = to_scalar(entry)
    return result


def stack(vectors: Sequence[np.ndarray], dim: int) -> np.ndarray:
    """Stack vectors as the rows of a (len(vectors), dim) matrix."""
    if not vectors:
        return zeros((0, dim))
    return as_exact(np.vstack([np.asarray(v, dtype=object).reshape(1, dim) for v in vectors]))


def block_diagonal(*blocks: np.ndarray) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    result = zeros((rows, cols))
    r = c = 0
    for block in blocks:
        result[r:r + block.shape[0], c:c + block.shape[1]] = block
        r += block.shape[0]
        c += block.shape[1]
    return result


def is_zero(values: Any) -> bool:
    return all(entry == 0 for entry in np.asarray(values, dtype=object).flat)


def equal(a: Any, b: Any) -> bool:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return a.shape == b.shape and is_zero(a - b)


def is_symmetric(G: np.ndarray) -> bool:
    return G.ndim == 2 and G.shape[0] == G.shape[1] and equal(G, G.T)


def integral_form(values: Any) -> Tuple[np.ndarray, int]:
    """
    Scale an exact array to Python integers.

    Returns:
        Tuple of (integer object array, common denominator) with
        ``values == ints / denominator``
    """
    exact = as_exact(values)
    denominator = lcm(1, *(entry.denominator for entry in exact.flat))
    ints = np.empty(exact.shape, dtype=object)
    for index, entry in np.ndenumerate(exact):
        ints[index] = int(entry * denominator)
    return ints, denominator


def _to_domain(M: np.ndarray) -> DomainMatrix:
    rows, cols = M.shape
    entries = [[QQ(int(x.numerator), int(x.denominator)) for x in row] for row in M]
    return DomainMatrix(entries, (rows, cols), QQ)


def _from_domain(D: DomainMatrix) -> np.ndarray:
    dense = D.to_Matrix()
    result = zeros(dense.shape)
    for i in range(dense.shape[0]):
        for j in range(dense.shape[1]):
            entry = dense[i, j]
            result[i, j] = Fraction(int(entry.p), int(entry.q))
    return result


def rref_with_pivots(M: Any) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """Reduced row echelon form together with the pivot columns."""
    M = as_exact(M)
    if M.ndim != 2:
        raise InputError(f"expected a matrix, got an array of shape {M.shape}")
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return M, ()
    reduced, pivots = _to_domain(M).rref()
    return _from_domain(reduced), tuple(int(p) for p in pivots)


def rref(M: Any) -> np.ndarray:
    return rref_with_pivots(M)[0]


def rank(M: Any) -> int:
    return len(rref_with_pivots(M)[1])


def row_basis(M: Any) -> np.ndarray:
    """Canonical basis of the row space: the nonzero rows of the rref."""
    reduced, pivots = rref_with_pivots(M)
    return reduced[:len(pivots)]


def nullspace(M: Any) -> List[np.ndarray]:
    """
    Basis of {v : Mv = 0}, one vector per free column of the rref.

    Args:
        M: Matrix of exact scalars

    Returns:
        List of independent vectors; empty iff M is injective
    """
    M = as_exact(M)
    cols = M.shape[1]
    reduced, pivots = rref_with_pivots(M)
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = zeros(cols)
        v[free] = Fraction(1)
        for row, pivot in enumerate(pivots):
            v[pivot] = -reduced[row, free]
        basis.append(v)
    return basis


def solve(M: Any, b: Any) -> Optional[Tuple[np.ndarray, List[np.ndarray]]]:
    """
    Solve Mx = b exactly.

    Args:
        M: Coefficient matrix
        b: Right-hand side with len(b) == rows(M)

    Returns:
        None if b is not in the column span, otherwise a particular solution
        and a basis of the nullspace of M
    """
    M = as_exact(M)
    b = as_exact(b).reshape(-1)
    if M.ndim != 2 or b.shape[0] != M.shape[0]:
        raise InputError(f"dimension mismatch: matrix {M.shape}, vector of length {b.shape[0]}")
    cols = M.shape[1]
    augmented = np.concatenate([M, b.reshape(-1, 1)], axis=1)
    reduced, pivots = rref_with_pivots(augmented)
    if cols in pivots:
        return None
    x = zeros(cols)
    for row, pivot in enumerate(pivots):
        x[pivot] = reduced[row, cols]
    return x, nullspace(M)


def inverse(M: Any) -> np.ndarray:
    M = as_exact(M)
    n = M.shape[0]
    if M.ndim != 2 or M.shape[1] != n:
        raise InputError(f"cannot invert a non-square matrix of shape {M.shape}")
    reduced, pivots = rref_with_pivots(np.concatenate([M, identity(n)], axis=1))
    if pivots[:n] != tuple(range(n)):
        raise InputError("matrix is singular")
    return reduced[:, n:]


def determinant(M: Any) -> Fraction:
    M = as_exact(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError(f"determinant of a non-square matrix of shape {M.shape}")
    if M.shape[0] == 0:
        return Fraction(1)
    value = QQ.to_sympy(_to_domain(M).det())
    return Fraction(int(value.p), int(value.q))


def contains(basis: np.ndarray, v: Any) -> bool:
    """Whether v lies in the row space of ``basis``."""
    v = as_exact(v).reshape(1, -1)
    if basis.shape[0] == 0:
        return is_zero(v)
    return rank(np.concatenate([basis, v], axis=0)) == rank(basis)


def complete_basis(rows: np.ndarray, dim: int) -> List[np.ndarray]:
    """Standard basis vectors that extend the row space of ``rows`` to all of Q^dim."""
    current = row_basis(rows) if rows.shape[0] else zeros((0, dim))
    added = []
    for i in range(dim):
        e = zeros(dim)
        e[i] = Fraction(1)
        if not contains(current, e):
            added.append(e)
            current = np.concatenate([current, e.reshape(1, dim)], axis=0)
    return added


def signature(G: Any) -> Signature:
    """
    Signature of a symmetric matrix by symmetric Gaussian congruence.

    A zero diagonal with a nonzero off-diagonal entry A[i, j] is a hyperbolic
    pair; the congruence e_i -> e_i + e_j moves 2 A[i, j] onto the diagonal.

    Args:
        G: Symmetric matrix

    Returns:
        Signature(p=negative squares, q=positive squares, r=nullity)
    """
    A = as_exact(G)
    if not is_symmetric(A):
        raise InputError("signature requires a symmetric matrix")
    n = A.shape[0]
    active = list(range(n))
    negative = positive = 0
    while active:
        pivot = next((i for i in active if A[i, i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in active for j in active if i < j and A[i, j] != 0), None)
            if pair is None:
                break
            i, j = pair
            A[i, :] = A[i, :] + A[j, :]
            A[:, i] = A[:, i] + A[:, j]
            pivot = i
        d = A[pivot, pivot]
        if d > 0:
            positive += 1
        else:
            negative += 1
        active.remove(pivot)
        for r in active:
            if A[r, pivot] != 0:
                factor = A[r, pivot] / d
                A[r, :] = A[r, :] - factor * A[pivot, :]
                A[:, r] = A[:, r] - factor * A[:, pivot]
    return Signature(negative, positive, n - negative - positive)
