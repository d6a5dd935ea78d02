"""
Canonical forms of weight data under signed permutations.

A signed permutation g acts on an m x l weight matrix by moving weight j to
position perm[j] and multiplying it by signs[j]. Every invariant is a list of
exact entries computed from the (permuted) weights; negating weight j flips
the sign of each entry whose sign mask contains bit j.

For each of the m! row orders the signs are fixed greedily over GF(2): the
entries are read in order and every entry whose sign is still free is made
positive. The canonical form is the lexicographically least entry tuple over
all orders, and the order and sign choice that produced it is kept as the
certificate g with canonical = invariant(g . lambda).
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.linalg import as_exact, determinant, rref_with_pivots, stack, zeros
from ..errors import InputError, OrbitSearchExceeded


logger = logging.getLogger(__name__)

LORENTZ = "LORENTZ"
GRASSMANNIAN = "GRASSMANNIAN"
E_OMEGA = "E_OMEGA"
E_VOLUME = "E_VOLUME"
E_F_OMEGA = "E_F_OMEGA"
B_V_MOD_SCALE = "B_V_MOD_SCALE"
GRAM = "GRAM"
SORTED = "SORTED"

TAGS = (LORENTZ, GRASSMANNIAN, E_OMEGA, E_VOLUME, E_F_OMEGA, B_V_MOD_SCALE, GRAM, SORTED)

Entry = Tuple[Fraction, int]
Part = Tuple[str, Tuple[int, ...], List[Entry]]


@dataclass(frozen=True)
class SignedPermutation:
    """The map lambda^j -> signs[j] lambda^j placed at position perm[j]."""

    perm: Tuple[int, ...]
    signs: Tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(len(self.perm))):
            raise InputError(f"not a permutation: {list(self.perm)}")
        if len(self.signs) != len(self.perm) or any(s not in (1, -1) for s in self.signs):
            raise InputError(f"signs must be +1/-1, one per position: {list(self.signs)}")

    @classmethod
    def identity(cls, m: int) -> "SignedPermutation":
        return cls(tuple(range(m)), (1,) * m)

    @property
    def m(self) -> int:
        return len(self.perm)

    def apply(self, weights: Any) -> np.ndarray:
        W = as_exact(weights)
        if W.shape[0] != self.m:
            raise InputError(f"signed permutation of {self.m} weights applied to {W.shape[0]}")
        result = zeros(W.shape)
        for j in range(self.m):
            result[self.perm[j]] = self.signs[j] * W[j]
        return result

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """self after other."""
        perm = tuple(self.perm[other.perm[j]] for j in range(self.m))
        signs = tuple(self.signs[other.perm[j]] * other.signs[j] for j in range(self.m))
        return SignedPermutation(perm, signs)

    def inverse(self) -> "SignedPermutation":
        perm = [0] * self.m
        signs = [1] * self.m
        for j in range(self.m):
            perm[self.perm[j]] = j
            signs[self.perm[j]] = self.signs[j]
        return SignedPermutation(tuple(perm), tuple(signs))

    def plane_matrix(self) -> np.ndarray:
        """
        Isometry of the rotation planes: X_j -> X_perm[j], Y_j -> signs[j] Y_perm[j].

        Coordinates are ordered X_1..X_m, Y_1..Y_m.
        """
        m = self.m
        U = zeros((2 * m, 2 * m))
        for j in range(m):
            U[self.perm[j], j] = Fraction(1)
            U[m + self.perm[j], m + j] = Fraction(self.signs[j])
        return U

    def to_dict(self) -> Dict[str, List[int]]:
        return {"perm": list(self.perm), "signs": list(self.signs)}


def signed_permutations(m: int) -> Iterator[SignedPermutation]:
    for perm in itertools.permutations(range(m)):
        for signs in itertools.product((1, -1), repeat=m):
            yield SignedPermutation(perm, signs)


def random_signed_permutation(rng: np.random.Generator, m: int) -> SignedPermutation:
    perm = tuple(int(x) for x in rng.permutation(m))
    signs = tuple(int(s) for s in rng.choice([1, -1], size=m))
    return SignedPermutation(perm, signs)


def fix_signs(entries: Sequence[Entry], bits: int) -> Tuple[Tuple[Fraction, ...], List[int]]:
    """
    Choose sign flips so that each entry with a free sign becomes positive.

    Args:
        entries: (value, mask) pairs; flipping bit b negates every entry whose
            mask contains b
        bits: Number of sign bits

    Returns:
        The flipped values and one bit assignment realizing them
    """
    pivots: Dict[int, Tuple[int, int]] = {}
    values = []
    for value, mask in entries:
        if value == 0:
            values.append(Fraction(0))
            continue
        reduced, parity = mask, 0
        while reduced:
            top = reduced.bit_length() - 1
            if top not in pivots:
                break
            row_mask, row_parity = pivots[top]
            reduced ^= row_mask
            parity ^= row_parity
        if reduced:
            wanted = 0 if value > 0 else 1
            pivots[reduced.bit_length() - 1] = (reduced, wanted ^ parity)
            flip = wanted
        else:
            flip = parity
        values.append(-value if flip else value)

    assignment = [0] * bits
    for top in sorted(pivots):
        row_mask, row_parity = pivots[top]
        bit = row_parity
        for b in range(top):
            if row_mask >> b & 1:
                bit ^= assignment[b]
        assignment[top] = bit
    return tuple(values), assignment


def _pair_mask(i: int, j: int) -> int:
    return (1 << i) ^ (1 << j)


def _span_part(name: str, rows: np.ndarray, m: int) -> Tuple[Part, np.ndarray, Tuple[int, ...]]:
    """Rref basis of the span of ``rows`` (vectors in Q^m) as a signed part."""
    if rows.shape[0] == 0:
        return (name, (0, m), []), zeros((0, m)), ()
    reduced, pivots = rref_with_pivots(rows)
    reduced = reduced[:len(pivots)]
    entries = [(reduced[r, c], _pair_mask(pivots[r], c))
               for r in range(len(pivots)) for c in range(m)]
    return (name, (len(pivots), m), entries), reduced, pivots


def _coefficient_determinant(rows: np.ndarray, pivots: Tuple[int, ...]) -> Fraction:
    """det C where rows = C . rref(rows), or 0 when the rows are dependent."""
    if len(pivots) < rows.shape[0]:
        return Fraction(0)
    return determinant(rows[:, list(pivots)])


def _symmetric_part(name: str, M: np.ndarray) -> Part:
    m = M.shape[0]
    return name, (m, m), [(M[i, j], _pair_mask(i, j)) for i in range(m) for j in range(m)]


def _first_nonzero_diagonal(M: np.ndarray) -> Fraction:
    return next((M[i, i] for i in range(M.shape[0]) if M[i, i] != 0), Fraction(0))


def grassmannian_parts(W: np.ndarray) -> List[Part]:
    m = W.shape[0]
    part, _, _ = _span_part("span", W.T, m)
    return [part]


def omega_parts(W: np.ndarray) -> List[Part]:
    m = W.shape[0]
    rows = W.T
    part, _, pivots = _span_part("span", rows, m)
    omega = abs(_coefficient_determinant(rows, pivots))
    return [part, ("omega", (), [(omega, 0)])]


def volume_parts(W: np.ndarray) -> List[Part]:
    m = W.shape[0]
    rows = W.T
    part, _, pivots = _span_part("span", rows, m)
    volume = _coefficient_determinant(rows, pivots)
    mask = 0
    for p in pivots:
        mask ^= 1 << p
    return [part, ("volume", (), [(volume, mask)])]


def flag_omega_parts(W: np.ndarray) -> List[Part]:
    """The line F = span(lambda_3), E/F and |lambda_1 ^ lambda_2| in E/F."""
    m = W.shape[0]
    line = W[:, 2].copy()
    q = next((c for c in range(m) if line[c] != 0), None)
    if q is None:
        line_entries = [(Fraction(0), 0) for _ in range(m)]
        quotient = W[:, :2].T.copy()
    else:
        f = line / line[q]
        line_entries = [(f[c], _pair_mask(q, c)) for c in range(m)]
        quotient = stack([W[:, i] - W[q, i] * f for i in range(2)], m)
    part, _, pivots = _span_part("quotient_span", quotient, m)
    omega = abs(_coefficient_determinant(quotient, pivots))
    return [("line", (m,), line_entries), part, ("omega", (), [(omega, 0)])]


def _outer(v: np.ndarray) -> np.ndarray:
    return as_exact(np.outer(v, v)) if v.shape[0] else zeros((0, 0))


def scaled_pair_parts(W: np.ndarray) -> List[Part]:
    """
    (B, v) with B = A A^T for A = (lambda_2 lambda_3), v = lambda_1 mod span(A).

    The scale (B, v) -> (c^2 B, v / c) is removed by dividing B by its first
    nonzero diagonal entry d and storing d v v^T; when B = 0 the outer product
    v v^T is divided by its own first nonzero diagonal entry.
    """
    m = W.shape[0]
    A = W[:, 1:3]
    B = as_exact(A @ A.T) if m else zeros((0, 0))
    _, reduced, pivots = _span_part("span", A.T.copy(), m)
    v = W[:, 0].copy()
    for r, p in enumerate(pivots):
        if v[p] != 0:
            v = v - v[p] * reduced[r]
    outer = _outer(v)
    d = _first_nonzero_diagonal(B)
    if d != 0:
        B, outer = B / d, outer * d
    else:
        e = _first_nonzero_diagonal(outer)
        if e != 0:
            outer = outer / e
    return [_symmetric_part("B", as_exact(B)), _symmetric_part("v_outer", as_exact(outer))]


def gram_parts(W: np.ndarray) -> List[Part]:
    G = as_exact(W @ W.T) if W.shape[0] else zeros((0, 0))
    return [_symmetric_part("gram", G)]


PART_BUILDERS: Dict[str, Callable[[np.ndarray], List[Part]]] = {
    GRASSMANNIAN: grassmannian_parts,
    E_OMEGA: omega_parts,
    E_VOLUME: volume_parts,
    E_F_OMEGA: flag_omega_parts,
    B_V_MOD_SCALE: scaled_pair_parts,
    GRAM: gram_parts,
}


@dataclass(frozen=True, eq=False)
class Canonical:
    """A canonical invariant with the certificate g and the continuous normalization."""

    tag: str
    parts: Tuple[Tuple[str, np.ndarray], ...]
    certificate: SignedPermutation
    normalization: Optional[Fraction] = None

    @property
    def key(self) -> Tuple[Any, ...]:
        return (self.tag,) + tuple((name, value.shape, tuple(value.flat))
                                   for name, value in self.parts)


def _assemble(parts: List[Part], values: Sequence[Fraction]) -> Tuple[Tuple[str, np.ndarray], ...]:
    assembled = []
    position = 0
    for name, shape, entries in parts:
        count = len(entries)
        block = zeros(count)
        for i in range(count):
            block[i] = values[position + i]
        assembled.append((name, block.reshape(shape)))
        position += count
    return tuple(assembled)


def _sorted_weights(tag: str, W: np.ndarray) -> Canonical:
    """Sorted absolute values of a single column of weights, scaled to 1 for LORENTZ."""
    m = W.shape[0]
    column = [W[j, 0] for j in range(m)]
    order = sorted(range(m), key=lambda j: (abs(column[j]), j))
    perm = [0] * m
    signs = [1] * m
    values = zeros(m)
    for position, j in enumerate(order):
        perm[j] = position
        signs[j] = -1 if column[j] < 0 else 1
        values[position] = abs(column[j])
    normalization = None
    if tag == LORENTZ:
        normalization = next((x for x in values if x != 0), Fraction(1))
        values = values / normalization
    return Canonical(tag, (("lambda", values),), SignedPermutation(tuple(perm), tuple(signs)),
                     normalization)


def canonicalize(tag: str, weights: Any, bound: int) -> Canonical:
    """
    Canonical form of the invariant ``tag`` of an m x l weight matrix.

    Raises:
        OrbitSearchExceeded: if m exceeds ``bound`` for a tag that needs the search
        InputError: for an unknown tag or a weight matrix of the wrong width
    """
    W = as_exact(weights)
    if W.ndim != 2:
        raise InputError(f"weights must be an m x l matrix, got shape {W.shape}")
    m, l = W.shape
    if tag in (LORENTZ, SORTED):
        if l != 1:
            raise InputError(f"{tag} is defined for a single weight column, got {l}")
        return _sorted_weights(tag, W)
    if tag not in PART_BUILDERS:
        raise InputError(f"unknown invariant tag: {tag}")
    needed = {GRASSMANNIAN: 0, E_OMEGA: 2, E_VOLUME: 3, E_F_OMEGA: 3, B_V_MOD_SCALE: 3, GRAM: 0}
    if l < needed[tag]:
        raise InputError(f"{tag} needs at least {needed[tag]} weight columns, got {l}")
    if m > bound:
        raise OrbitSearchExceeded(f"orbit search exceeded: m={m} weights exceed the bound {bound}")
    logger.debug(f"Canonicalizing {tag} over {m}! orders of {m} weights")

    builder = PART_BUILDERS[tag]
    best: Optional[Tuple[Tuple[Fraction, ...], Tuple[int, ...], List[int], List[Part]]] = None
    for order in itertools.permutations(range(m)):
        permuted = W[list(order)] if m else W
        parts = builder(permuted)
        entries = [entry for _, _, block in parts for entry in block]
        values, bits = fix_signs(entries, m)
        if best is None or values < best[0]:
            best = (values, order, bits, parts)
    assert best is not None
    values, order, bits, parts = best

    perm = [0] * m
    signs = [1] * m
    for position, j in enumerate(order):
        perm[j] = position
        signs[j] = -1 if bits[position] else 1
    certificate = SignedPermutation(tuple(perm), tuple(signs))

    normalization = None
    if tag == B_V_MOD_SCALE:
        normalized = certificate.apply(W)
        A = normalized[:, 1:3]
        B = as_exact(A @ A.T) if m else zeros((0, 0))
        normalization = _first_nonzero_diagonal(B)
    return Canonical(tag, _assemble(parts, values), certificate, normalization)
