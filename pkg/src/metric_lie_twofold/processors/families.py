"""
Families of twofold extensions with rotation representations.

A family is given by an m x l weight matrix lambda (row j is the functional
lambda^j on l) and a table row fixing (alpha, gamma) on the k trivially acted
coordinates. The representation rotates the planes span{X_j, Y_j} with speed
lambda^j(L); see ``Rep.from_weights`` for the coordinate order.

This module holds the table rows, the closed-form admissibility predicates,
family construction, the stabilizer descriptions and random group elements
used to test invariance.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..algebra.cochain import Cochain, Rep, ScalarForm
from ..algebra.liecore import MetricLieAlgebra
from ..algebra.linalg import (
    as_exact, block_diagonal, determinant, identity, inverse, matrix, rank, stack, zeros,
)
from ..algebra.sampling import random_rational, random_weights
from ..algebra.twofold import TwofoldData, build
from ..errors import InputError
from .orbits import (
    B_V_MOD_SCALE, E_F_OMEGA, E_OMEGA, E_VOLUME, GRAM, GRASSMANNIAN, LORENTZ, SORTED,
    random_signed_permutation,
)


logger = logging.getLogger(__name__)

FAMILIES = ("osc", "d", "dA", "table", "sl2")


@dataclass(frozen=True)
class TableRow:
    """
    One row of the classification table.

    Attributes:
        id: Row identifier used in descriptors
        l: Dimension of l
        k: Number of trivially acted coordinates (the boost pair for dA)
        alpha: Pairs ((i, j), s) meaning alpha(L_i, L_j) = A_s
        volume: Whether gamma is the volume form Z_1 ^ Z_2 ^ Z_3
        tag: Invariant tag compared by the classifier
        min_m: Smallest admissible weight count
    """

    id: str
    l: int
    k: int
    alpha: Tuple[Tuple[Tuple[int, int], int], ...]
    volume: bool
    tag: str
    min_m: int
    condition: str


ROWS: Dict[str, TableRow] = {row.id: row for row in [
    TableRow("l1-k0", 1, 0, (), False, LORENTZ, 1, "all weights nonzero"),
    TableRow("l2-k0", 2, 0, (), False, GRASSMANNIAN, 3,
             "weights not contained in the union of two lines"),
    TableRow("l2-k1", 2, 1, (((0, 1), 0),), False, E_OMEGA, 0, "all weights nonzero"),
    TableRow("l3-k0-flat", 3, 0, (), False, GRASSMANNIAN, 4,
             "weights not contained in the union of a plane and a line"),
    TableRow("l3-k0-volume", 3, 0, (), True, E_VOLUME, 0, "all weights nonzero"),
    TableRow("l3-k1", 3, 1, (((0, 1), 0),), False, E_F_OMEGA, 2,
             "weights with lambda(L_3) != 0 span more than a line"),
    TableRow("l3-k2", 3, 2, (((0, 1), 0), ((0, 2), 1)), False, B_V_MOD_SCALE, 0,
             "all weights nonzero"),
    TableRow("l3-k3", 3, 3, (((0, 1), 0), ((0, 2), 1), ((1, 2), 2)), False, GRAM, 0,
             "all weights nonzero"),
    TableRow("dA", 1, 2, (), False, SORTED, 0, "all weights nonzero"),
]}

TABLE_ROWS = tuple(row for row in ROWS if row != "dA")


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """Weights lambda^j(L_i) as an exact m x l matrix."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = as_exact(self.entries)
        if entries.ndim != 2:
            raise InputError(f"weights must be an m x l matrix, got shape {entries.shape}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: List[List[Any]], l: int) -> "WeightMatrix":
        return cls(matrix(rows, cols=l))

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def l(self) -> int:
        return self.entries.shape[1]

    def row(self, j: int) -> np.ndarray:
        return self.entries[j].copy()

    def column(self, i: int) -> np.ndarray:
        return self.entries[:, i].copy()

    def transformed(self, S: Any) -> "WeightMatrix":
        """Weights of the family pulled back along S: lambda^j(S .)."""
        return WeightMatrix(self.entries @ as_exact(S)) if self.m else self

    def to_lists(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.entries]


@dataclass(frozen=True, eq=False)
class FamilySpec:
    """A family descriptor: alias, table row and weights."""

    family: str
    row: str
    weights: WeightMatrix

    @classmethod
    def create(cls, family: str, weights: Any, row: Optional[str] = None) -> "FamilySpec":
        """
        Resolve a family alias to its table row.

        ``osc`` is the row l1-k0 for one weight column and l2-k0 for two;
        ``d`` is l2-k1; ``dA`` is the boost row; ``table`` needs an explicit row.

        Raises:
            InputError: for unknown aliases or rows, or weights of the wrong width
        """
        if family == "sl2":
            return cls("sl2", "sl2", WeightMatrix(zeros((0, 0))))
        W = weights if isinstance(weights, WeightMatrix) else WeightMatrix(weights)
        resolved = {"osc": {1: "l1-k0", 2: "l2-k0"}.get(W.l), "d": "l2-k1", "dA": "dA"}
        if family == "table":
            if row not in ROWS or row == "dA":
                raise InputError(f"unknown table row: {row!r}", field="row")
            resolved_row = row
        elif family in resolved:
            resolved_row = resolved[family]
            if resolved_row is None:
                raise InputError(f"osc is defined for one or two weight columns, got {W.l}",
                                 field="lambda")
            if row is not None and row != resolved_row:
                raise InputError(f"family {family} has row {resolved_row}, not {row}",
                                 field="row")
        else:
            raise InputError(f"unknown family: {family!r}", field="family")
        expected = ROWS[resolved_row].l
        if W.l != expected:
            raise InputError(f"row {resolved_row} needs {expected} weight columns, got {W.l}",
                             field="lambda")
        return cls(family, resolved_row, W)

    @property
    def table_row(self) -> TableRow:
        if self.row not in ROWS:
            raise InputError(f"{self.family} is not a table family")
        return ROWS[self.row]

    @property
    def m(self) -> int:
        return self.weights.m

    @property
    def l(self) -> int:
        return self.weights.l

    @property
    def k(self) -> int:
        return self.table_row.k

    @property
    def n(self) -> int:
        """dim a = 2m + k."""
        return 2 * self.m + self.k

    def with_weights(self, weights: Any) -> "FamilySpec":
        W = weights if isinstance(weights, WeightMatrix) else WeightMatrix(weights)
        return FamilySpec(self.family, self.row, W)

    def to_dict(self) -> Dict[str, Any]:
        if self.family == "sl2":
            return {"family": "sl2"}
        return {"family": self.family, "row": self.row, "m": self.m, "k": self.k, "l": self.l,
                "lambda": self.weights.to_lists()}


@dataclass(frozen=True, eq=False)
class BuiltFamily:
    """
    Twofold data of a family with its admissibility verdict.

    The coordinates of a are X_1..X_m, Y_1..Y_m followed by the k extra
    coordinates A_1..A_k (for dA: the boost pair).
    """

    spec: FamilySpec
    data: TwofoldData
    violations: List[str] = field(default_factory=list)

    @property
    def admissible(self) -> bool:
        return not self.violations

    @property
    def extra_offset(self) -> int:
        return 2 * self.spec.m

    def algebra(self) -> MetricLieAlgebra:
        return build(self.data)


def _direction(v: np.ndarray) -> Tuple[Fraction, ...]:
    pivot = next(x for x in v if x != 0)
    return tuple(x / pivot for x in v)


def admissibility_violations(row: str, weights: Any) -> List[str]:
    """
    Conditions of the table row that the weights violate.

    Every row requires nonzero weights; l1-k0 needs m >= 1, l2-k0 more than
    two weight directions, l3-k0-flat m >= 4 and weights outside every union
    of a plane and a line, l3-k1 weights with lambda(L_3) != 0 spanning more
    than a line.
    """
    if row not in ROWS:
        raise InputError(f"unknown table row: {row!r}")
    table_row = ROWS[row]
    W = weights.entries if isinstance(weights, WeightMatrix) else as_exact(weights)
    m = W.shape[0]
    if W.ndim != 2 or W.shape[1] != table_row.l:
        raise InputError(f"row {row} needs an m x {table_row.l} weight matrix")
    violations = [f"weight {j + 1} is zero" for j in range(m) if all(x == 0 for x in W[j])]
    if m < table_row.min_m:
        violations.append(f"row {row} needs at least {table_row.min_m} weights, got {m}")
    nonzero = [W[j] for j in range(m) if any(x != 0 for x in W[j])]
    directions = {_direction(v) for v in nonzero}

    if row == "l2-k0" and m >= table_row.min_m and len(directions) <= 2:
        violations.append("weights lie in the union of two lines")
    elif row == "l3-k0-flat" and m >= table_row.min_m:
        flat = rank(stack(nonzero, 3)) < 3 if nonzero else True
        for direction in directions:
            rest = [v for v in nonzero if _direction(v) != direction]
            if not rest or rank(stack(rest, 3)) < 3:
                flat = True
        if flat:
            violations.append("weights lie in the union of a plane and a line")
    elif row == "l3-k1" and m >= table_row.min_m:
        moving = [v for v in nonzero if v[2] != 0]
        if not moving or rank(stack(moving, 3)) <= 1:
            violations.append("weights with lambda(L_3) != 0 span at most a line")
    return violations


def lambda_admissible(row: str, weights: Any) -> bool:
    return not admissibility_violations(row, weights)


def build_family(spec: FamilySpec) -> BuiltFamily:
    """
    Twofold data of a family; inadmissible weights are built with a warning.

    Raises:
        InputError: for the sl2 descriptor, which is not a twofold extension
    """
    if spec.family == "sl2":
        raise InputError("sl(2, R) is simple and has no twofold data; use sl2_killing")
    row = spec.table_row
    W = spec.weights.entries
    m = spec.m
    if row.id == "dA":
        rep = Rep.from_weights(W, boost=[1], l=1)
        data = TwofoldData.trivial(rep)
    else:
        rep = Rep.from_weights(W, fixed=row.k, l=row.l)
        values = {}
        for (i, j), s in row.alpha:
            value = zeros(rep.a)
            value[2 * m + s] = Fraction(1)
            values[(i, j)] = value
        gamma = ScalarForm(row.l, 3, {(0, 1, 2): 1} if row.volume else {})
        data = TwofoldData(rep, Cochain(rep, 2, values), gamma)
    violations = admissibility_violations(row.id, W)
    if violations:
        logger.warning(f"Building inadmissible {spec.family} family ({row.id}): "
                       f"{'; '.join(violations)}")
    logger.debug(f"Built family {row.id} with m={m}, dim a={rep.a}")
    return BuiltFamily(spec, data, violations)


def sl2_killing(scale: Any = 1) -> MetricLieAlgebra:
    """
    sl(2, R) in the basis (H, E, F) with ``scale`` times its Killing form.

    [H, E] = 2E, [H, F] = -2F, [E, F] = H; the Killing form has K(H, H) = 8 and
    K(E, F) = 4, signature (1, 2). With scale -1 the signature is (2, 1).
    """
    c = Fraction(scale) if not isinstance(scale, str) else Fraction(scale.strip())
    if c == 0:
        raise InputError("the scale of the Killing form must be nonzero")
    gram = matrix([[8 * c, 0, 0], [0, 0, 4 * c], [0, 4 * c, 0]])
    brackets = {(0, 1): [0, 2, 0], (0, 2): [0, 0, -2], (1, 2): [1, 0, 0]}
    return MetricLieAlgebra.from_brackets(gram, {k: as_exact(v) for k, v in brackets.items()},
                                          ["H", "E", "F"])


@dataclass(frozen=True)
class StabilizerDescription:
    """
    Generators of the projection to GL(l) of the stabilizer of (alpha, gamma).

    ``shape`` lists the symbolic matrix entries (columns are images of
    L_1..L_l) and ``parameters`` the constraints on the symbols.
    """

    row: str
    group: str
    shape: Tuple[Tuple[str, ...], ...]
    parameters: Dict[str, str]

    def to_dict(self) -> Dict[str, Any]:
        return {"row": self.row, "group": self.group,
                "shape": [list(r) for r in self.shape], "parameters": dict(self.parameters)}


_GL2 = (("a", "b"), ("c", "d"))
_GL3 = (("a", "b", "c"), ("d", "e", "f"), ("g", "h", "i"))

STABILIZERS: Dict[str, StabilizerDescription] = {s.row: s for s in [
    StabilizerDescription("l1-k0", "R*", (("c",),), {"c": "nonzero"}),
    StabilizerDescription("l2-k0", "GL(2)", _GL2, {"det": "nonzero"}),
    StabilizerDescription("l2-k1", "GL(2), det = +-1", _GL2, {"det": "+-1"}),
    StabilizerDescription("l3-k0-flat", "GL(3)", _GL3, {"det": "nonzero"}),
    StabilizerDescription("l3-k0-volume", "SL(3)", _GL3, {"det": "1"}),
    StabilizerDescription("l3-k1", "stabilizer of span{L_1, L_2}^0 with det = +-1 on L_1, L_2",
                          (("a", "b", "0"), ("c", "d", "0"), ("e", "f", "g")),
                          {"ad - bc": "+-1", "g": "nonzero"}),
    StabilizerDescription("l3-k2", "S(span{L_2, L_3}) = span{L_2, L_3}, S restricted in c O(2)",
                          (("+-1/c", "0", "0"), ("x", "c q11", "c q12"), ("y", "c q21", "c q22")),
                          {"c": "nonzero", "q": "O(2)", "x, y": "arbitrary"}),
    StabilizerDescription("l3-k3", "O(3)", _GL3, {"S": "orthogonal"}),
    StabilizerDescription("dA", "{+-1}", (("s",),), {"s": "+-1"}),
]}


def stabilizer_description(row: str) -> StabilizerDescription:
    if row not in STABILIZERS:
        raise InputError(f"unknown table row: {row!r}")
    return STABILIZERS[row]


def _nonzero_rational(rng: np.random.Generator) -> Fraction:
    while True:
        value = random_rational(rng, 2)
        if value != 0:
            return value


def _unimodular(rng: np.random.Generator, n: int, steps: int = 4) -> np.ndarray:
    """Product of random integer shears; determinant 1."""
    S = identity(n)
    for _ in range(steps):
        i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
        shear = identity(n)
        shear[i, j] = Fraction(int(rng.integers(-2, 3)))
        S = S @ shear
    return S


def _general_linear(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        S = as_exact(rng.integers(-2, 3, size=(n, n)))
        if determinant(S) != 0:
            return S


def _orthogonal_2(rng: np.random.Generator) -> np.ndarray:
    """Rational rotation or reflection from a Pythagorean triple."""
    p, q = 0, 0
    while p == 0 and q == 0:
        p, q = (int(x) for x in rng.integers(-3, 4, size=2))
    norm = p * p + q * q
    cos, sin = Fraction(p * p - q * q, norm), Fraction(2 * p * q, norm)
    Q = matrix([[cos, -sin], [sin, cos]])
    if rng.random() < 0.5:
        Q = Q @ matrix([[1, 0], [0, -1]])
    return Q


def _orthogonal_3(rng: np.random.Generator) -> np.ndarray:
    """Cayley transform of a random skew matrix times a signed permutation matrix."""
    a, b, c = (Fraction(int(x)) for x in rng.integers(-2, 3, size=3))
    K = matrix([[0, -a, -b], [a, 0, -c], [b, c, 0]])
    Q = (identity(3) - K) @ inverse(identity(3) + K)
    g = random_signed_permutation(rng, 3)
    P = zeros((3, 3))
    for j in range(3):
        P[g.perm[j], j] = Fraction(g.signs[j])
    return as_exact(Q @ P)


def sample_stabilizer(row: str, rng: np.random.Generator) -> np.ndarray:
    """Random element S of the stabilizer projection of ``row``."""
    if row == "l1-k0":
        return matrix([[_nonzero_rational(rng)]])
    if row in ("l2-k0", "l3-k0-flat"):
        return _general_linear(rng, ROWS[row].l)
    if row == "l2-k1":
        S = _unimodular(rng, 2)
        return S @ matrix([[1, 0], [0, -1]]) if rng.random() < 0.5 else S
    if row == "l3-k0-volume":
        return _unimodular(rng, 3, steps=6)
    if row == "l3-k1":
        top = sample_stabilizer("l2-k1", rng)
        e, f = random_rational(rng, 2), random_rational(rng, 2)
        return block_diagonal(top, matrix([[_nonzero_rational(rng)]])) + matrix(
            [[0, 0, 0], [0, 0, 0], [e, f, 0]])
    if row == "l3-k2":
        c = _nonzero_rational(rng)
        sign = 1 if rng.random() < 0.5 else -1
        S = block_diagonal(matrix([[Fraction(sign) / c]]), c * _orthogonal_2(rng))
        S[1, 0] = random_rational(rng, 2)
        S[2, 0] = random_rational(rng, 2)
        return S
    if row == "l3-k3":
        return _orthogonal_3(rng)
    if row == "dA":
        return matrix([[1 if rng.random() < 0.5 else -1]])
    raise InputError(f"unknown table row: {row!r}")


def random_admissible_weights(rng: np.random.Generator, row: str, m: int,
                              attempts: int = 500) -> np.ndarray:
    """Random integer weights for ``row`` accepted by lambda_admissible."""
    table_row = ROWS[row]
    for _ in range(attempts):
        W = random_weights(rng, m, table_row.l)
        if lambda_admissible(row, W):
            return W
    raise RuntimeError(f"no admissible weights for row {row} with m={m} in {attempts} attempts")
