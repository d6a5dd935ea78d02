"""
Twofold extensions d_{alpha,gamma}(a, l, rho) of abelian Lie algebras.

The built algebra has the basis (Z_1..Z_l, A_1..A_a, L_1..L_l), where the Z_i
are the dual basis of l* and Z_i(L_j) = delta_ij. Brackets:

    [A, A']  = <rho(.)A, A'>                     (in l*)
    [A, L]   = <A, alpha(L, .)> - rho(L)A
    [L, L']  = gamma(L, L', .) + alpha(L, L')
    l* is central.

This module builds the algebra, decides regularity, extracts twofold data from
an algebra with isotropic centre, decides extension equivalence under the
C^1-action, and checks explicit isomorphisms (S, U, tau).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import InputError, UnsupportedCaseError
from .cochain import (
    Cochain, Rep, ScalarForm, act, check_cocycle, check_ek, coboundary, increasing_tuples,
    invariants, wedge_pairing,
)
from .linalg import (
    as_exact, block_diagonal, complete_basis, equal, identity, inverse, is_zero, nullspace,
    rank, signature, solve, stack, zeros,
)
from .liecore import MetricLieAlgebra, centre, derived, is_abelian, verify, verify_isomorphism


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TwofoldData:
    """
    Representation, 2-cocycle and 3-form defining a twofold extension.

    Attributes:
        rep: Orthogonal representation of the abelian algebra l on a
        alpha: a-valued 2-form on l
        gamma: Scalar 3-form on l
    """

    rep: Rep
    alpha: Cochain
    gamma: ScalarForm

    def __post_init__(self) -> None:
        if self.alpha.degree != 2 or self.gamma.degree != 3:
            raise InputError("alpha must be a 2-cochain and gamma a 3-form")
        if not self.alpha.rep.same_as(self.rep):
            raise InputError("alpha is defined on a different representation")
        if self.gamma.l != self.rep.l:
            raise InputError(f"gamma lives on dimension {self.gamma.l}, expected {self.rep.l}")

    @property
    def l(self) -> int:
        return self.rep.l

    @property
    def a(self) -> int:
        return self.rep.a

    @classmethod
    def trivial(cls, rep: Rep) -> "TwofoldData":
        return cls(rep, Cochain.zero(rep, 2), ScalarForm.zero(rep.l, 3))

    def violations(self) -> List[str]:
        """Names of the violated conditions on alpha (cocycle, quadratic condition)."""
        failed = []
        if not check_cocycle(self.alpha):
            failed.append("cocycle")
        if not check_ek(self.alpha):
            failed.append("quadratic_condition")
        return failed

    def validate(self) -> None:
        failed = self.violations()
        if failed:
            raise InputError(f"twofold data violates: {', '.join(failed)}")

    def with_forms(self, alpha: Cochain, gamma: ScalarForm) -> "TwofoldData":
        return TwofoldData(self.rep, alpha, gamma)

    def same_as(self, other: "TwofoldData") -> bool:
        return (self.rep.same_as(other.rep) and self.alpha == other.alpha
                and self.gamma == other.gamma)


def labels_for(l: int, a: int) -> List[str]:
    return ([f"Z{i + 1}" for i in range(l)] + [f"A{s + 1}" for s in range(a)]
            + [f"L{j + 1}" for j in range(l)])


def hyperbolic_gram(rep: Rep) -> np.ndarray:
    l, a = rep.l, rep.a
    gram = zeros((2 * l + a, 2 * l + a))
    gram[l:l + a, l:l + a] = rep.gram
    for i in range(l):
        gram[i, l + a + i] = Fraction(1)
        gram[l + a + i, i] = Fraction(1)
    return gram


def build(data: TwofoldData) -> MetricLieAlgebra:
    """
    Construct the metric Lie algebra of twofold data.

    Raises:
        InputError: if alpha is not a cocycle or violates the quadratic condition
    """
    data.validate()
    rep = data.rep
    l, a = rep.l, rep.a
    n = 2 * l + a
    z0, a0, l0 = 0, l, l + a
    C = zeros((n, n, n))

    skew = [rep.gram @ r for r in rep.rho]
    for s in range(a):
        for t in range(a):
            for i in range(l):
                C[a0 + s, a0 + t, z0 + i] = skew[i][t, s]

    for j in range(l):
        for s in range(a):
            entry = zeros(n)
            for i in range(l):
                entry[z0 + i] = (rep.gram @ data.alpha.value((j, i)))[s]
            entry[a0:a0 + a] = -rep.rho[j][:, s]
            C[a0 + s, l0 + j] = entry
            C[l0 + j, a0 + s] = -entry

    for i in range(l):
        for j in range(l):
            if i == j:
                continue
            entry = zeros(n)
            for k in range(l):
                entry[z0 + k] = data.gamma.value((i, j, k))
            entry[a0:a0 + a] = data.alpha.value((i, j))
            C[l0 + i, l0 + j] = entry

    g = MetricLieAlgebra(C, hyperbolic_gram(rep), labels_for(l, a))
    logger.debug(f"Built twofold extension of dimension {n} (l={l}, a={a})")
    return g


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    witnesses: List[Tuple[np.ndarray, np.ndarray]] = field(default_factory=list)

    @property
    def nullity(self) -> int:
        return len(self.witnesses)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "regular": self.regular,
            "nullity": self.nullity,
            "witnesses": [{"L0": [str(x) for x in L0], "A0": [str(x) for x in A0]}
                          for L0, A0 in self.witnesses],
        }


def regularity_system(data: TwofoldData) -> np.ndarray:
    """
    Linear system in (L0, A0) whose solutions are the central elements beyond l*.

    Rows encode rho(L0) = 0, rho(L)A0 = alpha(L0, L) and
    gamma(L0, L, L') + <A0, alpha(L, L')> = 0, read off the bracket.
    """
    rep = data.rep
    l, a = rep.l, rep.a
    rows = []
    for r in range(a):
        for c in range(a):
            row = zeros(l + a)
            for j in range(l):
                row[j] = rep.rho[j][r, c]
            rows.append(row)
    for i in range(l):
        for r in range(a):
            row = zeros(l + a)
            row[l:] = rep.rho[i][r, :]
            for j in range(l):
                row[j] = -data.alpha.value((j, i))[r]
            rows.append(row)
    for i, k in increasing_tuples(l, 2):
        row = zeros(l + a)
        for j in range(l):
            row[j] = data.gamma.value((j, i, k))
        row[l:] = rep.gram @ data.alpha.value((i, k))
        rows.append(row)
    return stack(rows, l + a)


def regularity(data: TwofoldData) -> RegularityReport:
    """Regular iff the centre of build(data) is exactly l*."""
    l = data.l
    solutions = nullspace(regularity_system(data))
    witnesses = [(v[:l].copy(), v[l:].copy()) for v in solutions]
    return RegularityReport(regular=not witnesses, witnesses=witnesses)


def invariant_bound_ok(data: TwofoldData) -> bool:
    """Whether dim a^l <= l(l-1)/2, necessary for regular data."""
    l = data.l
    return len(invariants(data.rep)) <= l * (l - 1) // 2


@dataclass(frozen=True, eq=False)
class ExtractionResult:
    """
    Twofold data read off an algebra, with the isomorphism build(data) -> algebra.

    ``matrix`` has as columns the images of (Z, A, L) in the algebra's basis.
    """

    data: TwofoldData
    matrix: np.ndarray


def _transport(g: MetricLieAlgebra, F: np.ndarray) -> np.ndarray:
    """Structure constants of g in the basis given by the columns of F."""
    Finv = inverse(F)
    images = np.tensordot(F, g.structure, axes=([0], [0]))
    images = np.tensordot(images, F, axes=([1], [0])).transpose(0, 2, 1)
    return np.tensordot(images, Finv.T, axes=([2], [0]))


def extract(g: MetricLieAlgebra) -> ExtractionResult:
    """
    Recover twofold data from a metric Lie algebra with isotropic centre.

    Chooses an isotropic complement s(l) of the derived algebra and the section
    t(a) = s(l)^perp cap g'. The returned data is regular and defined up to the
    C^1-action.

    Raises:
        InputError: if g fails an axiom or is abelian
        UnsupportedCaseError: if the centre is not isotropic or g'/z is not abelian
    """
    report = verify(g)
    if not report.passed:
        raise InputError(f"algebra fails the metric Lie algebra axioms: {report.failures()}")
    if is_abelian(g):
        raise InputError("abelian algebras are not twofold extensions of positive rank")
    n = g.dim
    G = g.gram
    z = centre(g)
    D = derived(g)
    Zb = z.basis
    l = z.dim
    if not is_zero(Zb @ G @ Zb.T):
        raise UnsupportedCaseError("the centre is not isotropic")
    for x in D.basis:
        for y in D.basis:
            if not z.contains(g.bracket(x, y)):
                raise UnsupportedCaseError("g'/z(g) is not abelian")
    complement = complete_basis(D.basis, n)
    if len(complement) != l or 2 * l > n:
        raise UnsupportedCaseError("centre and derived algebra are not orthogonal complements")
    W = stack(complement, n)
    Q = inverse(Zb @ G @ W.T)
    dual = Q @ Zb
    pairing = W @ G @ W.T
    S_rows = W - Fraction(1, 2) * (pairing @ dual)

    a = n - 2 * l
    constraints = (D.basis @ G @ S_rows.T).T
    section = [c @ D.basis for c in nullspace(constraints)]
    if len(section) != a:
        raise UnsupportedCaseError(f"expected a {a}-dimensional a-section, got {len(section)}")
    T_rows = stack(section, n)

    F = np.vstack([dual, T_rows, S_rows]).T
    F = as_exact(F)
    C = _transport(g, F)
    z0, a0, l0 = 0, l, l + a
    gram_a = T_rows @ G @ T_rows.T
    rho = tuple(C[l0 + j, a0:a0 + a, a0:a0 + a].T.copy() for j in range(l))
    rep = Rep(l, a, gram_a, rho)
    alpha = Cochain(rep, 2, {(i, j): C[l0 + i, l0 + j, a0:a0 + a]
                             for i, j in increasing_tuples(l, 2)})
    gamma = ScalarForm(l, 3, {(i, j, k): C[l0 + i, l0 + j, z0 + k]
                              for i, j, k in increasing_tuples(l, 3)})
    data = TwofoldData(rep, alpha, gamma)
    failures = verify_isomorphism(build(data), g, F)
    if failures:
        raise UnsupportedCaseError(f"extracted data does not rebuild the algebra: {failures}")
    logger.info(f"Extracted twofold data with l={l}, a={a} from a {n}-dimensional algebra")
    return ExtractionResult(data, F)


def extraction_maps(result: ExtractionResult, l: int, a: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    (S, U) relating extracted data to the data a built target came from.

    Valid when the algebra passed to ``extract`` was build(original); then
    witness_isomorphism(extracted, original, S, U, tau) holds for some tau.
    """
    F = result.matrix
    l0 = l + a
    S = F[l0:l0 + l, l0:l0 + l].copy()
    U = F[l:l + a, l:l + a].copy()
    return S, U


@dataclass(frozen=True, eq=False)
class EquivWitness:
    tau: Cochain


def _matrix_of(columns: List[np.ndarray], rows: int) -> np.ndarray:
    if not columns:
        return zeros((rows, 0))
    return as_exact(np.column_stack(columns))


def extension_equivalent(first: TwofoldData, second: TwofoldData) -> Optional[EquivWitness]:
    """
    Find tau with (alpha_1, gamma_1) tau = (alpha_2, gamma_2), or None.

    First solves d tau_0 = alpha_2 - alpha_1, then corrects tau_0 by a cocycle
    zeta solving <alpha_1 ^ zeta> = gamma_2 - gamma_1 - <(alpha_1 + 1/2 d tau_0) ^ tau_0>.
    The cross terms vanish because <d tau_0 ^ zeta> = <tau_0 ^ d zeta> = 0.

    Raises:
        InputError: if the representations differ
    """
    if not first.rep.same_as(second.rep):
        raise InputError("extension equivalence needs a common representation")
    rep = first.rep
    l = rep.l
    basis = Cochain.basis(rep, 1)
    target = (second.alpha - first.alpha).flatten()
    if l >= 2:
        D = _matrix_of([coboundary(b).flatten() for b in basis], target.shape[0])
        solved = solve(D, target)
        if solved is None:
            logger.debug("alpha difference is not a coboundary")
            return None
        particular, kernel = solved
        tau0 = Cochain.from_flat(rep, 1, particular)
        cocycles = [Cochain.from_flat(rep, 1, v) for v in kernel]
    else:
        tau0 = Cochain.zero(rep, 1)
        cocycles = basis

    tau = tau0
    if l >= 3:
        d_tau0 = coboundary(tau0)
        residual = (second.gamma - first.gamma
                    - wedge_pairing(first.alpha + d_tau0.scale(Fraction(1, 2)), tau0)).flatten()
        M = _matrix_of([wedge_pairing(first.alpha, zeta).flatten() for zeta in cocycles],
                       residual.shape[0])
        solved = solve(M, residual)
        if solved is None:
            logger.debug("3-form difference is not reachable by cocycles")
            return None
        for coefficient, zeta in zip(solved[0], cocycles):
            if coefficient != 0:
                tau = tau + zeta.scale(coefficient)

    alpha, gamma = act(first.alpha, first.gamma, tau)
    if not (alpha == second.alpha and gamma == second.gamma):
        raise RuntimeError("equivalence witness does not replay to the target data")
    return EquivWitness(tau)


def psi_matrix(rep: Rep, tau: Cochain) -> np.ndarray:
    """
    Isometry build(data) -> build(act(data, tau)) in the (Z, A, L) basis.

    Blocks: [[I, tau* , -1/2 tau* tau], [0, I, -tau], [0, 0, I]] with tau* the
    adjoint of tau with respect to the inner product of a.
    """
    l, a = rep.l, rep.a
    T = tau.as_matrix()
    adjoint = T.T @ rep.gram
    psi = identity(2 * l + a)
    psi[0:l, l:l + a] = adjoint
    psi[0:l, l + a:] = -Fraction(1, 2) * (adjoint @ T)
    psi[l:l + a, l + a:] = -T
    return psi


def pullback(data: TwofoldData, S: np.ndarray, U: np.ndarray, rep: Rep) -> TwofoldData:
    """
    (U^-1 alpha(S., S.), gamma(S., S., S.)) on the representation ``rep``.

    Args:
        data: Twofold data on the target representation
        S: Matrix of a linear map of l (columns are images of basis vectors)
        U: Matrix of a linear isometry from rep's a onto data's a
        rep: Representation the pulled-back forms live on
    """
    S = as_exact(S)
    Uinv = inverse(U)
    l = rep.l
    columns = [S[:, j] for j in range(l)]
    alpha = Cochain(rep, 2, {(i, j): Uinv @ data.alpha.evaluate(columns[i], columns[j])
                             for i, j in increasing_tuples(l, 2)})
    gamma = ScalarForm(l, 3, {(i, j, k): data.gamma.evaluate(columns[i], columns[j], columns[k])
                              for i, j, k in increasing_tuples(l, 3)})
    return TwofoldData(rep, alpha, gamma)


@dataclass(frozen=True, eq=False)
class IsomorphismCheck:
    failures: List[str]
    matrix: Optional[np.ndarray] = None

    @property
    def ok(self) -> bool:
        return not self.failures


def witness_isomorphism(first: TwofoldData, second: TwofoldData, S: Any, U: Any,
                        tau: Cochain) -> IsomorphismCheck:
    """
    Check an explicit isomorphism candidate (S, U, tau) from build(first) to build(second).

    Conditions, reported by name when they fail:
        representation_intertwining: U is an isometry and U rho_1(L) U^-1 = rho_2(SL)
        cocycle_relation: U^-1 alpha_2(S., S.) - alpha_1 = d tau
        three_form_relation: gamma_2(S., S., S.) - gamma_1 = <(alpha_1 + 1/2 d tau) ^ tau>
        isomorphism: the composed matrix fails to be a metric Lie algebra isomorphism

    On success the matrix is blockdiag((S^-1)^T, U, S) composed with psi_matrix(tau).
    """
    l, a = first.l, first.a
    if second.l != l or second.a != a:
        return IsomorphismCheck(["dimension"])
    S = as_exact(S).reshape(l, l) if l else zeros((0, 0))
    U = as_exact(U).reshape(a, a) if a else zeros((0, 0))
    if rank(S) != l or rank(U) != a:
        return IsomorphismCheck(["invertibility"])

    rep1, rep2 = first.rep, second.rep
    intertwines = equal(U.T @ rep2.gram @ U, rep1.gram)
    for j in range(l):
        if intertwines and not equal(U @ rep1.rho[j], rep2.action(S[:, j]) @ U):
            intertwines = False
    if not intertwines:
        return IsomorphismCheck(["representation_intertwining"])

    if tau.degree != 1 or not tau.rep.same_as(rep1):
        raise InputError("tau must be a 1-cochain on the source representation")
    pulled = pullback(second, S, U, rep1)
    d_tau = coboundary(tau)
    failures = []
    if not pulled.alpha - first.alpha == d_tau:
        failures.append("cocycle_relation")
    expected = (wedge_pairing(first.alpha + d_tau.scale(Fraction(1, 2)), tau) if l >= 3
                else ScalarForm.zero(l, 3))
    if not pulled.gamma - first.gamma == expected:
        failures.append("three_form_relation")
    if failures:
        return IsomorphismCheck(failures)

    F = block_diagonal(inverse(S).T if l else zeros((0, 0)), U, S) @ psi_matrix(rep1, tau)
    problems = verify_isomorphism(build(first), build(second), F)
    if problems:
        logger.warning(f"Composed matrix fails as an isomorphism: {problems}")
        return IsomorphismCheck(["isomorphism"])
    return IsomorphismCheck([], F)


def algebra_signature(data: TwofoldData) -> Tuple[int, int, int]:
    """Signature of build(data): (p_a + l, q_a + l, 0)."""
    sig = signature(data.rep.gram)
    return sig.p + data.l, sig.q + data.l, sig.r
