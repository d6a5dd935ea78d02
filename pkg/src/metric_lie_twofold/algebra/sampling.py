"""
Seeded random generators for representations, cochains and twofold data.

All generators take a ``numpy.random.Generator`` so that a run is reproduced
from its seed. Entries are small rationals (denominator 1 or 2, absolute
value at most ``bound``); the generated 2-cocycles are invariant-valued
forms plus a coboundary, so every sample satisfies the cocycle condition and,
for dim l <= 3, the quadratic condition.
"""

import logging
from fractions import Fraction
from typing import Optional

import numpy as np

from .cochain import Cochain, Rep, ScalarForm, coboundary, increasing_tuples, invariants
from .linalg import zeros
from .twofold import TwofoldData, regularity


logger = logging.getLogger(__name__)

DEFAULT_BOUND = 3


def random_rational(rng: np.random.Generator, bound: int = DEFAULT_BOUND) -> Fraction:
    denominator = int(rng.choice([1, 2]))
    return Fraction(int(rng.integers(-bound * denominator, bound * denominator + 1)), denominator)


def random_vector(rng: np.random.Generator, dim: int, bound: int = DEFAULT_BOUND) -> np.ndarray:
    result = zeros(dim)
    for i in range(dim):
        result[i] = random_rational(rng, bound)
    return result


def random_weights(rng: np.random.Generator, m: int, l: int, bound: int = DEFAULT_BOUND,
                   nonzero: bool = True) -> np.ndarray:
    """Integer m x l weight matrix; with ``nonzero`` every row is a nonzero functional."""
    weights = zeros((m, l))
    for j in range(m):
        while True:
            row = [Fraction(int(x)) for x in rng.integers(-bound, bound + 1, size=l)]
            if not nonzero or l == 0 or any(row):
                break
        weights[j, :] = row
    return weights


def random_rep(rng: np.random.Generator, l: int, max_a: int = 8,
               lorentzian: bool = False) -> Rep:
    """
    Random commuting rotation representation, optionally with one boost pair.

    The represented space has at most three rotation planes, at most two
    trivially acted coordinates, and an extra (B_0, B_1) pair of signature
    (1, 1) when ``lorentzian``.
    """
    budget = max_a - (2 if lorentzian else 0)
    if budget < 0:
        raise ValueError(f"max_a={max_a} leaves no room for a boost pair")
    planes = int(rng.integers(0, min(3, budget // 2) + 1))
    fixed = int(rng.integers(0, min(2, budget - 2 * planes) + 1))
    weights = random_weights(rng, planes, l, nonzero=False)
    boost = [Fraction(int(x)) for x in rng.integers(-2, 3, size=l)] if lorentzian else None
    return Rep.from_weights(weights, fixed=fixed, boost=boost, l=l)


def random_cochain(rng: np.random.Generator, rep: Rep, degree: int, density: float = 0.7,
                   bound: int = DEFAULT_BOUND) -> Cochain:
    values = {index: random_vector(rng, rep.a, bound)
              for index in increasing_tuples(rep.l, degree) if rng.random() < density}
    return Cochain(rep, degree, values)


def random_form(rng: np.random.Generator, l: int, degree: int, density: float = 0.7,
                bound: int = DEFAULT_BOUND) -> ScalarForm:
    values = {index: random_rational(rng, bound)
              for index in increasing_tuples(l, degree) if rng.random() < density}
    return ScalarForm(l, degree, values)


def random_invariant_cochain(rng: np.random.Generator, rep: Rep, degree: int = 2) -> Cochain:
    """Cochain with values in the invariants a^l."""
    fixed = invariants(rep)
    values = {}
    for index in increasing_tuples(rep.l, degree):
        value = zeros(rep.a)
        for b in fixed:
            value = value + random_rational(rng) * b
        values[index] = value
    return Cochain(rep, degree, values)


def random_twofold(rng: np.random.Generator, max_l: int = 3, max_a: int = 8,
                   lorentzian: Optional[bool] = None) -> TwofoldData:
    """
    Random valid twofold data with 1 <= l <= max_l.

    alpha is an invariant-valued form plus the coboundary of a random
    1-cochain; gamma is arbitrary.
    """
    if not 1 <= max_l <= 3:
        raise ValueError("random twofold data is generated for 1 <= l <= 3")
    l = int(rng.integers(1, max_l + 1))
    if lorentzian is None:
        lorentzian = bool(rng.random() < 0.5)
    rep = random_rep(rng, l, max_a=max_a, lorentzian=lorentzian)
    tau = random_cochain(rng, rep, 1)
    alpha = random_invariant_cochain(rng, rep) + coboundary(tau)
    gamma = random_form(rng, l, 3)
    return TwofoldData(rep, alpha, gamma)


def random_regular_twofold(rng: np.random.Generator, attempts: int = 200, **kwargs: object
                           ) -> TwofoldData:
    """Rejection-sample random_twofold until the data is regular."""
    for attempt in range(attempts):
        data = random_twofold(rng, **kwargs)  # type: ignore[arg-type]
        if regularity(data).regular:
            logger.debug(f"Regular sample found after {attempt + 1} attempts")
            return data
    raise RuntimeError(f"no regular sample in {attempts} attempts")
