import numpy as np
import pytest

from metric_lie_twofold.algebra.cochain import check_cocycle, invariants
from metric_lie_twofold.algebra.linalg import equal, signature
from metric_lie_twofold.algebra.sampling import (
    random_invariant_cochain, random_rational, random_rep, random_regular_twofold,
    random_twofold, random_weights,
)
from metric_lie_twofold.algebra.twofold import regularity


def test_rationals_are_bounded(rng):
    for _ in range(50):
        x = random_rational(rng, bound=2)
        assert abs(x) <= 2
        assert x.denominator in (1, 2)


def test_weights_have_nonzero_rows(rng):
    W = random_weights(rng, 5, 3)
    assert W.shape == (5, 3)
    assert all(any(x != 0 for x in row) for row in W)


def test_lorentzian_rep_has_one_negative_square(rng):
    rep = random_rep(rng, 2, max_a=6, lorentzian=True)
    sig = signature(rep.gram)
    assert (sig.p, sig.r) == (1, 0)
    assert rep.a <= 6


def test_rep_needs_room_for_boost(rng):
    with pytest.raises(ValueError):
        random_rep(rng, 1, max_a=1, lorentzian=True)


def test_invariant_cochain_takes_invariant_values(rng):
    rep = random_rep(rng, 3)
    alpha = random_invariant_cochain(rng, rep)
    for _, value in alpha.items():
        assert all(equal(r @ value, np.zeros(rep.a, dtype=int)) for r in rep.rho)
    assert len(invariants(rep)) <= rep.a


def test_random_twofold_is_valid(rng):
    for _ in range(10):
        data = random_twofold(rng)
        assert 1 <= data.l <= 3
        assert check_cocycle(data.alpha)
        assert data.violations() == []


def test_same_seed_same_sample():
    first = random_twofold(np.random.default_rng(7))
    second = random_twofold(np.random.default_rng(7))
    assert first.same_as(second)


def test_random_twofold_limits_rank(rng):
    with pytest.raises(ValueError):
        random_twofold(rng, max_l=4)


def test_regular_sampler(rng):
    data = random_regular_twofold(rng, lorentzian=False)
    assert regularity(data).regular
    assert signature(data.rep.gram).p == 0
