from fractions import Fraction

import pytest

from metric_lie_twofold.algebra.cochain import (
    Cochain, Rep, ScalarForm, act, check_cocycle, check_ek, coboundary, cup_selfcheck,
    differential, gamma_orbit_reduce, invariants, nil_split, normalize_index, wedge_inner,
    wedge_pairing,
)
from metric_lie_twofold.algebra.linalg import equal, identity, matrix, vector, zeros
from metric_lie_twofold.algebra.sampling import random_cochain, random_form, random_rep
from metric_lie_twofold.errors import InputError, UnsupportedCaseError


def test_normalize_index():
    assert normalize_index((2, 0, 1)) == (1, (0, 1, 2))
    assert normalize_index((1, 0)) == (-1, (0, 1))
    assert normalize_index((1, 1)) == (0, ())


def test_from_weights_layout():
    rep = Rep.from_weights([[2, 0], [0, 3]])
    assert (rep.l, rep.a) == (2, 4)
    assert rep.rho[0][2, 0] == 2 and rep.rho[0][0, 2] == -2
    assert rep.rho[1][3, 1] == 3 and rep.rho[1][1, 3] == -3
    assert equal(rep.action([1, 1]), rep.rho[0] + rep.rho[1])


def test_rep_rejects_non_skew_maps():
    with pytest.raises(InputError, match="skew"):
        Rep(1, 2, identity(2), (matrix([[1, 0], [0, 0]]),))


def test_rep_rejects_non_commuting_maps():
    first = zeros((3, 3))
    first[1, 0], first[0, 1] = 1, -1
    second = zeros((3, 3))
    second[2, 1], second[1, 2] = 1, -1
    with pytest.raises(InputError, match="commute"):
        Rep(2, 3, identity(3), (first, second))


def test_rep_rejects_degenerate_inner_product():
    with pytest.raises(InputError):
        Rep.trivial(1, matrix([[1, 0], [0, 0]]))


def test_cochain_storage_is_alternating():
    rep = Rep.trivial(3, identity(2))
    v = vector([1, 2])
    c = Cochain(rep, 2, {(1, 0): v})
    assert equal(c.value((0, 1)), -v)
    assert equal(c.value((1, 0)), v)
    assert equal(c.value((0, 2)), zeros(2))
    with pytest.raises(InputError):
        Cochain(rep, 2, {(1, 1): v})
    with pytest.raises(InputError):
        Cochain(rep, 2, {(0, 1): v, (1, 0): v})


def test_evaluate_is_multilinear():
    form = ScalarForm(3, 2, {(0, 1): 1})
    assert form.evaluate([1, 0, 0], [0, 1, 0]) == 1
    assert form.evaluate([0, 1, 0], [1, 0, 0]) == -1
    assert form.evaluate([1, 1, 0], [1, 2, 0]) == 1
    assert form.evaluate([0, 0, 1], [1, 2, 0]) == 0


def test_differential_squares_to_zero(rng):
    for _ in range(5):
        rep = random_rep(rng, 4, max_a=6, lorentzian=bool(rng.random() < 0.5))
        for degree in (0, 1, 2):
            c = random_cochain(rng, rep, degree)
            assert coboundary(coboundary(c)).is_zero()


def test_differential_refuses_top_degree(oscillator):
    tau = Cochain(oscillator.rep, 1, {(0,): [1, 0]})
    with pytest.raises(InputError, match="top degree"):
        differential(tau)


def test_differential_of_one_cochain():
    rep = Rep.from_weights([[1, 0]])
    tau = Cochain(rep, 1, {(0,): [1, 0]})
    d_tau = differential(tau)
    # d tau(L1, L2) = rho(L1) tau(L2) - rho(L2) tau(L1) = -rho(L2) tau(L1) = 0
    assert d_tau.is_zero()
    tau = Cochain(rep, 1, {(1,): [1, 0]})
    assert equal(differential(tau).value((0, 1)), vector([0, 1]))


def test_quadratic_condition_agrees_with_cup_square(rng):
    rep = Rep.trivial(4, identity(2))
    for _ in range(10):
        alpha = random_cochain(rng, rep, 2, density=0.4, bound=2)
        assert check_ek(alpha) == cup_selfcheck(alpha)


def test_quadratic_condition_examples():
    rep = Rep.trivial(4, identity(1))
    single = Cochain(rep, 2, {(0, 1): [1]})
    assert check_ek(single) and cup_selfcheck(single)
    crossing = Cochain(rep, 2, {(0, 1): [1], (2, 3): [1]})
    assert not check_ek(crossing)
    assert not cup_selfcheck(crossing)


def test_wedge_inner_guards_degree():
    rep = Rep.trivial(2, identity(1))
    alpha = Cochain(rep, 2, {(0, 1): [1]})
    tau = Cochain(rep, 1, {(0,): [1]})
    with pytest.raises(InputError, match="overflow"):
        wedge_inner(alpha, tau)


def test_wedge_pairing_of_two_form_and_one_form():
    rep = Rep.trivial(3, identity(1))
    alpha = Cochain(rep, 2, {(0, 1): [1]})
    tau = Cochain(rep, 1, {(2,): [1]})
    assert wedge_inner(alpha, tau).value((0, 1, 2)) == 1
    assert wedge_inner(tau, alpha).value((0, 1, 2)) == 1


def test_action_composes(rng):
    for _ in range(4):
        rep = random_rep(rng, 3, max_a=6)
        alpha = coboundary(random_cochain(rng, rep, 1))
        gamma = random_form(rng, 3, 3)
        tau1 = random_cochain(rng, rep, 1)
        tau2 = random_cochain(rng, rep, 1)
        stepwise = act(*act(alpha, gamma, tau1), tau2)
        combined = act(alpha, gamma, tau1 + tau2)
        assert stepwise[0] == combined[0]
        assert stepwise[1] == combined[1]
        unchanged = act(alpha, gamma, Cochain.zero(rep, 1))
        assert unchanged[0] == alpha and unchanged[1] == gamma


def test_action_by_cocycle_only_moves_gamma():
    rep = Rep.trivial(3, identity(1))
    alpha = Cochain(rep, 2, {(0, 1): [1]})
    gamma = ScalarForm.zero(3, 3)
    tau = Cochain(rep, 1, {(2,): ["1/2"]})
    new_alpha, new_gamma = act(alpha, gamma, tau)
    assert new_alpha == alpha
    assert new_gamma.value((0, 1, 2)) == Fraction(1, 2)
    assert new_gamma == wedge_pairing(alpha, tau)


def test_act_checks_degrees():
    rep = Rep.trivial(3, identity(1))
    with pytest.raises(InputError):
        act(Cochain.zero(rep, 1), ScalarForm.zero(3, 3), Cochain.zero(rep, 1))


def test_invariants_and_split():
    rep = Rep.from_weights([[1]], fixed=2)
    fixed = invariants(rep)
    assert len(fixed) == 2
    assert all(v[0] == 0 and v[1] == 0 for v in fixed)
    kept, complement = nil_split(rep)
    assert len(kept) == 2 and len(complement) == 2
    for u in kept:
        for w in complement:
            assert rep.inner(u, w) == 0


def test_nil_split_needs_definite_inner_product():
    rep = Rep.from_weights([[1]], boost=[1])
    assert rep.gram[2, 2] == -1
    with pytest.raises(UnsupportedCaseError):
        nil_split(rep)


def test_cocycle_check():
    rep = Rep.from_weights([[1, 0]])
    assert check_cocycle(Cochain.zero(rep, 1))
    assert not check_cocycle(Cochain(rep, 1, {(1,): [1, 0]}))
    assert check_cocycle(Cochain(rep, 2, {(0, 1): [1, 0]}))


def test_gamma_reduction_modulo_alpha():
    rep = Rep.trivial(3, identity(1))
    volume = ScalarForm(3, 3, {(0, 1, 2): 1})
    alpha = Cochain(rep, 2, {(0, 1): [1]})
    assert gamma_orbit_reduce(alpha, volume).is_zero()
    assert gamma_orbit_reduce(Cochain.zero(rep, 2), volume) == volume


def test_gamma_reduction_needs_invariant_alpha():
    rep = Rep.from_weights([[1, 0, 0]])
    alpha = Cochain(rep, 2, {(1, 2): [1, 0]})
    with pytest.raises(InputError, match="invariant"):
        gamma_orbit_reduce(alpha, ScalarForm.zero(3, 3))


def test_flat_coordinates_round_trip():
    rep = Rep.from_weights([[1, 2]])
    tau = Cochain(rep, 1, {(0,): [1, 0], (1,): ["1/2", 3]})
    assert Cochain.from_flat(rep, 1, tau.flatten()) == tau
    assert Cochain.from_matrix(rep, tau.as_matrix()) == tau
    assert len(Cochain.basis(rep, 2)) == 2
