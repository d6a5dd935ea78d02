from fractions import Fraction

import numpy as np
import pytest

from metric_lie_twofold.algebra.cochain import Rep
from metric_lie_twofold.algebra.linalg import equal, identity, matrix
from metric_lie_twofold.errors import InputError, OrbitSearchExceeded, UnsupportedCaseError
from metric_lie_twofold.processors.families import random_admissible_weights, sample_stabilizer
from metric_lie_twofold.processors.orbits import (
    E_OMEGA, E_VOLUME, GRAM, GRASSMANNIAN, LORENTZ, PART_BUILDERS, SORTED, SignedPermutation,
    canonicalize, fix_signs, random_signed_permutation,
)


def test_compose_and_inverse(rng):
    W = matrix([[1, 2], [3, 4], [5, 6]])
    for _ in range(5):
        g = random_signed_permutation(rng, 3)
        h = random_signed_permutation(rng, 3)
        assert equal(g.compose(h).apply(W), g.apply(h.apply(W)))
        assert g.compose(g.inverse()) == SignedPermutation.identity(3)
        assert equal(g.inverse().apply(g.apply(W)), W)


def test_signed_permutation_validation():
    with pytest.raises(InputError):
        SignedPermutation((0, 0), (1, 1))
    with pytest.raises(InputError):
        SignedPermutation((1, 0), (1, 2))
    with pytest.raises(InputError):
        SignedPermutation.identity(2).apply(matrix([[1]]))


def test_plane_matrix_intertwines(rng):
    W = matrix([[1], [2], [3]])
    g = random_signed_permutation(rng, 3)
    first, second = Rep.from_weights(W), Rep.from_weights(g.apply(W))
    U = g.plane_matrix()
    assert equal(U.T @ U, identity(6))
    assert equal(U @ first.rho[0], second.rho[0] @ U)


def test_fix_signs_makes_free_entries_positive():
    values, bits = fix_signs([(Fraction(-2), 0b01), (Fraction(3), 0b10), (Fraction(1), 0b11)], 2)
    assert values == (Fraction(2), Fraction(3), Fraction(-1))
    assert bits == [1, 0]


def test_lorentz_normalizes_by_smallest_weight():
    canonical = canonicalize(LORENTZ, [[-4], [2]], bound=8)
    assert [str(x) for x in canonical.parts[0][1]] == ["1", "2"]
    assert canonical.normalization == 2
    assert equal(canonical.certificate.apply([[-4], [2]]), matrix([[2], [4]]))


def test_sorted_weights_keep_scale():
    canonical = canonicalize(SORTED, [[3], [-1]], bound=8)
    assert [str(x) for x in canonical.parts[0][1]] == ["1", "3"]
    assert canonical.normalization is None


def test_gram_of_single_weight():
    canonical = canonicalize(GRAM, [[1, 2, 3]], bound=8)
    assert canonical.parts[0][0] == "gram"
    assert canonical.parts[0][1].tolist() == [[14]]


def test_single_column_tags_reject_wider_weights():
    with pytest.raises(InputError):
        canonicalize(LORENTZ, [[1, 2]], bound=8)
    with pytest.raises(InputError):
        canonicalize("UNKNOWN", [[1, 2]], bound=8)
    with pytest.raises(InputError):
        canonicalize(E_VOLUME, [[1, 2]], bound=8)


def test_orbit_bound_is_enforced():
    with pytest.raises(OrbitSearchExceeded) as info:
        canonicalize(GRASSMANNIAN, [[1, 0], [0, 1], [1, 1]], bound=2)
    assert isinstance(info.value, UnsupportedCaseError)
    assert "orbit search exceeded" in str(info.value)


@pytest.mark.parametrize("tag, row, m", [
    (GRASSMANNIAN, "l2-k0", 3),
    (E_OMEGA, "l2-k1", 3),
    (E_VOLUME, "l3-k0-volume", 3),
    (GRAM, "l3-k3", 3),
])
def test_certificate_realizes_canonical_form(tag, row, m, rng):
    W = random_admissible_weights(rng, row, m)
    canonical = canonicalize(tag, W, bound=8)
    moved = canonical.certificate.apply(W)
    entries = [value for _, _, block in PART_BUILDERS[tag](moved) for value, _ in block]
    flat = [x for _, part in canonical.parts for x in part.flat]
    assert entries == flat


@pytest.mark.parametrize("tag, row, m", [
    (GRASSMANNIAN, "l2-k0", 3),
    (E_OMEGA, "l2-k1", 3),
    (E_VOLUME, "l3-k0-volume", 3),
    ("E_F_OMEGA", "l3-k1", 3),
    ("B_V_MOD_SCALE", "l3-k2", 3),
    (GRAM, "l3-k3", 3),
    (LORENTZ, "l1-k0", 4),
    (SORTED, "dA", 4),
])
def test_invariant_under_signed_permutations_and_stabilizer(tag, row, m, rng):
    W = random_admissible_weights(rng, row, m)
    reference = canonicalize(tag, W, bound=8).key
    for _ in range(3):
        g = random_signed_permutation(rng, m)
        S = sample_stabilizer(row, rng)
        moved = g.apply(np.asarray(W @ S, dtype=object))
        assert canonicalize(tag, moved, bound=8).key == reference
