from fractions import Fraction

import pytest

from metric_lie_twofold.algebra.linalg import (
    complete_basis, determinant, equal, identity, integral_form, inverse, matrix, nullspace,
    rank, rref, rref_with_pivots, signature, solve, stack, to_scalar, vector,
)
from metric_lie_twofold.errors import InputError


def test_to_scalar_accepts_exact_values():
    assert to_scalar("-2/5") == Fraction(-2, 5)
    assert to_scalar(3) == Fraction(3)
    assert to_scalar(" 7 ") == Fraction(7)


@pytest.mark.parametrize("value", [0.5, True, "abc", "1/0", None])
def test_to_scalar_rejects_inexact_or_malformed(value):
    with pytest.raises(InputError):
        to_scalar(value)


def test_rref_and_pivots():
    reduced, pivots = rref_with_pivots(matrix([[2, 4, 2], [1, 3, 0]]))
    assert pivots == (0, 1)
    assert equal(reduced, matrix([[1, 0, 3], [0, 1, -1]]))
    assert equal(rref(matrix([[0, 0], [0, 3]])), matrix([[0, 1], [0, 0]]))


def test_rank_counts_independent_rows():
    assert rank(matrix([[1, 2], [2, 4]])) == 1
    assert rank(identity(3)) == 3
    assert rank(matrix([], cols=3)) == 0


def test_nullspace_vectors_are_annihilated():
    M = matrix([[1, 2, 3]])
    basis = nullspace(M)
    assert len(basis) == 2
    for v in basis:
        assert (M @ v)[0] == 0
    assert rank(stack(basis, 3)) == 2


def test_solve_returns_particular_solution_and_kernel():
    solved = solve(matrix([[1, 1], [1, -1]]), vector([3, 1]))
    assert solved is not None
    x, kernel = solved
    assert equal(x, vector([2, 1]))
    assert kernel == []


def test_solve_detects_inconsistent_system():
    assert solve(matrix([[1, 1], [2, 2]]), vector([1, 3])) is None


def test_solve_rejects_dimension_mismatch():
    with pytest.raises(InputError):
        solve(identity(2), vector([1, 2, 3]))


def test_inverse_and_determinant():
    M = matrix([[2, 1], [1, 1]])
    assert equal(inverse(M), matrix([[1, -1], [-1, 2]]))
    assert determinant(matrix([[1, 2], [3, 4]])) == -2
    assert determinant(matrix([["1/2", 0], [0, 4]])) == 2
    assert determinant(identity(0)) == 1


def test_inverse_of_singular_matrix_fails():
    with pytest.raises(InputError):
        inverse(matrix([[1, 2], [2, 4]]))


def test_signature_by_congruence():
    assert tuple(signature(matrix([[-1, 0, 0], [0, 1, 0], [0, 0, 1]]))) == (1, 2, 0)
    assert tuple(signature(matrix([[0, 1], [1, 0]]))) == (1, 1, 0)
    assert tuple(signature(matrix([[0, 0], [0, 1]]))) == (0, 1, 1)
    assert tuple(signature(matrix([[8, 0, 0], [0, 0, 4], [0, 4, 0]]))) == (1, 2, 0)


def test_signature_requires_symmetric_matrix():
    with pytest.raises(InputError):
        signature(matrix([[0, 1], [0, 0]]))


def test_complete_basis_extends_to_full_rank():
    rows = matrix([[1, 1, 0]])
    added = complete_basis(rows, 3)
    assert len(added) == 2
    assert rank(stack([rows[0]] + added, 3)) == 3


def test_integral_form_clears_denominators():
    ints, denominator = integral_form(vector(["1/2", "1/3"]))
    assert denominator == 6
    assert list(ints) == [3, 2]


def test_matrix_rejects_ragged_rows():
    with pytest.raises(InputError):
        matrix([[1, 2], [3]])
