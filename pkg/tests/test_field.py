import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from agss.field import (
    DivisionByZeroError,
    FieldMismatchError,
    Matrix,
    NoSolutionError,
    PrimeField,
    in_row_space,
    is_prime,
    kernel_array,
    mat_kernel,
    mat_mul_vec,
    mat_rank,
    mat_solve,
    rank_array,
    rref_array,
    solve_array,
)

F5 = PrimeField(5)
F13 = PrimeField(13)


def test_primality():
    assert is_prime(2) and is_prime(3) and is_prime(101) and is_prime(2**31 - 1)
    assert not is_prime(1) and not is_prime(0) and not is_prime(-7)
    assert not is_prime(561) and not is_prime(2**31 - 2)  # Carmichael, even


def test_field_validation():
    with pytest.raises(ValueError):
        PrimeField(4)
    with pytest.raises(ValueError):
        PrimeField(9)
    with pytest.raises(ValueError):
        PrimeField(3)  # p >= 5 required
    with pytest.raises(ValueError):
        PrimeField(2**31 + 11)


def test_arithmetic_examples():
    assert (F5.element(2) + F5.element(3)).value == 0
    # inverse of 2 mod 5, checked against exhaustive search
    inv = F5.element(2).inverse()
    assert inv.value == next(v for v in range(1, 5) if 2 * v % 5 == 1) == 3
    assert (F13.element(4) * F13.element(4)).value == 16 % 13 == 3
    assert (F5.element(1) - F5.element(3)).value == 3
    assert (-F5.element(2)).value == 3
    assert (F5.element(2) ** -1).value == 3
    assert (F5.element(3) / F5.element(2)).value == 4  # 3 * 3


def test_int_operands_lift_into_the_field():
    a = F5.element(4)
    assert (a + 3).value == 2
    assert (2 * a).value == 3
    assert (1 / a).value == 4  # 4 * 4 = 16 = 1


def test_errors():
    with pytest.raises(DivisionByZeroError):
        F5.zero.inverse()
    with pytest.raises(DivisionByZeroError):
        F5.element(3) / F5.zero
    with pytest.raises(FieldMismatchError):
        F5.element(1) + F13.element(1)


@given(st.integers(min_value=-50, max_value=50), st.integers(min_value=-50, max_value=50))
def test_field_ops_match_integer_arithmetic(a, b):
    x, y = F13.element(a), F13.element(b)
    assert (x + y).value == (a + b) % 13
    assert (x - y).value == (a - b) % 13
    assert (x * y).value == (a * b) % 13
    if y.value:
        assert ((x / y) * y).value == x.value


def test_kernel_examples():
    ident = Matrix.identity(F5, 3)
    assert mat_kernel(ident) == []

    zero = Matrix.zeros(F5, 2, 3)
    basis = mat_kernel(zero)
    assert len(basis) == 3

    m = Matrix.from_rows(F5, [[1, 2], [2, 4]])
    basis = mat_kernel(m)
    assert len(basis) == 1
    # exhaustive oracle over all 25 vectors of F_5^2
    expected = [
        (x, y)
        for x in range(5)
        for y in range(5)
        if (x + 2 * y) % 5 == 0 and (2 * x + 4 * y) % 5 == 0 and (x, y) != (0, 0)
    ]
    assert tuple(basis[0]) in expected
    assert tuple(basis[0]) == (3, 1)


def test_solve_examples():
    ident = Matrix.identity(F5, 2)
    assert list(mat_solve(ident, [3, 4])) == [3, 4]

    inconsistent = Matrix.from_rows(F5, [[1, 1], [1, 1]])
    with pytest.raises(NoSolutionError):
        mat_solve(inconsistent, [0, 1])

    m = Matrix.from_rows(F5, [[1, 1], [0, 1]])
    x = mat_solve(m, [0, 1])
    assert list(x) == [4, 1]
    assert list(mat_mul_vec(m, x)) == [0, 1]


def _random_matrix(rng, p, rows, cols):
    return rng.integers(0, p, size=(rows, cols))


def test_rank_nullity_and_kernel_on_random_matrices():
    rng = np.random.default_rng(7)
    for _ in range(60):
        p = int(rng.choice([5, 13, 101]))
        rows, cols = int(rng.integers(1, 8)), int(rng.integers(1, 8))
        a = _random_matrix(rng, p, rows, cols)
        r = rank_array(a, p)
        kern = kernel_array(a, p)
        assert r + len(kern) == cols
        for v in kern:
            assert not ((a @ v) % p).any()


def test_solve_roundtrip_on_random_systems():
    rng = np.random.default_rng(11)
    for _ in range(60):
        p = int(rng.choice([5, 13, 101]))
        rows, cols = int(rng.integers(1, 8)), int(rng.integers(1, 8))
        a = _random_matrix(rng, p, rows, cols)
        x_true = rng.integers(0, p, size=cols)
        b = (a @ x_true) % p
        x = solve_array(a, b, p)
        assert np.array_equal((a @ x) % p, b)


def test_in_row_space_matches_rank_test():
    rng = np.random.default_rng(13)
    for _ in range(80):
        p = int(rng.choice([5, 13]))
        rows, cols = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        a = _random_matrix(rng, p, rows, cols)
        v = rng.integers(0, p, size=cols)
        stacked = np.vstack([a, v[None, :]])
        assert in_row_space(a, v, p) == (rank_array(stacked, p) == rank_array(a, p))


def test_rref_is_canonical_and_deterministic():
    a = np.array([[2, 4, 1], [1, 2, 3], [3, 6, 4]])
    r1, piv1 = rref_array(a, 5)
    r2, piv2 = rref_array(a, 5)
    assert np.array_equal(r1, r2) and piv1 == piv2
    # pivots are 1 and pivot columns are unit vectors
    for i, c in enumerate(piv1):
        assert r1[i, c] == 1
        col = r1[:, c].copy()
        col[i] = 0
        assert not col.any()


def test_matrix_entries_are_read_only():
    m = Matrix.from_rows(F5, [[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        m.data[0, 0] = 3
    assert m.entry(1, 0).value == 3
    assert mat_rank(m) == 2
