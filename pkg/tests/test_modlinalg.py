import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from snc_ramify.modlinalg import (
    DimensionMismatchError,
    SmithSolver,
    det,
    diagonal,
    matmul,
    smith_normal_form,
    solve_mod,
)

from conftest import brute_force_solve


def check_snf(A):
    m, n = len(A), len(A[0])
    U, D, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    for i in range(m):
        for j in range(n):
            if i != j:
                assert D[i][j] == 0
    d = diagonal(D)
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (b == 0) if a == 0 else b % a == 0
    return d


def test_identity():
    assert check_snf([[1, 0], [0, 1]]) == [1, 1]


def test_two_by_two():
    # d1 = gcd of entries = 2, d1 * d2 = |det| = 8
    A = [[2, 4], [6, 8]]
    assert abs(det(A)) == 8
    assert check_snf(A) == [2, 4]


def test_remark_three_matrix():
    A = [[1, 3, 3], [1, 2, 1], [1, 1, 2]]
    minors2 = [
        det([[A[i][k] for k in cols] for i in rows])
        for rows in itertools.combinations(range(3), 2)
        for cols in itertools.combinations(range(3), 2)
    ]
    from math import gcd
    from functools import reduce

    assert reduce(gcd, minors2) == 1 and abs(det(A)) == 3
    assert check_snf(A) == [1, 1, 3]


def test_zero_and_rectangular():
    assert check_snf([[0, 0, 0], [0, 0, 0]]) == [0, 0]
    assert check_snf([[0, 2, 4]]) == [2]
    assert check_snf([[3], [6], [9]]) == [3]


def test_det_matches_sympy():
    rng = random.Random(1)
    for _ in range(50):
        k = rng.randint(1, 4)
        A = [[rng.randint(-5, 5) for _ in range(k)] for _ in range(k)]
        assert det(A) == sympy.Matrix(A).det()


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda m: st.integers(1, 4).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )
)
def test_snf_identities_and_sympy(A):
    d = check_snf(A)
    expected = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
    assert d == [abs(expected[k, k]) for k in range(min(len(A), len(A[0])))]


def test_solve_examples():
    assert solve_mod([[1]], [5], 7) == [5]
    assert brute_force_solve([[2]], [1], 6, 1) is None
    assert solve_mod([[2]], [1], 6) is None
    assert brute_force_solve([[2]], [1], 5, 1) == (3,)
    assert solve_mod([[2]], [1], 5) == [3]


def test_solve_errors():
    with pytest.raises(DimensionMismatchError):
        solve_mod([[1, 2]], [1, 2], 5)
    with pytest.raises(ValueError):
        solve_mod([[1]], [1], 1)


@settings(max_examples=300, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda cols: st.tuples(
            st.just(cols),
            st.integers(1, 3).flatmap(
                lambda rows: st.lists(
                    st.lists(st.integers(-3, 3), min_size=cols, max_size=cols),
                    min_size=rows,
                    max_size=rows,
                )
            ),
        )
    ),
    st.integers(2, 8),
    st.data(),
)
def test_solve_agrees_with_brute_force(shape_and_A, r, data):
    cols, A = shape_and_A
    b = data.draw(st.lists(st.integers(0, r - 1), min_size=len(A), max_size=len(A)))
    x = solve_mod(A, b, r)
    oracle = brute_force_solve(A, b, r, cols)
    assert (x is None) == (oracle is None)
    if x is not None:
        assert all(0 <= xi < r for xi in x)
        assert all((sum(a * xi for a, xi in zip(row, x)) - bi) % r == 0 for row, bi in zip(A, b))


def test_smith_solver_reuse():
    A = [[1, 3, 3], [1, 2, 1], [1, 1, 2]]
    solver = SmithSolver(A)
    for r in range(2, 13):
        for k in range(3):
            b = [int(i == k) for i in range(3)]
            assert (solver.solve(b, r) is None) == (brute_force_solve(A, b, r, 3) is None)
