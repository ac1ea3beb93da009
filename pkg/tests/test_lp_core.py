from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ivbounds.errors import DimensionTooLarge, Infeasible, ZeroVector
from ivbounds.lp_core import (
    active_set,
    build_constraint_matrix,
    build_cost_vector,
    certify_extreme_ray,
    certify_vertex,
    in_kernel,
    kernel_basis,
    matrix_rank,
    nullspace,
    rank,
)
from ivbounds.model import OutcomeSupport, random_full_data_law

# n = 2, ell = 2; rows (d, i, j) with d outermost and d_0 the most significant bit
E1_MATRIX = [
    [1, 0, 0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, 0, 1, 0],
    [1, 0, 0, 0, 0, 0, 0, 1],
    [0, 1, 0, 0, 0, 0, 1, 0],
    [0, 1, 0, 0, 0, 0, 0, 1],
    [0, 0, 1, 0, 1, 0, 0, 0],
    [0, 0, 0, 1, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, 0, 1],
    [0, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, 0, 1],
]


def test_binary_matrix_matches_worked_example():
    m = build_constraint_matrix(2, 2)
    assert m.shape == (16, 8)
    assert m.dense() == E1_MATRIX


def test_cost_vector():
    c = build_cost_vector(OutcomeSupport.range(2), 2).values
    assert c[:4] == (0, 1, -1, 0)
    assert len(c) == 16


@pytest.mark.parametrize("n", range(2, 9))
def test_rank_binary(n):
    assert matrix_rank(n, 2) == 4 * n - 1


def test_kernel_binary():
    m = build_constraint_matrix(3, 2)
    (k,) = kernel_basis(m)
    # +1 on arm 0, -1 on arm 1
    assert k.values == (1,) * 6 + (-1,) * 6
    assert in_kernel(m, k.values)


@pytest.mark.parametrize("n,ell", [(2, 3), (3, 3), (3, 4)])
def test_kernel_general(n, ell):
    m = build_constraint_matrix(n, ell)
    basis = kernel_basis(m)
    assert len(basis) == 2 * n * ell - matrix_rank(n, ell)
    assert all(in_kernel(m, b.values) for b in basis)
    # arm shifts are in the kernel
    shift = [0] * (2 * n * ell)
    for k in range(2 * n):
        shift[k] = 1
        shift[(ell - 1) * 2 * n + k] = -1
    assert in_kernel(m, shift)


def test_rank_small_cases():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[0, 0], [0, 0]]) == 0
    assert rank([[Fraction(1, 2), 1], [1, Fraction(1, 3)]]) == 2


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_nullity(rows):
    r = rank(rows)
    basis = nullspace(rows, 4)
    assert r + len(basis) == 4
    for b in basis:
        assert all(sum(a * x for a, x in zip(row, b)) == 0 for row in rows)


def test_size_cap():
    with pytest.raises(DimensionTooLarge):
        build_constraint_matrix(3, 2, cap=10)


def test_active_set_and_certification():
    m = build_constraint_matrix(2, 2)
    c = build_cost_vector(OutcomeSupport.range(2), 2)
    v = (0, -1, -1, 1, 0, -1, 0, -1)
    assert len(active_set(v, m, c)) >= 7
    assert certify_vertex(v, m, c)
    # feasible, but only the rows with c = -1 are tight
    assert not certify_vertex((-1, -1, -1, -1, 0, 0, 0, 0), m, c)
    with pytest.raises(Infeasible):
        active_set((5,) * 8, m, c)
    with pytest.raises(ZeroVector):
        certify_extreme_ray((0,) * 8, m)
    assert certify_extreme_ray((0, 0, 1, 0, -1, -1, -1, 0), m)


@given(st.integers(2, 3), st.integers(0, 10**6))
def test_transpose_apply_is_marginalization(n, seed):
    from ivbounds.model import marginalize

    q = random_full_data_law(n, 2, seed)
    m = build_constraint_matrix(n, 2)
    assert tuple(m.transpose_apply(q.q)) == marginalize(q).probs
