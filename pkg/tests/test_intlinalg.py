"""Exact integer linear algebra."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdivgen.intlinalg import (
    det,
    frac_rank,
    hnf,
    hnf_basis,
    identity,
    in_row_span,
    invert_unimodular,
    kernel_lattice,
    lattice_member,
    mat_mul,
    primitive,
    rank,
    rref,
    smith_normal_form,
    solve_in_lattice,
)

small_int = st.integers(min_value=-9, max_value=9)


def small_matrix(rows, cols):
    return st.lists(
        st.lists(small_int, min_size=cols, max_size=cols),
        min_size=rows,
        max_size=rows,
    )


@given(st.one_of(small_matrix(2, 3), small_matrix(3, 3), small_matrix(4, 2)))
@settings(max_examples=120, deadline=None)
def test_hnf_is_unimodular_transform(a):
    h, u = hnf(a)
    assert mat_mul(u, a) == tuple(tuple(r) for r in h)
    assert abs(det(u)) == 1


@given(small_matrix(3, 3))
@settings(max_examples=120, deadline=None)
def test_hnf_shape(a):
    h, _ = hnf(a)
    # pivot columns strictly increase and pivots are positive
    last = -1
    for row in h:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            continue
        assert nz[0] > last
        assert row[nz[0]] > 0
        last = nz[0]


@given(small_matrix(2, 4))
@settings(max_examples=80, deadline=None)
def test_kernel_annihilates_and_is_saturated(a):
    ker = kernel_lattice(a)
    for k in ker:
        assert all(sum(r[j] * k[j] for j in range(4)) == 0 for r in a)
    assert len(ker) == 4 - rank(list(zip(*a)))
    # saturation: doubling a kernel vector never creates a finer lattice
    for k in ker:
        half = tuple(x // 2 for x in k)
        if all(x % 2 == 0 for x in k) and any(half):
            assert lattice_member(half, hnf_basis(ker))


def test_det_known_values():
    assert det([[2, 1], [1, 2]]) == 3
    assert det([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3
    assert det(identity(4)) == 1
    assert det([[0, 1], [1, 0]]) == -1


@given(small_matrix(3, 3), small_matrix(3, 3))
@settings(max_examples=60, deadline=None)
def test_det_is_multiplicative(a, b):
    assert det(mat_mul(a, b)) == det(a) * det(b)


@given(small_matrix(3, 4))
@settings(max_examples=60, deadline=None)
def test_smith_normal_form(a):
    s, u, v = smith_normal_form(a)
    assert mat_mul(mat_mul(u, a), v) == tuple(tuple(r) for r in s)
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = [s[i][i] for i in range(min(3, 4))]
    for i in range(len(diag) - 1):
        if diag[i + 1]:
            assert diag[i] != 0 and diag[i + 1] % diag[i] == 0
    for i in range(3):
        for j in range(4):
            if i != j:
                assert s[i][j] == 0


def test_primitive():
    assert primitive((2, 4, 6)) == (1, 2, 3)
    assert primitive((Fraction(1, 2), Fraction(3, 4))) == (2, 3)
    assert primitive((0, -2)) == (0, -1)


def test_lattice_membership_and_solve():
    basis = hnf_basis([[2, 0], [0, 3]])
    assert lattice_member((4, 3), basis)
    assert not lattice_member((1, 0), basis)
    coords = solve_in_lattice((4, 3), [[2, 0], [0, 3]])
    assert coords == (2, 1)
    assert solve_in_lattice((1, 1), [[2, 0], [0, 3]]) is None


def test_invert_unimodular():
    u = [[1, 2], [0, 1]]
    inv = invert_unimodular(u)
    assert mat_mul(u, inv) == identity(2)


def test_rref_and_rank():
    red, piv = rref([[Fraction(2), Fraction(4)], [Fraction(1), Fraction(2)]])
    assert piv == [0]
    assert tuple(red[0]) == (Fraction(1), Fraction(2))
    assert frac_rank([[1, 2], [2, 4], [0, 1]]) == 2
    assert in_row_span((3, 6), [[1, 2]])
    assert not in_row_span((1, 0), [[1, 2]])
