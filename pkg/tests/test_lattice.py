from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricsym.lattice import (
    RationalCone,
    cone_contains,
    hermite_normal_form,
    int_det,
    integer_kernel,
    is_unimodular_square,
    positive_functional,
    primitive,
    rational_nullspace,
    rational_rank,
    same_rational_span,
    smith_normal_form,
    sparse_rank,
)

small = st.integers(-6, 6)
matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def test_smith_small_example():
    snf = smith_normal_form([[2, 0], [0, 3]])
    assert snf.diagonal == [1, 6]


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_smith_identity(m):
    snf = smith_normal_form(m)
    M = np.array(m, dtype=object)
    assert (snf.U.dot(M).dot(snf.V) == snf.D).all()
    assert is_unimodular_square(snf.U) and is_unimodular_square(snf.V)
    d = snf.diagonal
    off = snf.D.copy()
    for i in range(len(d)):
        off[i, i] = 0
    assert not off.any()
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert snf.rank == rational_rank(M)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_hermite_transform(m):
    H, U = hermite_normal_form(m)
    assert (U.dot(np.array(m, dtype=object)) == H).all()
    assert is_unimodular_square(U)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_integer_kernel_is_saturated_basis(m):
    K = integer_kernel(m)
    M = np.array(m, dtype=object)
    assert not M.dot(K).any()
    assert K.shape[1] == M.shape[1] - rational_rank(M)
    if K.shape[1]:
        # saturated: the Smith form of K has only unit invariant factors
        assert all(d == 1 for d in smith_normal_form(K).diagonal)


def test_kernel_of_row_of_ones():
    assert integer_kernel([[1, 1, 1]]).shape == (3, 2)


def test_nullspace_and_span():
    null = rational_nullspace([[1, 1, 1]])
    assert len(null) == 2
    assert same_rational_span(null, [(1, -1, 0), (0, 1, -1)])
    assert not same_rational_span(null, [(1, 0, 0), (0, 1, -1)])


def test_primitive_and_det():
    assert primitive([Fraction(1, 2), Fraction(-3, 4)]) == (2, -3)
    assert int_det([[2, 1], [7, 4]]) == 1
    assert int_det([[1, 2, 3], [4, 5, 6], [7, 8, 9]]) == 0


def test_sparse_rank():
    rows = [{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: -1}, {0: 2, 1: 2}]
    assert sparse_rank(rows) == 2
    assert sparse_rank([]) == 0


def test_cone_membership_with_certificates():
    cone = RationalCone.from_generators([(1, -1), (1, 0), (0, 1)])
    res = cone_contains(cone, (1, -1))
    assert res and res.witness is not None
    res = cone_contains(RationalCone.from_generators([(0, -1)]), (1, -1))
    assert not res
    y = res.certificate
    assert y[0] * 1 + y[1] * -1 > 0 and y[1] * -1 <= 0


def test_cone_dimension_mismatch():
    with pytest.raises(ValueError):
        cone_contains(RationalCone.from_generators([(1, 0)]), (1, 0, 0))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=5), st.tuples(small, small, small))
def test_cone_membership_is_certified(gens, v):
    res = cone_contains(RationalCone.from_generators(gens), v)
    if res:
        total = [sum(w * g[i] for w, g in zip(res.witness, gens)) for i in range(3)]
        assert total == [Fraction(x) for x in v] and all(w >= 0 for w in res.witness)
    else:
        y = res.certificate
        assert sum(a * b for a, b in zip(y, v)) > 0
        assert all(sum(a * b for a, b in zip(y, g)) <= 0 for g in gens)


def test_positive_functional():
    y = positive_functional([[1, 1, 0, -1], [0, 0, 1, 1]])
    A = np.array([[1, 1, 0, -1], [0, 0, 1, 1]], dtype=object)
    assert all(x >= 1 for x in np.array(y, dtype=object).dot(A))
    assert positive_functional([[1, -1]]) is None
