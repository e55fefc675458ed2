from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakhopf import _rowred_py
from weakhopf import linalg as la
from weakhopf._backend import BACKEND, insert_row

rationals = st.builds(F, st.integers(-6, 6), st.integers(1, 4))


def mat(rows):
    return la.Mat.from_rows([[F(x) for x in r] for r in rows])


def test_solve_identity():
    a = la.Mat.identity(3)
    b = (F(1), F(2), F(3))
    assert la.solve(a, b) == b


def test_solve_scalar_inverse():
    assert la.solve(mat([[2]]), (F(1),)) == (F(1, 2),)


def test_solve_inconsistent():
    a = mat([[1, 1], [1, 1]])
    with pytest.raises(la.NoSolution):
        la.solve(a, (F(0), F(1)))


def test_solve_dimension_mismatch():
    with pytest.raises(la.DimensionMismatch):
        la.solve(la.Mat.identity(2), (F(1),))


def test_solve_underdetermined_canonical():
    # free variables are pinned to zero
    a = mat([[1, 1, 0]])
    assert la.solve(a, (F(5),)) == (F(5), F(0), F(0))


def test_kernel_zero_matrix_full():
    assert la.kernel(mat([[0, 0], [0, 0]])).dim == 2


def test_kernel_identity_trivial():
    assert la.kernel(la.Mat.identity(4)).dim == 0


def test_quotient_trivial_relations():
    q = la.quotient(3, la.Subspace.zero(3))
    assert q.dim == 3
    assert q.project({1: F(2)}) == {1: F(2)}


def test_quotient_plane_by_line():
    rel = la.Subspace.from_vectors(2, [{0: F(1), 1: F(-1)}])
    q = la.quotient(2, rel)
    assert q.dim == 1
    # the two coordinates agree in the quotient
    assert q.project({0: F(1)}) == q.project({1: F(1)})
    # project o section = id
    assert q.project(q.section({0: F(7)})) == {0: F(7)}


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(rationals, min_size=3, max_size=3),
                min_size=1, max_size=4),
       st.lists(rationals, min_size=3, max_size=3))
def test_solve_reapplication(rows, x):
    a = la.Mat.from_rows(rows)
    b = a.apply(tuple(x))
    got = la.solve(a, b)
    assert a.apply(got) == b


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(rationals, min_size=4, max_size=4),
                min_size=1, max_size=4))
def test_kernel_annihilates(rows):
    a = la.Mat.from_rows(rows)
    ker = la.kernel(a)
    zero = tuple(F(0) for _ in range(a.rows))
    for v in ker.dense_basis():
        assert a.apply(v) == zero
    assert ker.dim + a.rank() == a.cols


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(rationals, min_size=4, max_size=4),
                min_size=0, max_size=3))
def test_quotient_properties(rel_rows):
    rel = la.Subspace.from_vectors(4, [la.sparse(r) for r in rel_rows])
    q = la.quotient(4, rel)
    assert q.dim == 4 - rel.dim
    # project annihilates exactly the relations
    for r in rel.basis:
        assert q.project(dict(r)) == {}
    # project o section = id on quotient coordinates
    for i in range(q.dim):
        assert q.project(q.section({i: F(1)})) == {i: F(1)}
    assert q.project_matrix().rank() == q.dim


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(rationals, min_size=4, max_size=4),
                min_size=0, max_size=4))
def test_echelon_deterministic_and_canonical(rows):
    s1 = la.Subspace.from_vectors(4, [la.sparse(r) for r in rows])
    s2 = la.Subspace.from_vectors(4, [la.sparse(r) for r in rows])
    assert s1 == s2
    # scaled spanning set gives the identical canonical basis
    s3 = la.Subspace.from_vectors(
        4, [la.sparse([F(3) * x for x in r]) for r in rows])
    assert s1 == s3


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=5, max_size=5),
                min_size=1, max_size=6))
def test_backend_matches_pure_python(rows):
    rows_a, piv_a = [], []
    rows_b, piv_b = [], []
    for r in rows:
        insert_row(rows_a, piv_a, list(r), 5)
        _rowred_py.insert_row(rows_b, piv_b, list(r), 5)
    assert rows_a == rows_b and piv_a == piv_b


def test_backend_is_reported():
    assert BACKEND in ("c", "python")


def test_prime_field_arithmetic():
    x = la.Fp(3, 5)
    assert x + x == la.Fp(1, 5)
    assert x / la.Fp(2, 5) == la.Fp(4, 5)
    with pytest.raises(ZeroDivisionError):
        x / la.Fp(0, 5)


def test_prime_field_solve():
    a = la.Mat.from_rows([[1, 1], [0, 1]], p=2)
    got = la.solve(a, (la.Fp(1, 2), la.Fp(1, 2)))
    assert got == (la.Fp(0, 2), la.Fp(1, 2))


def test_subspace_ops():
    s1 = la.Subspace.from_vectors(3, [{0: F(1)}, {1: F(1)}])
    s2 = la.Subspace.from_vectors(3, [{1: F(1)}, {2: F(1)}])
    inter = s1.intersect(s2)
    assert inter.dim == 1 and inter.contains({1: F(5)})
    assert s1.sum_with(s2) == la.Subspace.full(3)
    assert s1.coords({0: F(2), 1: F(-1)}) == (F(2), F(-1))
    assert s1.coords({2: F(1)}) is None
