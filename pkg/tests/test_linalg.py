from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from quivhom.linalg import (
    GF, QQ, ZZ, Echelon, SparseMatrix, integer_homology, kernel_basis, rank, smith_normal_form, solve,
)

small_ints = st.integers(min_value=-4, max_value=4)


def dense(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def matrices(draw, max_dim=6):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return draw(dense(r, c))


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_over_q_matches_sympy(rows):
    assert rank(SparseMatrix.from_dense(rows, QQ)) == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices(), st.sampled_from([2, 3, 5, 7]))
def test_rank_over_gf_matches_sympy(rows, p):
    from sympy.polys.matrices import DomainMatrix
    from sympy import GF as SGF
    dm = DomainMatrix([[SGF(p)(x) for x in r] for r in rows], (len(rows), len(rows[0])), SGF(p))
    assert rank(SparseMatrix.from_dense(rows, GF(p))) == dm.rank()


@settings(max_examples=60, deadline=None)
@given(matrices(max_dim=5))
def test_snf_matches_sympy(rows):
    ours = smith_normal_form(SparseMatrix.from_dense(rows, ZZ))
    S = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    diag = [abs(S[i, i]) for i in range(min(S.shape)) if S[i, i] != 0]
    assert sorted(ours.factors) == sorted(int(d) for d in diag)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_is_kernel(rows):
    M = SparseMatrix.from_dense(rows, QQ)
    K = kernel_basis(M)
    assert K.ncols == M.ncols - rank(M)
    assert (M @ K).is_zero()
    assert rank(K) == K.ncols


@settings(max_examples=40, deadline=None)
@given(matrices(), st.lists(small_ints, min_size=6, max_size=6))
def test_solve_roundtrip(rows, xs):
    M = SparseMatrix.from_dense(rows, QQ)
    x = {j: xs[j] for j in range(M.ncols) if xs[j]}
    y = M.apply(x)
    sol = solve(M, y)
    assert sol is not None and M.apply(sol) == y


def test_solve_inconsistent():
    M = SparseMatrix.from_dense([[1, 0], [0, 0]], QQ)
    assert solve(M, {1: 1}) is None


def test_field_coercion():
    assert QQ("3/6") == Fraction(1, 2)
    assert GF(5)("1/2") == 3
    with pytest.raises(ZeroDivisionError):
        GF(5)("1/5")
    with pytest.raises(ValueError):
        ZZ("1/2")
    with pytest.raises(ValueError):
        GF(4)


def test_matrix_algebra():
    A = SparseMatrix.from_dense([[1, 2], [3, 4]], QQ)
    I = SparseMatrix.identity(2, QQ)
    assert A @ I == A
    assert (A - A).is_zero()
    assert (A + (-A)).is_zero()
    assert A.T.to_dense() == [[1, 3], [2, 4]]
    assert SparseMatrix.vstack([A, I]).nrows == 4
    assert SparseMatrix.hstack([A, I]).ncols == 4
    assert A.change_field(GF(2)).to_dense() == [[1, 0], [1, 0]]


def test_echelon_membership():
    E = Echelon(QQ)
    assert E.add({0: 1, 1: 1})
    assert E.add({1: 2})
    assert not E.add({0: 3})
    assert E.contains({0: 5, 1: -1})
    assert len(E) == 2


def test_integer_homology_torsion():
    # Z --2--> Z: H_0 = Z/2
    d = SparseMatrix.from_dense([[2]], ZZ)
    assert integer_homology(d, None, 1) == (0, [2])
    # RP^2-like cellular chain: d2 = 2, d1 = 0
    assert integer_homology(None, d, 1) == (0, [])
