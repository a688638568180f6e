import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from flatascent.errors import NoSolution
from flatascent.exactla import (GF, QQ, Field, Matrix, Subspace, inverse, is_prime, kernel_basis,
                                matmul, quotient_space, rref, solve, unit_vector)


def test_field_rejects_composite_modulus():
    with pytest.raises(ValueError):
        Field("Fp", 9)
    assert GF(7).char == 7 and QQ.char == 0


def test_is_prime_small_range():
    brute = [n for n in range(200) if n > 1 and all(n % d for d in range(2, n))]
    assert [n for n in range(200) if is_prime(n)] == brute


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        QQ(0.5)


def test_rationals_are_reduced():
    m = Matrix(QQ, [["2/4", "-3/6"]])
    assert m.data == ((Fraction(1, 2), Fraction(-1, 2)),)
    assert QQ.fmt(m[0, 0]) == "1/2"


def test_rref_empty():
    r, piv = rref(Matrix(QQ, [], cols=0))
    assert r.shape == (0, 0) and piv == ()


def test_rref_identity():
    r, piv = rref(Matrix.identity(QQ, 3))
    assert r == Matrix.identity(QQ, 3) and piv == (0, 1, 2)


def test_rref_hand_example():
    r, piv = rref(Matrix(QQ, [[2, 4], [1, 2]]))
    assert r == Matrix(QQ, [[1, 2], [0, 0]])
    assert piv == (0,)


def test_kernel_identity_and_zero():
    assert kernel_basis(Matrix.identity(QQ, 4)).dim == 0
    assert kernel_basis(Matrix.zeros(QQ, 2, 3)) == Subspace.full(QQ, 3)


def test_kernel_over_f5_matches_enumeration():
    F = GF(5)
    M = Matrix(F, [[1, 1]])
    brute = [v for v in itertools.product(range(5), repeat=2) if (v[0] + v[1]) % 5 == 0]
    K = kernel_basis(M)
    assert list(K.vectors()) == [(1, 4)]
    assert sorted(brute) == sorted({tuple((c * x) % 5 for x in (1, 4)) for c in range(5)})


def test_solve_examples():
    assert solve(Matrix.identity(QQ, 3), (1, 2, 3)) == (1, 2, 3)
    with pytest.raises(NoSolution):
        solve(Matrix(QQ, [[1], [0]]), (0, 1))
    # back substitution: 2y = 4, x + y = 3
    assert solve(Matrix(QQ, [[1, 1], [0, 2]]), (3, 4)) == (1, 2)


def test_solve_sets_free_variables_to_zero():
    assert solve(Matrix(QQ, [[1, 1]]), (5,)) == (5, 0)


def test_quotient_examples():
    q = quotient_space(3, Subspace.zero(QQ, 3))
    assert q.dim == 3 and q.projection == Matrix.identity(QQ, 3)
    assert quotient_space(3, Subspace.full(QQ, 3)).dim == 0
    q = quotient_space(3, Subspace(QQ, 3, [(1, 0, 0)]))
    assert q.dim == 2 and q.project((1, 0, 0)) == (0, 0)


def test_inverse_roundtrip():
    M = Matrix(QQ, [[2, 1], [7, 4]])
    assert matmul(M, inverse(M)) == Matrix.identity(QQ, 2)
    with pytest.raises(NoSolution):
        inverse(Matrix(QQ, [[1, 2], [2, 4]]))


def test_subspace_intersection_and_sum():
    F = QQ
    U = Subspace(F, 3, [(1, 0, 0), (0, 1, 0)])
    V = Subspace(F, 3, [(0, 1, 0), (0, 0, 1)])
    assert (U + V).dim == 3
    assert U.intersection(V) == Subspace(F, 3, [(0, 1, 0)])
    assert U.coordinates((2, 3, 0)) == (2, 3)
    with pytest.raises(NoSolution):
        U.coordinates((0, 0, 1))


# ------------------------------------------------------------ properties

small = st.integers(-4, 4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    return Matrix(QQ, [[draw(small) for _ in range(c)] for _ in range(r)], cols=c)


@st.composite
def matrices_fp(draw, p=7):
    r = draw(st.integers(1, 5))
    c = draw(st.integers(1, 5))
    return Matrix(GF(p), [[draw(st.integers(0, p - 1)) for _ in range(c)] for _ in range(r)])


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rref_idempotent_and_preserves_row_space(M):
    R, piv = rref(M)
    assert rref(R) == (R, piv)
    assert list(piv) == sorted(set(piv))
    assert Subspace(QQ, M.cols, M.data) == Subspace(QQ, M.cols, R.data)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_kernel_rank_nullity(M):
    K = kernel_basis(M)
    for v in K.vectors():
        assert all(x == 0 for x in M.apply(v))
    assert M.rank() + K.dim == M.cols


@settings(max_examples=80, deadline=None)
@given(matrices(), st.data())
def test_solve_is_exact(M, data):
    x = [data.draw(small) for _ in range(M.cols)]
    b = M.apply(x)
    y = solve(M, b)
    assert M.apply(y) == b


@settings(max_examples=80, deadline=None)
@given(matrices_fp())
def test_quotient_invariants_fp(M):
    K = kernel_basis(M)
    q = quotient_space(M.cols, K)
    assert matmul(q.projection, q.section) == Matrix.identity(M.field, q.dim)
    for v in K.vectors():
        assert all(x == 0 for x in q.project(v))
    assert q.dim == M.cols - K.dim


def test_fp_agrees_with_q_mod_p():
    rng = random.Random(12345)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7, 11])
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        ints = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
        A, B = Matrix(QQ, ints), Matrix(GF(p), ints)
        Bt = Matrix(GF(p), [[x for x in row] for row in zip(*ints)])
        assert Matrix(GF(p), matmul(A, A.T).data) == matmul(B, Bt)
        # rank can only drop mod p
        assert B.rank() <= A.rank()
        # a kernel vector over Q with integer entries reduces to a kernel vector mod p
        for v in kernel_basis(A).vectors():
            den = 1
            for x in v:
                den = den * x.denominator
            w = [int(x * den) for x in v]
            assert all(y == 0 for y in B.apply(w))


def test_unit_vector_in_fp():
    assert unit_vector(GF(3), 3, 1) == (0, 1, 0)
