import random

import pytest
from hypothesis import given, settings, strategies as st

from flatascent.errors import (InfiniteColength, NotCommutative, NotFree, NotLocal, NotMultiplicative,
                               ReducibleFactor, ResidueNotBase)
from flatascent.exactla import GF, QQ, Matrix, Subspace, inverse, unit_vector
from flatascent.modules import composition_length, regular_module
from flatascent.rings import (AlgebraPresentation, change_basis, extend_by_field, flat_certificate,
                              identity_map, make_monomial_quotient, make_univariate_quotient,
                              nilradical, power_of_maximal, validate_algebra, validate_ring_map)


def truncated(K, n, symbol="x"):
    return make_univariate_quotient(K, [0, 1], n, symbol=symbol)


def test_base_field_is_local():
    A = validate_algebra(AlgebraPresentation(QQ, 1, [1], [[[1]]]))
    assert A.maximal_ideal.dim == 0 and A.nilpotency_index == 1


def test_truncated_polynomials_from_raw_table():
    # x^i x^j = x^{i+j}, zero past x^2
    mul = [[unit_vector(QQ, 3, i + j) if i + j < 3 else (0, 0, 0) for j in range(3)] for i in range(3)]
    A = validate_algebra(AlgebraPresentation(QQ, 3, [1, 0, 0], mul))
    assert A.maximal_ideal == Subspace(QQ, 3, [(0, 1, 0), (0, 0, 1)])
    assert A.nilpotency_index == 3
    assert A.residue.field_dim == 1


def test_product_of_fields_is_not_local():
    mul = [[(1, 0), (0, 0)], [(0, 0), (0, 1)]]
    with pytest.raises(NotLocal) as exc:
        validate_algebra(AlgebraPresentation(QQ, 2, [1, 1], mul))
    w = exc.value.witness
    # the witness is a nontrivial idempotent
    assert w not in ((0, 0), (1, 1))


def test_non_commutative_table_rejected():
    mul = [[(1, 0), (0, 1)], [(0, 2), (0, 0)]]
    with pytest.raises(NotCommutative) as exc:
        validate_algebra(AlgebraPresentation(QQ, 2, [1, 0], mul))
    assert exc.value.index == (1, 0)


def test_residue_fields():
    assert truncated(QQ, 3).residue.field_dim == 1
    qs2 = make_univariate_quotient(QQ, [-2, 0, 1], 1, symbol="√2")
    assert qs2.maximal_ideal.dim == 0 and qs2.residue.field_dim == 2
    f25 = make_univariate_quotient(GF(5), [3, 0, 1], 1)
    assert f25.residue.field_dim == 2


def test_residue_fields_from_raw_tables_are_certified():
    # same tables without a by-construction certificate
    qs2 = make_univariate_quotient(QQ, [-2, 0, 1], 1)
    A = validate_algebra(qs2.presentation)
    assert A.residue.field_dim == 2
    f25 = make_univariate_quotient(GF(5), [3, 0, 1], 1)
    B = validate_algebra(f25.presentation)
    assert B.residue.field_dim == 2 and B.maximal_ideal.dim == 0


def test_reducible_f_over_fp_is_not_local():
    # F_5[y]/(y^2 - 1), and y^2 - 1 = (y-1)(y+1)
    mul = [[(1, 0), (0, 1)], [(0, 1), (1, 0)]]
    with pytest.raises(NotLocal):
        validate_algebra(AlgebraPresentation(GF(5), 2, [1, 0], mul))


def test_reducible_factor_rejected():
    with pytest.raises(ReducibleFactor):
        make_univariate_quotient(QQ, [-1, 0, 1], 1)


def test_powers_of_maximal_ideal():
    A = truncated(QQ, 3)
    assert power_of_maximal(A, 0).dim == 3
    assert power_of_maximal(A, 2) == Subspace(QQ, 3, [(0, 0, 1)])
    assert power_of_maximal(A, 3).dim == 0


def test_monomial_quotients():
    assert make_monomial_quotient(QQ, 1, [(2,)]).dim == 2
    A = make_monomial_quotient(QQ, 2, [(2, 0), (0, 2)])
    assert A.labels == ("1", "x", "y", "xy")
    with pytest.raises(InfiniteColength):
        make_monomial_quotient(QQ, 2, [(2, 0)])


def test_extend_by_field():
    R = truncated(QQ, 1)
    S, phi = extend_by_field(R, [-2, 0, 1], symbol="√2")
    assert S.dim == 2 and phi.matrix == Matrix(QQ, [[1], [0]])
    S2, _ = extend_by_field(truncated(QQ, 3), [-2, 0, 1])
    assert S2.dim == 6
    qs2 = make_univariate_quotient(QQ, [-2, 0, 1], 1)
    with pytest.raises(ResidueNotBase):
        extend_by_field(qs2, [-3, 0, 1])


def test_ring_maps():
    A = truncated(QQ, 3)
    assert identity_map(A).matrix == Matrix.identity(QQ, 3)
    R = truncated(QQ, 2)
    validate_ring_map(R, truncated(QQ, 1), Matrix(QQ, [[1, 0]]))
    with pytest.raises(NotMultiplicative):
        # x -> 1 + z
        validate_ring_map(R, truncated(QQ, 2, "z"), Matrix(QQ, [[1, 1], [0, 1]]))


def test_flat_certificates():
    R = truncated(QQ, 1)
    S, phi = extend_by_field(R, [-2, 0, 1], symbol="√2")
    c = flat_certificate(phi)
    assert c.rank == 2 and [S.format(e) for e in c.epsilons] == ["1", "√2"]

    R2 = truncated(QQ, 2)
    S2 = make_monomial_quotient(QQ, 2, [(2, 0), (0, 2)])
    c2 = flat_certificate(validate_ring_map(R2, S2, Matrix(QQ, [[1, 0], [0, 1], [0, 0], [0, 0]])))
    assert c2.rank == 2 and [S2.format(e) for e in c2.epsilons] == ["1", "y"]

    with pytest.raises(NotFree):
        flat_certificate(validate_ring_map(R2, R, Matrix(QQ, [[1, 0]])))


def test_format_element():
    S, _ = extend_by_field(truncated(QQ, 1), [-2, 0, 1], symbol="√2")
    assert S.format((1, 3)) == "1+3√2"
    assert S.format((6, 1)) == "6+√2"
    assert S.format((0, 0)) == "0"


# ------------------------------------------------------------ properties

@st.composite
def local_algebras(draw):
    kind = draw(st.sampled_from(["trunc", "mono", "ext", "fp"]))
    if kind == "trunc":
        return truncated(QQ, draw(st.integers(1, 4)))
    if kind == "mono":
        a, b = draw(st.integers(1, 3)), draw(st.integers(1, 3))
        return make_monomial_quotient(QQ, 2, [(a, 0), (0, b)])
    if kind == "ext":
        S, _ = extend_by_field(truncated(QQ, draw(st.integers(1, 3))), [-2, 0, 1])
        return S
    p = draw(st.sampled_from([3, 5, 7]))
    S, _ = extend_by_field(truncated(GF(p), draw(st.integers(1, 2))), _nonresidue_poly(p))
    return S


def _nonresidue_poly(p):
    squares = {x * x % p for x in range(p)}
    a = next(a for a in range(1, p) if a not in squares)
    return [(-a) % p, 0, 1]


@settings(max_examples=40, deadline=None)
@given(local_algebras())
def test_nilpotency_index_and_length(A):
    t0 = A.nilpotency_index
    assert power_of_maximal(A, t0).dim == 0
    if t0 > 1:
        assert power_of_maximal(A, t0 - 1).dim > 0
    f = A.residue.field_dim
    assert A.dim % f == 0
    assert composition_length(regular_module(A)) == A.dim // f


@settings(max_examples=25, deadline=None)
@given(local_algebras(), st.integers(0, 2**32))
def test_radical_is_basis_independent(A, seed):
    rng = random.Random(seed)
    F = A.field
    while True:
        P = Matrix(F, [[F.random(rng) for _ in range(A.dim)] for _ in range(A.dim)])
        if P.is_invertible():
            break
    B = validate_algebra(change_basis(A.presentation, P))
    Pinv = inverse(P)
    conj = Subspace(F, A.dim, [Pinv.apply(v) for v in A.maximal_ideal.vectors()])
    assert B.maximal_ideal == conj
    assert nilradical(B.presentation) == conj
    assert B.nilpotency_index == A.nilpotency_index


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.sampled_from(["q2", "q3", "f5", "f7"]))
def test_extension_is_free_of_rank_deg_g(n, which):
    K, g = {"q2": (QQ, [-2, 0, 1]), "q3": (QQ, [-2, 0, 0, 1]),
            "f5": (GF(5), [3, 0, 1]), "f7": (GF(7), _nonresidue_poly(7))}[which]
    R = truncated(K, n)
    S, phi = extend_by_field(R, g)
    c = flat_certificate(phi)
    assert c.rank == len(g) - 1
    assert c.rank * R.dim == S.dim
    assert c.assembled_matrix.is_invertible()
    assert c.fiber.dim == c.rank * R.residue.field_dim
    proj = Subspace(K, c.fiber.dim, [c.fiber.project(e) for e in c.epsilons])
    assert proj.dim == c.rank
