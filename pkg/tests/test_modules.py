import random

import pytest
from hypothesis import given, settings, strategies as st

from flatascent import catalog
from flatascent.errors import NotAModule, NotTorsion
from flatascent.exactla import QQ, Matrix, Subspace
from flatascent.modules import (annihilator, attached_primes, colon_submodule, composition_length,
                                cyclic_module, double_dual_map, equivariant_maps, ext_dim, ext_dims,
                                hom_module, hom_rs, length, matlis_dual,
                                minimal_free_resolution, quotient_module, random_module,
                                regular_module, residue_module, restrict_scalars, socle,
                                submodule, submodule_generated, tensor_up, torsion_index,
                                validate_module, zero_module)
from flatascent.rings import (extend_by_field, flat_certificate, identity_map, make_monomial_quotient,
                              make_univariate_quotient, power_of_maximal)


def truncated(n, symbol="x"):
    return make_univariate_quotient(QQ, [0, 1], n, symbol=symbol)


def i2():
    R = truncated(3)
    S, phi = extend_by_field(R, [-2, 0, 1], symbol="√2")
    return R, S, phi


def test_module_validation():
    R = truncated(2)
    validate_module(R, regular_module(R).actions)
    assert zero_module(R).dim == 0
    # rho(x) = [[0,0],[1,0]] is R itself
    M = validate_module(R, [Matrix.identity(QQ, 2), Matrix(QQ, [[0, 0], [1, 0]])])
    assert M.dim == 2
    with pytest.raises(NotAModule):
        validate_module(R, [Matrix.identity(QQ, 2), Matrix.identity(QQ, 2)])


def test_lengths():
    R, S, phi = i2()
    assert length(zero_module(S)) == 0
    assert length(regular_module(S)) == 3 == composition_length(regular_module(S))
    SR = restrict_scalars(regular_module(S), phi)
    assert length(SR) == 6 == composition_length(SR)


def test_colon_submodules():
    A = truncated(3)
    M = regular_module(A)
    assert colon_submodule(M, Subspace.zero(QQ, 3)).dim == 3
    assert colon_submodule(M, A.maximal_ideal) == Subspace(QQ, 3, [(0, 0, 1)])
    _, S, _ = i2()
    assert socle(regular_module(S)).dim == 2


def test_annihilators():
    A = truncated(3)
    assert annihilator(regular_module(A)).dim == 0
    assert annihilator(residue_module(A)) == A.maximal_ideal
    assert annihilator(cyclic_module(A, power_of_maximal(A, 2))) == Subspace(QQ, 3, [(0, 0, 1)])


def test_restriction_lengths():
    R = truncated(1)
    S, phi = extend_by_field(R, [-2, 0, 1])
    assert length(restrict_scalars(regular_module(S), phi)) == 2
    A = truncated(3)
    idm = identity_map(A)
    M = regular_module(A)
    assert restrict_scalars(M, idm).actions == M.actions
    _, S2, phi2 = i2()
    assert length(restrict_scalars(residue_module(S2), phi2)) == 2


def test_tensor_examples():
    R, S, phi = i2()
    T = tensor_up(regular_module(R), phi)
    assert T.module.dim == S.dim and T.unit.is_injective()

    inst = catalog.i4()
    phi4 = inst.maps["phi"]
    Tk = tensor_up(residue_module(phi4.source), phi4)
    assert Tk.module.dim == 2 and length(Tk.module) == 2

    Q = truncated(1)
    Qs2, inc = extend_by_field(Q, [-2, 0, 1])
    A = restrict_scalars(regular_module(Qs2), inc)
    assert tensor_up(A, inc).module.dim == 4


def test_hom_rs():
    A = truncated(2)
    H = hom_rs(identity_map(A), regular_module(A))
    assert H.evaluation.is_bijective()
    Q = truncated(1)
    S, inc = extend_by_field(Q, [-2, 0, 1])
    assert hom_rs(inc, regular_module(Q)).module.dim == 2
    R, S2, phi = i2()
    assert hom_rs(phi, residue_module(R)).module.dim == 2


def test_hom_examples():
    A = truncated(2)
    k = residue_module(A)
    assert hom_module(regular_module(A), k).dim == k.dim
    assert equivariant_maps(k, k).dim == 1
    Rx = cyclic_module(A, A.maximal_ideal)
    assert equivariant_maps(Rx, regular_module(A)).dim == 1


def test_resolutions():
    A = truncated(2)
    assert minimal_free_resolution(regular_module(A), 3).ranks == [1, 0, 0, 0]
    res = minimal_free_resolution(residue_module(A), 3)
    assert res.ranks == [1, 1, 1, 1]
    # each differential is multiplication by x
    for table in res.differentials:
        assert [list(e) for e in table[0]] == [[0, 1]]
    B = make_monomial_quotient(QQ, 2, [(2, 0), (0, 2)])
    assert minimal_free_resolution(residue_module(B), 2).ranks[:2] == [1, 2]


def test_ext_examples():
    A = truncated(2)
    k = residue_module(A)
    assert ext_dims(regular_module(A), k) == [1, 0, 0, 0]
    assert ext_dim(k, k, 1) == 1
    R, S, phi = i2()
    SR = restrict_scalars(regular_module(S), phi)
    for M in (regular_module(R), residue_module(R), cyclic_module(R, power_of_maximal(R, 2))):
        assert ext_dims(SR, M)[1:] == [0, 0, 0]


def test_matlis_examples():
    A = truncated(2)
    assert matlis_dual(zero_module(A)).dim == 0
    k = residue_module(A)
    assert matlis_dual(k).actions == k.actions
    _, S, _ = i2()
    D = matlis_dual(regular_module(S))
    soc = socle(D)
    assert soc.dim == 2
    soc_mod, _ = submodule(D, soc)
    assert length(soc_mod) == 1


def test_torsion_index():
    A = truncated(3)
    assert torsion_index(residue_module(A), A.maximal_ideal) == 1
    assert torsion_index(regular_module(A), A.maximal_ideal) == 3
    with pytest.raises(NotTorsion):
        torsion_index(regular_module(A), Subspace.full(QQ, 3))


def test_attached_primes():
    A = truncated(3)
    assert attached_primes(zero_module(A)) == []
    assert attached_primes(residue_module(A)) == [A.maximal_ideal]
    assert attached_primes(regular_module(A)) == [A.maximal_ideal]


# ------------------------------------------------------------ properties

ALGEBRAS = {
    "x3": lambda: truncated(3),
    "x2y2": lambda: make_monomial_quotient(QQ, 2, [(2, 0), (0, 2)]),
    "s2x2": lambda: extend_by_field(truncated(2), [-2, 0, 1])[0],
    "f5x2": lambda: catalog.i3().maps["phi"].target,
}
_cache = {}


def algebra(name):
    if name not in _cache:
        _cache[name] = ALGEBRAS[name]()
    return _cache[name]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(ALGEBRAS)), st.integers(0, 2**32))
def test_length_additivity(name, seed):
    A = algebra(name)
    rng = random.Random(seed)
    M = random_module(A, rng)
    F = A.field
    vecs = [[F.random(rng) for _ in range(M.dim)] for _ in range(rng.randint(0, 2))]
    U = submodule_generated(M, vecs)
    sub, _ = submodule(M, U)
    quo, _ = quotient_module(M, U)
    assert length(M) == length(sub) + length(quo)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(ALGEBRAS)), st.integers(0, 2**32))
def test_socle_nonzero_and_matlis(name, seed):
    A = algebra(name)
    M = random_module(A, random.Random(seed))
    assert M.dim > 0
    assert socle(M).dim > 0
    dd = double_dual_map(M)
    assert dd.is_equivariant() and dd.is_bijective()
    assert length(matlis_dual(M)) == length(M)


def test_composition_length_on_100_random_modules():
    rng = random.Random(2024)
    names = sorted(ALGEBRAS)
    for _ in range(100):
        M = random_module(algebra(rng.choice(names)), rng, max_rank=3, max_relations=3)
        assert composition_length(M) == length(M)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(list(catalog.FLAT)), st.integers(0, 2**32))
def test_tensor_dimension_is_rank_times_dim(name, seed):
    phi = catalog.build(name).maps["phi"]
    c = flat_certificate(phi)
    A = random_module(phi.source, random.Random(seed))
    T = tensor_up(A, phi)
    assert T.module.dim == c.rank * A.dim
    assert T.unit.is_injective()
    if c.rank == 1:
        assert T.unit.is_bijective()
        assert hom_rs(phi, A).evaluation.is_bijective()
