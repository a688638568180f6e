"""Base change along a flat local map R -> S with fibre rank m.

With eps_1..eps_m lifting a basis of S/m_R S, every s in S is uniquely
sum phi(r_i) eps_i (exactly, since m_R is nilpotent).  That gives

* truncation isomorphisms (R/m^t)^m -> S/m^t S,
* h : A ⊗_R S -> A^m,  a ⊗ s -> (r_1(s) a, ..., r_m(s) a),
* g : A^m -> A ⊗_R S,  (a_i) -> sum a_i ⊗ eps_i,

and the S-structure s ∘ a := h(s · g(a)) on A^m.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from . import oracles
from .errors import AlgebraError, NotAModule, NotIso, RankNotOne, RelationNotKilled
from .exactla import Matrix, QuotientSpace, Subspace, inverse, matmul, solve, unit_vector
from .modules import (ModuleMap, ModulePresentation, TensorUp, attached_primes,
                      composition_length, conjugate_module, cyclic_module, double_dual_map,
                      ext_dims, hom_rs, is_artinian_by_melkersson, length, matlis_dual,
                      minimal_free_resolution, power_module, random_module, regular_module,
                      residue_module, restrict_scalars, socle, tensor_up, torsion_index,
                      torsion_submodule, validate_module)
from .rings import (FlatCertificate, LocalAlgebra, RingMap, _ideal_generated, power_of_maximal)


def coordinates(cert: FlatCertificate, s) -> tuple:
    """(r_1, ..., r_m) with s = sum phi(r_i) eps_i."""
    R = cert.map.source
    x = solve(cert.assembled_matrix, s)
    return tuple(x[i * R.dim:(i + 1) * R.dim] for i in range(cert.rank))


def _extended(phi: RingMap, I: Subspace) -> Subspace:
    S = phi.target
    return _ideal_generated(S.presentation, [phi(v) for v in I.vectors()])


def truncation_map(phi: RingMap, cert: FlatCertificate, t: int,
                   epsilons: Sequence | None = None) -> ModuleMap:
    """(R/m^t)^m -> S/m^t S, (r_i + m^t) -> sum r_i eps_i + m^t S, checked bijective."""
    if t < 1:
        raise ValueError("t must be >= 1")
    R, S = phi.source, phi.target
    eps = tuple(cert.epsilons if epsilons is None else epsilons)
    mt = power_of_maximal(R, t)
    mtS = _extended(phi, mt)
    src_cyc = cyclic_module(R, mt)
    source = power_module(src_cyc, len(eps))
    tgt_q = QuotientSpace(S.dim, mtS)
    target_S = cyclic_module(S, mtS)
    target = restrict_scalars(target_S, phi)
    sec = QuotientSpace(R.dim, mt).section
    cols = []
    for e in eps:
        for v in mt.vectors():
            if not mtS.contains(S.multiply(phi(v), e)):
                raise NotIso("m^t eps is not inside m^t S")
        for c in range(sec.cols):
            r = sec.column(c)
            cols.append(tgt_q.project(S.multiply(phi(r), e)))
    M = ModuleMap(source, target, Matrix.from_columns(S.field, target.dim, cols))
    if not (M.is_equivariant() and M.is_bijective()):
        raise NotIso(f"truncation map at t={t} is not an isomorphism")
    return M


def tensor_to_power(A: ModulePresentation, phi: RingMap, cert: FlatCertificate,
                    tensor: TensorUp | None = None) -> ModuleMap:
    """h : A ⊗_R S -> A^m; first built on A ⊗_K S, then checked to kill the relations."""
    tensor = tensor or tensor_up(A, phi)
    S = phi.target
    F = S.field
    m = cert.rank
    coords = [coordinates(cert, S.basis(l)) for l in range(S.dim)]
    acts = {}
    cols = []
    for j in range(A.dim):
        for l in range(S.dim):
            col = ()
            for r in coords[l]:
                key = tuple(r)
                if key not in acts:
                    acts[key] = A.act(r)
                col += acts[key].column(j)
            cols.append(col)
    h_tilde = Matrix.from_columns(F, m * A.dim, cols)
    for v in tensor.relations.vectors():
        if any(h_tilde.apply(v)):
            raise RelationNotKilled("a tensor relation survives h")
    h = matmul(h_tilde, tensor.quotient.section)
    return ModuleMap(restrict_scalars(tensor.module, phi), power_module(A, m), h)


def power_to_tensor(A: ModulePresentation, phi: RingMap, cert: FlatCertificate,
                    tensor: TensorUp | None = None) -> ModuleMap:
    """g : A^m -> A ⊗_R S, (a_i) -> sum a_i ⊗ eps_i."""
    tensor = tensor or tensor_up(A, phi)
    F = phi.target.field
    cols = []
    for e in cert.epsilons:
        for j in range(A.dim):
            cols.append(tensor.quotient.project(kron_vec(F, unit_vector(F, A.dim, j), e)))
    g = Matrix.from_columns(F, tensor.module.dim, cols)
    return ModuleMap(power_module(A, cert.rank), restrict_scalars(tensor.module, phi), g)


def kron_vec(F, u, v):
    p = F.p
    return tuple((x * y) % p if p else x * y for x in u for y in v)


map_h = tensor_to_power
map_g = power_to_tensor
phi_t_map = truncation_map


@dataclass(eq=False)
class PowerStructure:
    base_module: ModulePresentation
    cert: FlatCertificate
    carrier: ModulePresentation
    g: ModuleMap
    h: ModuleMap
    tensor: TensorUp
    provenance: str = "induced"

    def hg_is_identity(self) -> bool:
        return matmul(self.h.matrix, self.g.matrix) == Matrix.identity(
            self.carrier.field, self.carrier.dim)

    def gh_is_identity(self) -> bool:
        return matmul(self.g.matrix, self.h.matrix) == Matrix.identity(
            self.carrier.field, self.tensor.module.dim)

    def h_is_s_linear(self) -> bool:
        return all(matmul(self.h.matrix, a) == matmul(b, self.h.matrix)
                   for a, b in zip(self.tensor.module.actions, self.carrier.actions))

    def recovers_r_structure(self) -> bool:
        usual = power_module(self.base_module, self.cert.rank)
        back = restrict_scalars(self.carrier, self.cert.map)
        return all(a == b for a, b in zip(back.actions, usual.actions))


def induced_power_structure(A: ModulePresentation, phi: RingMap, cert: FlatCertificate,
                            tensor: TensorUp | None = None) -> PowerStructure:
    """A^m as an S-module via s ∘ a := h(s · g(a))."""
    tensor = tensor or tensor_up(A, phi)
    h = tensor_to_power(A, phi, cert, tensor)
    g = power_to_tensor(A, phi, cert, tensor)
    acts = [matmul(matmul(h.matrix, rho), g.matrix) for rho in tensor.module.actions]
    carrier = validate_module(phi.target, acts, f"{A.label}^{cert.rank} (induced)")
    return PowerStructure(A, cert, carrier, g, h, tensor)


def ascend_rank_one(A: ModulePresentation, phi: RingMap, cert: FlatCertificate,
                    t: int | None = None) -> ModulePresentation:
    """S-structure on A itself when m = 1: s ∘ a := r a where r + m^t maps to s + m^t S.

    t defaults to the least exponent with m^t A = 0; any larger t gives the same result.
    """
    if cert.rank != 1:
        raise RankNotOne(f"fibre rank is {cert.rank}")
    R, S = phi.source, phi.target
    if t is None:
        t = max(torsion_index(A, R.maximal_ideal), 1)
    trunc = truncation_map(phi, cert, t, epsilons=(S.unit,))
    mt = power_of_maximal(R, t)
    tgt = QuotientSpace(S.dim, _extended(phi, mt))
    sec = QuotientSpace(R.dim, mt).section
    acts = []
    for k in range(S.dim):
        x = solve(trunc.matrix, tgt.project(S.basis(k)))
        acts.append(A.act(sec.apply(x)))
    return validate_module(S, acts, f"{A.label} (ascended)")


ascend_m1 = ascend_rank_one


@dataclass
class ComparisonReport:
    instance: str
    equal: bool
    witness: dict | None
    dims: dict = field(default_factory=dict)


def _apply(M: ModulePresentation, s, b):
    return M.act(s).apply(b)


def compare_power_structures(B: ModulePresentation, phi: RingMap, cert: FlatCertificate,
                             candidates: Sequence = (), seed: int = 0, random_trials: int = 8,
                             instance: str = "") -> ComparisonReport:
    """Usual componentwise S-structure on B^m against the induced one from B|R.

    Witness search order: caller candidates, then (basis element, basis
    vector) pairs, then seeded random pairs.
    """
    S = phi.target
    F = S.field
    usual = power_module(B, cert.rank)
    induced = induced_power_structure(restrict_scalars(B, phi), phi, cert).carrier
    equal = all(a == b for a, b in zip(usual.actions, induced.actions))
    witness = None
    if not equal:
        rng = random.Random(seed)
        pairs = list(candidates)
        pairs += [(S.basis(k), unit_vector(F, usual.dim, v))
                  for k in range(S.dim) for v in range(usual.dim)]
        pairs += [(tuple(F.random(rng) for _ in range(S.dim)),
                   tuple(F.random(rng) for _ in range(usual.dim))) for _ in range(random_trials)]
        for s, b in pairs:
            u, i = _apply(usual, s, b), _apply(induced, s, b)
            if u != i:
                witness = {"s": tuple(s), "b": tuple(b), "usual": u, "induced": i}
                break
    dims = {
        "rank": cert.rank,
        "usual": {"dim": usual.dim, "length": length(usual), "socle_dim": socle(usual).dim},
        "induced": {"dim": induced.dim, "length": length(induced), "socle_dim": socle(induced).dim},
    }
    return ComparisonReport(instance, equal, witness, dims)


# ---------------------------------------------------------- verification


@dataclass
class Check:
    name: str
    anchor: str
    passed: bool
    detail: dict = field(default_factory=dict)


def standard_fixture_modules(phi: RingMap, seed, n_random: int = 3, n_random_s: int = 1):
    """R-side: R, k, R/m^2 and seeded random modules; S-side: S, S/n, S/n^2 and random ones."""
    R, S = phi.source, phi.target
    rng = random.Random(seed)
    r_mods = {"R": regular_module(R), "k": residue_module(R),
              "R/m^2": cyclic_module(R, power_of_maximal(R, 2))}
    for i in range(n_random):
        r_mods[f"random{i}"] = random_module(R, rng)
    s_mods = {"S": regular_module(S), "S/n": residue_module(S),
              "S/n^2": cyclic_module(S, power_of_maximal(S, 2))}
    for i in range(n_random_s):
        s_mods[f"random{i}"] = random_module(S, rng, max_rank=1)
    return r_mods, s_mods


def _fmt_vec(F, v):
    return [F.fmt(x) for x in v]


def verify_instance(phi: RingMap, cert: FlatCertificate, r_modules: dict, s_modules: dict,
                    depth: int = 3, seed=0) -> list:
    """Run every identity on one flat instance; returns a list of :class:`Check`."""
    R, S = phi.source, phi.target
    m = cert.rank
    checks = []

    def add(name, anchor, passed, **detail):
        checks.append(Check(name, anchor, bool(passed), detail))

    def guarded(name, anchor, fn):
        try:
            passed, detail = fn()
        except AlgebraError as exc:
            passed, detail = False, {"error": exc.code, "message": str(exc)}
        add(name, anchor, passed, **detail)

    fR, fS = R.residue.field_dim, S.residue.field_dim
    fiber_dim = cert.fiber.dim
    add("flat_certificate", "S free over R: rank·dim_K R = dim_K S",
        m * R.dim == S.dim and cert.assembled_matrix.is_invertible(),
        rank=m, epsilons=[S.format(e) for e in cert.epsilons])
    add("fiber_identity", "S/mS is an R/m-vector space of dimension m",
        fiber_dim == m * fR, fiber_dim=fiber_dim, rank=m)
    t0 = R.nilpotency_index
    for t in range(1, t0 + 1):
        guarded(f"truncation_iso[t={t}]", "(R/m^t)^m → S/m^tS is an isomorphism",
                lambda t=t: (truncation_map(phi, cert, t).is_bijective(), {"t": t}))
    add("truncation_stabilises", "at t = t0 the truncation map is the free-basis map R^m → S",
        truncation_map(phi, cert, t0).matrix == cert.assembled_matrix, t0=t0)

    # dual of S as a stand-in for the injective hull of S/n
    Sdual = matlis_dual(regular_module(S))
    soc = socle(Sdual)
    add("matlis_socle_simple", "E(S/n) = S^∨ has simple socle", soc.dim == fS, socle_dim=soc.dim)
    SdualR = restrict_scalars(Sdual, phi)
    add("matlis_length_over_R", "E(S/n) is Artinian over R: ℓ_R(S^∨) = dim_K S / dim_K(R/m)",
        length(SdualR) * fR == S.dim and is_artinian_by_melkersson(SdualR, R.maximal_ideal),
        length=length(SdualR))

    S_over_R = restrict_scalars(regular_module(S), phi)
    S_res = minimal_free_resolution(S_over_R, depth + 1)
    lS_mS = fiber_dim // fS  # ℓ_S(S/mS)

    for name, A in r_modules.items():
        pre = f"{name}: "
        add(pre + "composition_length", "ℓ(B) = Σ ℓ(B_i/B_{i-1}) along a composition series",
            composition_length(A) == length(A), length=length(A))
        add(pre + "melkersson", "A is m-torsion with Artinian socle, hence Artinian",
            is_artinian_by_melkersson(A, R.maximal_ideal))
        add(pre + "attached_primes", "finite length ⟺ Att A = {m}",
            attached_primes(A) == ([R.maximal_ideal] if A.dim else []))
        add(pre + "double_dual", "M → M^∨∨ is an equivariant bijection",
            double_dual_map(A).is_bijective() and double_dual_map(A).is_equivariant())
        try:
            T = tensor_up(A, phi)
        except AlgebraError as exc:
            add(pre + "tensor", "A ⊗_R S is an S-module", False, error=exc.code)
            continue
        add(pre + "tensor_length", "ℓ_S(A⊗_R S) = ℓ_R(A)·ℓ_S(S/mS)",
            length(T.module) == length(A) * lS_mS,
            lhs=length(T.module), rhs=length(A) * lS_mS)
        add(pre + "tensor_dim", "dim_K(A⊗_R S) = m·dim_K A", T.module.dim == m * A.dim,
            dim=T.module.dim)
        orng = random.Random(f"{seed}/oracle/{name}")
        orank = oracles.tensor_relation_rank(A, phi, orng)
        add(pre + "tensor_oracle", "relation rank via permuted enumeration agrees",
            orank == T.relations.dim, oracle=orank, primary=T.relations.dim)
        add(pre + "unit_injective", "a ↦ a⊗1 is injective (faithful flatness)",
            T.unit.is_injective() and T.unit.is_equivariant())
        TR = restrict_scalars(T.module, phi)
        add(pre + "length_transport", "ℓ_R(A⊗_R S) = m·ℓ_R(A)",
            length(TR) == m * length(A), lhs=length(TR), rhs=m * length(A))

        def build(A=A, T=T):
            return induced_power_structure(A, phi, cert, T)
        try:
            ps = build()
        except RelationNotKilled as exc:
            add(pre + "relations_in_ker_h", "h(a⊗s) = (r_1 a, …, r_m a) is well defined", False,
                error=exc.code)
            continue
        except NotAModule as exc:
            add(pre + "induced_is_module", "A^m is an S-module under s∘a = h(s·g(a))", False,
                error=exc.code)
            continue
        add(pre + "relations_in_ker_h", "h(a⊗s) = (r_1 a, …, r_m a) is well defined", True)
        add(pre + "induced_is_module", "A^m is an S-module under s∘a = h(s·g(a))", True)
        add(pre + "gh_id", "A⊗_R S ≅ A^m: gh = id_{A⊗_R S}", ps.gh_is_identity())
        add(pre + "hg_id", "A⊗_R S ≅ A^m: hg = id_{A^m}", ps.hg_is_identity())
        add(pre + "h_S_linear", "h is an isomorphism of S-modules", ps.h_is_s_linear())
        add(pre + "r_structure_recovered", "φ(r)∘a = (ra_1, …, ra_m)", ps.recovers_r_structure())
        gamma = torsion_submodule(T.module, S.maximal_ideal)
        add(pre + "local_cohomology_h0", "H^0_n(A⊗_R S) = A⊗_R S ≅ (H^0_m A)^m",
            gamma.dim == T.module.dim and torsion_submodule(A, R.maximal_ideal).dim == A.dim
            and ps.h.is_bijective() and ps.h_is_s_linear())
        ext = ext_dims(S_over_R, A, depth, S_res)
        add(pre + "ext_vanishing", "Ext_R^i(S, A) = 0 for i > 0",
            all(e == 0 for e in ext[1:]), ext=ext)
        H = hom_rs(phi, A)
        add(pre + "hom_rs_dim", "Hom_R(S, A) ≅ A^m as K-spaces", H.module.dim == m * A.dim
            and ext[0] == H.module.dim, dim=H.module.dim)
        if m == 1:
            def rank_one(A=A, T=T, H=H, ps=ps):
                asc = ascend_rank_one(A, phi, cert)
                unit = ModuleMap(asc, T.module, T.unit.matrix)
                ev = ModuleMap(H.module, asc, H.evaluation.matrix)
                agree = all(a == b for a, b in zip(asc.actions, ps.carrier.actions))
                recovered = all(a == b for a, b in zip(restrict_scalars(asc, phi).actions, A.actions))
                ok = (unit.is_bijective() and unit.is_equivariant() and ev.is_bijective()
                      and ev.is_equivariant() and agree and recovered)
                return ok, {"unit_iso": unit.is_bijective(), "evaluation_iso": ev.is_bijective(),
                            "agrees_with_induced": agree}
            guarded(pre + "rank_one_ascent", "m = 1: a ↦ a⊗1 and f ↦ f(1) are S-isomorphisms",
                    rank_one)

    for name, B in s_modules.items():
        pre = f"S-module {name}: "
        BR = restrict_scalars(B, phi)
        lR_n = fS // fR
        add(pre + "length_product", "ℓ_R(B) = ℓ_S(B)·ℓ_R(S/n)",
            length(BR) == length(B) * lR_n, lhs=length(BR), rhs=length(B) * lR_n)
        try:
            validate_module(R, BR.actions)
            ok = is_artinian_by_melkersson(BR, R.maximal_ideal)
        except AlgebraError:
            ok = False
        add(pre + "restriction_artinian", "each Artinian S-module is Artinian over R", ok)
        add(pre + "double_dual", "M → M^∨∨ is an equivariant bijection",
            double_dual_map(B).is_bijective() and double_dual_map(B).is_equivariant())
        rep = compare_power_structures(B, phi, cert, seed=seed)
        witness_ok = rep.equal or (rep.witness is not None
                                   and rep.witness["usual"] != rep.witness["induced"])
        add(pre + "structure_comparison", "usual vs induced S-structure on B^m (equal when m = 1)",
            witness_ok and (rep.equal or m > 1), equal=rep.equal, dims=rep.dims,
            witness=_witness_json(S, rep.witness))
        if m == 1:
            def recover(B=B, BR=BR):
                asc = ascend_rank_one(BR, phi, cert)
                return all(a == b for a, b in zip(asc.actions, B.actions)), {}
            guarded(pre + "rank_one_descent", "m = 1: re-ascending B|R recovers B", recover)
    return checks


def _witness_json(S: LocalAlgebra, w):
    if w is None:
        return None
    F = S.field
    return {"s": S.format(w["s"]), "b": _fmt_vec(F, w["b"]),
            "usual": _fmt_vec(F, w["usual"]), "induced": _fmt_vec(F, w["induced"])}


def conjugated_verdict(B: ModulePresentation, phi: RingMap, cert: FlatCertificate, rng) -> bool:
    """Comparison verdict after a seeded change of basis of B (for basis-independence checks)."""
    F = B.field
    while True:
        P = Matrix(F, [[F.random(rng) for _ in range(B.dim)] for _ in range(B.dim)])
        if P.is_invertible() or B.dim == 0:
            break
    Bc = conjugate_module(B, P, inverse(P)) if B.dim else B
    return compare_power_structures(Bc, phi, cert).equal
