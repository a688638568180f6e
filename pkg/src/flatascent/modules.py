"""Finite-length modules over local algebras as action-matrix presentations.

A module over an algebra A of dimension n is a K-space of dimension d with one
d x d matrix per basis element of A.  Everything here has finite length, so it
is Artinian and Noetherian at once; torsion and attached-prime questions
degenerate accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DepthExceeded, NotAModule, NotAnIdeal, NotTorsion
from .exactla import (Matrix, QuotientSpace, Subspace, block_diag, hstack, kernel_basis, kron,
                      matmul, unit_vector, vstack)
from .rings import LocalAlgebra, RingMap, is_ideal


class ModulePresentation:
    __slots__ = ("algebra", "dim", "actions", "label")

    def __init__(self, algebra: LocalAlgebra, actions: Sequence[Matrix], dim: int | None = None,
                 label: str = ""):
        self.algebra = algebra
        self.actions = tuple(actions)
        self.dim = self.actions[0].rows if dim is None else dim
        self.label = label

    @property
    def field(self):
        return self.algebra.field

    def act(self, r) -> Matrix:
        """Matrix of the algebra element r acting on the module."""
        F, d = self.field, self.dim
        p = F.p
        acc = [[0] * d for _ in range(d)]
        for c, rho in zip(r, self.actions):
            if c:
                for row, src in zip(acc, rho.data):
                    for k, v in enumerate(src):
                        if v:
                            row[k] += c * v
        data = tuple(tuple((v % p) if p else F(v) for v in row) for row in acc)
        return Matrix._raw(F, data, d)

    def basis(self, i):
        return unit_vector(self.field, self.dim, i)

    def __repr__(self):
        return f"ModulePresentation({self.label or '?'}, dim={self.dim} over dim-{self.algebra.dim} algebra)"

    def same_structure(self, other: "ModulePresentation") -> bool:
        return (self.algebra is other.algebra and self.dim == other.dim
                and all(a == b for a, b in zip(self.actions, other.actions)))


def validate_module(A: LocalAlgebra, actions: Sequence[Matrix], label: str = "") -> ModulePresentation:
    """Check rho(1) = I and rho(e_i) rho(e_j) = rho(e_i e_j) exactly."""
    actions = list(actions)
    if len(actions) != A.dim:
        raise NotAModule(f"expected {A.dim} action matrices, got {len(actions)}")
    d = actions[0].rows if actions else 0
    for k, m in enumerate(actions):
        if m.shape != (d, d) or m.field != A.field:
            raise NotAModule(f"action {k} is not a {d}x{d} matrix over {A.field}", index=(k,))
    M = ModulePresentation(A, actions, d, label)
    if M.act(A.unit) != Matrix.identity(A.field, d):
        raise NotAModule("the unit does not act as the identity")
    for i in range(A.dim):
        for j in range(A.dim):
            if matmul(actions[i], actions[j]) != M.act(A.presentation.mul[i][j]):
                raise NotAModule(f"rho(e_{i}) rho(e_{j}) != rho(e_{i} e_{j})", index=(i, j))
    return M


@dataclass(eq=False)
class ModuleMap:
    source: ModulePresentation
    target: ModulePresentation
    matrix: Matrix

    def __call__(self, v):
        return self.matrix.apply(v)

    def is_equivariant(self) -> bool:
        return all(matmul(self.matrix, a) == matmul(b, self.matrix)
                   for a, b in zip(self.source.actions, self.target.actions))

    def rank(self):
        return self.matrix.rank()

    def is_injective(self):
        return self.rank() == self.source.dim

    def is_surjective(self):
        return self.rank() == self.target.dim

    def is_bijective(self):
        return self.source.dim == self.target.dim and self.is_injective()

    def compose(self, first: "ModuleMap") -> "ModuleMap":
        """self ∘ first."""
        return ModuleMap(first.source, self.target, matmul(self.matrix, first.matrix))


# ----------------------------------------------------------- constructors


def regular_module(A: LocalAlgebra) -> ModulePresentation:
    return ModulePresentation(A, A.left_basis(), A.dim, "regular")


def zero_module(A: LocalAlgebra) -> ModulePresentation:
    return ModulePresentation(A, [Matrix.zeros(A.field, 0, 0)] * A.dim, 0, "zero")


def direct_sum(mods: Sequence[ModulePresentation]) -> ModulePresentation:
    A = mods[0].algebra
    F = A.field
    acts = [block_diag(F, [M.actions[i] for M in mods]) for i in range(A.dim)]
    return ModulePresentation(A, acts, sum(M.dim for M in mods), "sum")


def power_module(M: ModulePresentation, m: int) -> ModulePresentation:
    """M^m with the componentwise structure."""
    if m == 0:
        return zero_module(M.algebra)
    return direct_sum([M] * m)


def free_module(A: LocalAlgebra, b: int) -> ModulePresentation:
    return power_module(regular_module(A), b)


def submodule_generated(M: ModulePresentation, vectors) -> Subspace:
    vecs = [rho.apply(v) for v in vectors for rho in M.actions]
    return Subspace(M.field, M.dim, vecs)


def is_submodule(M: ModulePresentation, U: Subspace) -> bool:
    return all(U.contains(rho.apply(v)) for v in U.vectors() for rho in M.actions)


def _restricted_actions(U: Subspace, mats):
    F = U.field
    out = []
    for rho in mats:
        cols = [U.coordinates(rho.apply(u)) for u in U.vectors()]
        out.append(Matrix.from_columns(F, U.dim, cols))
    return out


def submodule(M: ModulePresentation, U: Subspace):
    """U as a module (basis = U's RREF rows) and its inclusion into M."""
    if not is_submodule(M, U):
        raise NotAModule("subspace is not stable under the action")
    sub = ModulePresentation(M.algebra, _restricted_actions(U, M.actions), U.dim, "sub")
    incl = Matrix.from_columns(M.field, M.dim, U.vectors())
    return sub, ModuleMap(sub, M, incl)


def quotient_module(M: ModulePresentation, U: Subspace):
    """M/U with the canonical-section basis and the projection M -> M/U."""
    if not is_submodule(M, U):
        raise NotAModule("subspace is not stable under the action")
    q = QuotientSpace(M.dim, U)
    acts = [matmul(matmul(q.projection, rho), q.section) for rho in M.actions]
    Q = ModulePresentation(M.algebra, acts, q.dim, "quotient")
    return Q, ModuleMap(M, Q, q.projection)


def ideal_times(M: ModulePresentation, I: Subspace) -> Subspace:
    """The submodule I·M."""
    return Subspace(M.field, M.dim,
                    [M.act(b).apply(M.basis(j)) for b in I.vectors() for j in range(M.dim)])


def cyclic_module(A: LocalAlgebra, I: Subspace) -> ModulePresentation:
    """A/I for an ideal I."""
    Q, _ = quotient_module(regular_module(A), I)
    Q.label = "cyclic"
    return Q


def residue_module(A: LocalAlgebra) -> ModulePresentation:
    k = cyclic_module(A, A.maximal_ideal)
    k.label = "k"
    return k


def conjugate_module(M: ModulePresentation, P: Matrix, Pinv: Matrix) -> ModulePresentation:
    """The same module in the basis given by the columns of P."""
    acts = [matmul(matmul(Pinv, rho), P) for rho in M.actions]
    return ModulePresentation(M.algebra, acts, M.dim, M.label)


def random_module(A: LocalAlgebra, rng, max_rank: int = 2, max_relations: int = 2) -> ModulePresentation:
    """Quotient of a small free module by a random submodule inside m·F (so it is nonzero)."""
    F = A.field
    b = rng.randint(1, max_rank)
    free = free_module(A, b)
    mF = ideal_times(free, A.maximal_ideal)
    rels = []
    for _ in range(rng.randint(1, max_relations)):
        coeffs = [F.random(rng) for _ in range(mF.dim)]
        rels.append(mF.combine(coeffs))
    M, _ = quotient_module(free, submodule_generated(free, rels))
    M.label = f"random(rank={b})"
    return M


# ---------------------------------------------------------------- lengths


def length(M: ModulePresentation) -> int:
    """Composition length: dim_K M / dim_K k."""
    f = M.algebra.residue.field_dim
    if M.dim % f:
        raise NotAModule(f"dimension {M.dim} is not a multiple of the residue degree {f}")
    return M.dim // f


def composition_length(M: ModulePresentation) -> int:
    """Length by walking a composition series: quotient by a simple socle submodule until zero."""
    A = M.algebra
    steps = 0
    while M.dim:
        soc = colon_submodule(M, A.maximal_ideal)
        v = soc.vectors()[0]
        simple = submodule_generated(M, [v])
        M, _ = quotient_module(M, simple)
        steps += 1
    return steps


def colon_submodule(M: ModulePresentation, I: Subspace) -> Subspace:
    """(0 :_M I)."""
    A = M.algebra
    if not is_ideal(A.presentation, I):
        raise NotAnIdeal("I is not an ideal")
    if I.dim == 0:
        return Subspace.full(M.field, M.dim)
    stacked = vstack(M.field, [M.act(b) for b in I.vectors()], cols=M.dim)
    return kernel_basis(stacked)


def socle(M: ModulePresentation) -> Subspace:
    return colon_submodule(M, M.algebra.maximal_ideal)


def annihilator(M: ModulePresentation) -> Subspace:
    """Ann(M) as the kernel of A -> End_K(M)."""
    A = M.algebra
    cols = [sum(rho.data, ()) for rho in M.actions]
    return kernel_basis(Matrix.from_columns(A.field, M.dim * M.dim, cols))


def torsion_index(M: ModulePresentation, I: Subspace) -> int:
    """Least t with I^t M = 0."""
    if not is_ideal(M.algebra.presentation, I):
        raise NotAnIdeal("I is not an ideal")
    current = Subspace.full(M.field, M.dim)
    t = 0
    while current.dim:
        nxt = Subspace(M.field, M.dim, [M.act(b).apply(v) for b in I.vectors() for v in current.vectors()])
        if nxt.dim == current.dim:
            raise NotTorsion("I^t M stabilises at a nonzero submodule")
        current = nxt
        t += 1
    return t


def torsion_submodule(M: ModulePresentation, I: Subspace) -> Subspace:
    """Gamma_I(M), the union of the (0 :_M I^t)."""
    from .rings import ideal_power
    A = M.algebra
    best = Subspace.zero(M.field, M.dim)
    for t in range(1, A.dim + 2):
        cur = colon_submodule(M, ideal_power(A, I, t))
        if cur == best:
            break
        best = cur
    return best


def is_artinian_by_melkersson(M: ModulePresentation, I: Subspace) -> bool:
    """I-torsion with Artinian colon (0 :_M I); the colon is finite-dimensional, hence Artinian."""
    try:
        torsion_index(M, I)
    except NotTorsion:
        return False
    return colon_submodule(M, I).dim <= M.dim


def attached_primes(M: ModulePresentation) -> list:
    """Empty for M = 0, otherwise the single maximal ideal."""
    if M.dim == 0:
        return []
    m = M.algebra.maximal_ideal
    if not annihilator(M).is_subspace_of(m):
        raise NotAModule("annihilator of a nonzero module escapes the maximal ideal")
    return [m]


# ---------------------------------------------------- change of rings


def restrict_scalars(B: ModulePresentation, phi: RingMap) -> ModulePresentation:
    """View an S-module as an R-module through phi."""
    if B.algebra is not phi.target:
        raise ValueError("module is not over the target of phi")
    acts = [B.act(img) for img in phi.images()]
    return ModulePresentation(phi.source, acts, B.dim, f"{B.label}|R")


@dataclass(eq=False)
class TensorUp:
    """A ⊗_R S as a quotient of A ⊗_K S (index j*dim S + l for a_j ⊗ s_l)."""
    base: ModulePresentation
    phi: RingMap
    module: ModulePresentation
    quotient: QuotientSpace
    relations: Subspace
    unit: ModuleMap


def tensor_relation_generators(A: ModulePresentation, phi: RingMap):
    """All (r a_j) ⊗ s_l - a_j ⊗ (phi(r) s_l) for basis r, a_j, s_l."""
    S = phi.target
    F = S.field
    Is = Matrix.identity(F, S.dim)
    Ia = Matrix.identity(F, A.dim)
    gens = []
    for rho, img in zip(A.actions, phi.images()):
        D = kron(rho, Is) - kron(Ia, S.left(img))
        gens.extend(D.columns())
    return gens


def tensor_up(A: ModulePresentation, phi: RingMap, check: bool = True) -> TensorUp:
    if A.algebra is not phi.source:
        raise ValueError("module is not over the source of phi")
    S = phi.target
    F = S.field
    n = A.dim * S.dim
    rel = Subspace(F, n, tensor_relation_generators(A, phi))
    q = QuotientSpace(n, rel)
    Ia = Matrix.identity(F, A.dim)
    acts = [q.induced(kron(Ia, L)) for L in S.left_basis()]
    module = (validate_module(S, acts, "A⊗S") if check
              else ModulePresentation(S, acts, q.dim, "A⊗S"))
    one = Matrix.from_columns(F, S.dim, [S.unit])
    unit = ModuleMap(A, restrict_scalars(module, phi), matmul(q.projection, kron(Ia, one)))
    return TensorUp(A, phi, module, q, rel, unit)


@dataclass(eq=False)
class HomRS:
    """Hom_R(S, A) with its S-structure (s·T)(x) = T(sx); vec index p*dim S + q."""
    base: ModulePresentation
    phi: RingMap
    module: ModulePresentation
    maps: Subspace
    evaluation: ModuleMap


def hom_rs(phi: RingMap, A: ModulePresentation) -> HomRS:
    S = phi.target
    F = S.field
    a, s = A.dim, S.dim
    Ia, Is = Matrix.identity(F, a), Matrix.identity(F, s)
    eqs = [kron(Ia, S.left(img).T) - kron(rho, Is) for rho, img in zip(A.actions, phi.images())]
    maps = kernel_basis(vstack(F, eqs, cols=a * s))
    acts = _restricted_actions(maps, [kron(Ia, L.T) for L in S.left_basis()])
    module = validate_module(S, acts, "Hom_R(S,A)")
    unit_row = Matrix(F, [S.unit])
    ev = matmul(kron(Ia, unit_row), Matrix.from_columns(F, a * s, maps.vectors()))
    evaluation = ModuleMap(restrict_scalars(module, phi), A, ev)
    return HomRS(A, phi, module, maps, evaluation)


def equivariant_maps(M: ModulePresentation, N: ModulePresentation) -> Subspace:
    """Hom_A(M, N) inside Hom_K(M, N), row-major vectorised (p*dim M + q)."""
    F = M.field
    Im, In = Matrix.identity(F, M.dim), Matrix.identity(F, N.dim)
    eqs = [kron(In, rm.T) - kron(rn, Im) for rm, rn in zip(M.actions, N.actions)]
    return kernel_basis(vstack(F, eqs, cols=M.dim * N.dim))


def hom_module(M: ModulePresentation, N: ModulePresentation) -> ModulePresentation:
    """Hom_A(M, N) with (r·T) = rho_N(r) T."""
    if M.algebra is not N.algebra:
        raise ValueError("modules over different algebras")
    maps = equivariant_maps(M, N)
    Im = Matrix.identity(M.field, M.dim)
    acts = _restricted_actions(maps, [kron(rn, Im) for rn in N.actions])
    return ModulePresentation(M.algebra, acts, maps.dim, "Hom")


def matlis_dual(M: ModulePresentation) -> ModulePresentation:
    """Hom_K(M, K) in the dual basis: (r·T)(x) = T(rx), so rho^vee(r) = rho(r)^T."""
    return ModulePresentation(M.algebra, [rho.T for rho in M.actions], M.dim, f"{M.label}^v")


def double_dual_map(M: ModulePresentation) -> ModuleMap:
    """Evaluation M -> M^vv, x -> (T -> T(x)), written in the double-dual basis."""
    D = matlis_dual(M)
    DD = matlis_dual(D)
    functionals = Matrix.identity(M.field, M.dim)  # dual basis T_j as rows
    cols = [functionals.apply(M.basis(i)) for i in range(M.dim)]
    return ModuleMap(M, DD, Matrix.from_columns(M.field, M.dim, cols))


# ---------------------------------------------------- resolutions and Ext


@dataclass(eq=False)
class Resolution:
    """F_n -> ... -> F_0 -> M with F_i = R^{b_i}.

    ``differentials[i-1]`` is d_i : F_i -> F_{i-1} as a b_{i-1} x b_i table of
    algebra elements; ``kmaps`` holds the same maps as K-matrices.
    """
    module: ModulePresentation
    ranks: list
    differentials: list
    kmaps: list
    cover: Matrix


def minimal_generators(M: ModulePresentation, U: Subspace | None = None):
    """Canonical lifts of a k-basis of U/mU (U defaults to M)."""
    A = M.algebra
    if U is None:
        U = Subspace.full(M.field, M.dim)
    span = Subspace(M.field, M.dim,
                    [M.act(b).apply(u) for b in A.maximal_ideal.vectors() for u in U.vectors()])
    gens = []
    for v in U.vectors():
        if span.contains(v):
            continue
        gens.append(v)
        span = span + submodule_generated(M, [v])
    return gens


def _free_map(A: LocalAlgebra, target: ModulePresentation, images) -> Matrix:
    """K-matrix of R^b -> target sending the j-th free generator to images[j]."""
    cols = []
    for g in images:
        for k in range(A.dim):
            cols.append(target.actions[k].apply(g))
    return Matrix.from_columns(target.field, target.dim, cols) if cols else Matrix.zeros(
        target.field, target.dim, 0)


def minimal_free_resolution(M: ModulePresentation, n: int) -> Resolution:
    A = M.algebra
    gens = minimal_generators(M)
    cover = _free_map(A, M, gens)
    ranks = [len(gens)]
    diffs, kmaps = [], []
    prev_map = cover
    for _ in range(n):
        b = ranks[-1]
        Fprev = free_module(A, b) if b else zero_module(A)
        ker = kernel_basis(prev_map) if b else Subspace.zero(A.field, 0)
        kgens = minimal_generators(Fprev, ker) if ker.dim else []
        for g in kgens:
            if not ideal_times(Fprev, A.maximal_ideal).contains(g):
                raise NotAModule("resolution is not minimal")
        table = [[g[j * A.dim:(j + 1) * A.dim] for g in kgens] for j in range(b)]
        D = _free_map(A, Fprev, kgens)
        diffs.append(table)
        kmaps.append(D)
        ranks.append(len(kgens))
        prev_map = D
    return Resolution(M, ranks, diffs, kmaps, cover)


def _coboundary(N: ModulePresentation, table, b_src: int, b_tgt: int) -> Matrix:
    """Hom(d, N): N^{b_src} -> N^{b_tgt} where d : R^{b_tgt} -> R^{b_src}."""
    F = N.field
    blocks = []
    for lp in range(b_tgt):
        row = [N.act(table[l][lp]) for l in range(b_src)]
        blocks.append(hstack(F, row, rows=N.dim) if row else Matrix.zeros(F, N.dim, 0))
    return vstack(F, blocks, cols=b_src * N.dim)


def ext_dims(M: ModulePresentation, N: ModulePresentation, depth: int = 3,
             resolution: Resolution | None = None) -> list:
    """[dim_K Ext^i(M, N) for i = 0..depth]."""
    res = resolution or minimal_free_resolution(M, depth + 1)
    if len(res.differentials) < depth + 1:
        raise DepthExceeded("resolution too short")
    out = []
    prev_rank = 0
    for i in range(depth + 1):
        bi, bn = res.ranks[i], res.ranks[i + 1]
        if bi == 0:
            out.append(0)
            prev_rank = 0
            continue
        delta = _coboundary(N, res.differentials[i], bi, bn)
        r = delta.rank() if bn else 0
        out.append(bi * N.dim - r - prev_rank)
        prev_rank = r
    return out


def ext_dim(M: ModulePresentation, N: ModulePresentation, i: int, depth: int = 3,
            resolution: Resolution | None = None) -> int:
    if i < 0:
        raise ValueError("negative Ext index")
    if i > depth:
        raise DepthExceeded(f"Ext^{i} requested but resolution depth is {depth}")
    return ext_dims(M, N, depth, resolution)[i]
