"""Finite-dimensional commutative local algebras given by structure constants.

An algebra of dimension n over K is a table ``mul[i][j]`` of coefficient
vectors with ``e_i * e_j = sum_k mul[i][j][k] e_k`` and a unit vector.  Local
algebras carry their maximal ideal, residue field data, the nilpotency index
of the maximal ideal and a note on how localness was established.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import poly
from .errors import (BadUnit, InfiniteColength, LocalnessUndecided, NoSolution, NotAnIdeal,
                     NotAssociative, NotCommutative, NotFree, NotLocal, NotMonic,
                     NotMultiplicative, NotUnital, ReducibleFactor, ResidueNotBase)
from .exactla import (Field, Matrix, QuotientSpace, Subspace, inverse, kernel_basis, matmul,
                      solve, unit_vector, vec_add, vec_scale)


class AlgebraPresentation:
    """Raw structure-constant data; nothing is checked here."""

    def __init__(self, field: Field, dim: int, unit: Sequence, mul, provenance: str | None = None,
                 labels: Sequence[str] | None = None):
        self.field = field
        self.dim = dim
        self.unit = tuple(field(x) for x in unit)
        self.mul = tuple(tuple(tuple(field(x) for x in v) for v in row) for row in mul)
        if len(self.unit) != dim or len(self.mul) != dim:
            raise ValueError("unit/mul size does not match dim")
        for row in self.mul:
            if len(row) != dim or any(len(v) != dim for v in row):
                raise ValueError("mul must be a dim x dim table of length-dim vectors")
        self.provenance = provenance
        self.labels = tuple(labels) if labels is not None else None
        self._left = None

    def basis(self, i):
        return unit_vector(self.field, self.dim, i)

    def left_basis(self):
        """Left multiplication matrices L_i, column j = e_i * e_j."""
        if self._left is None:
            self._left = tuple(Matrix.from_columns(self.field, self.dim, self.mul[i])
                               for i in range(self.dim))
        return self._left

    def left(self, x) -> Matrix:
        """Matrix of multiplication by the element x."""
        n, p = self.dim, self.field.p
        acc = [[0] * n for _ in range(n)]
        for c, L in zip(x, self.left_basis()):
            if c:
                for r, lr in zip(acc, L.data):
                    for k, v in enumerate(lr):
                        if v:
                            r[k] += c * v
        if p:
            data = tuple(tuple(v % p for v in r) for r in acc)
        else:
            data = tuple(tuple(Fraction(v) for v in r) for r in acc)
        return Matrix._raw(self.field, data, n)

    def multiply(self, x, y):
        p = self.field.p
        out = [0] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            row = self.mul[i]
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(row[j]):
                    if c:
                        out[k] += ab * c
        return tuple(v % p for v in out) if p else tuple(Fraction(v) for v in out)

    def power(self, x, e: int):
        result = self.unit
        base = tuple(x)
        while e:
            if e & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            e >>= 1
        return result

    def eval_poly(self, f, x):
        acc = tuple(self.field.zero for _ in range(self.dim))
        for c in reversed(f):
            acc = vec_add(self.field, self.multiply(acc, x), vec_scale(self.field, c, self.unit))
        return acc

    def to_json(self):
        F = self.field
        d = {"dim": self.dim, "unit": [F.fmt(x) for x in self.unit],
             "mul": [[[F.fmt(x) for x in v] for v in row] for row in self.mul]}
        if self.provenance:
            d["provenance"] = self.provenance
        if self.labels:
            d["labels"] = list(self.labels)
        return d


@dataclass(frozen=True)
class ResidueData:
    quotient: QuotientSpace
    field_dim: int
    mul: tuple
    certificate: str


@dataclass(eq=False)
class LocalAlgebra:
    presentation: AlgebraPresentation
    maximal_ideal: Subspace
    residue: ResidueData
    nilpotency_index: int
    local_certificate: str

    @property
    def field(self):
        return self.presentation.field

    @property
    def dim(self):
        return self.presentation.dim

    @property
    def unit(self):
        return self.presentation.unit

    @property
    def labels(self):
        return self.presentation.labels or tuple(f"e{i}" for i in range(self.dim))

    def basis(self, i):
        return self.presentation.basis(i)

    def multiply(self, x, y):
        return self.presentation.multiply(x, y)

    def left(self, x):
        return self.presentation.left(x)

    def left_basis(self):
        return self.presentation.left_basis()

    def element(self, coeffs):
        return tuple(self.field(c) for c in coeffs)

    def format(self, x) -> str:
        return format_element(self.field, self.labels, x)


def format_element(F: Field, labels, x) -> str:
    """Render an element as a sum of labelled basis terms, e.g. ``1+3√2``."""
    terms = []
    for c, lab in zip(x, labels):
        if not c:
            continue
        if F.p:
            cs = str(c)
            neg = False
        else:
            neg = c < 0
            cs = str(abs(c))
        if lab == "1":
            t = cs
        elif cs == "1":
            t = lab
        elif "/" in cs:
            t = f"({cs}){lab}"
        else:
            t = f"{cs}{lab}"
        terms.append(("-" if neg else "+") + t)
    if not terms:
        return "0"
    s = "".join(terms)
    return s[1:] if s[0] == "+" else s


# ------------------------------------------------------------ validation


def _ideal_generated(pres: AlgebraPresentation, gens) -> Subspace:
    vecs = [pres.multiply(g, pres.basis(j)) for g in gens for j in range(pres.dim)]
    return Subspace(pres.field, pres.dim, vecs)


def is_ideal(pres: AlgebraPresentation, I: Subspace) -> bool:
    return all(I.contains(pres.multiply(b, pres.basis(j)))
               for b in I.vectors() for j in range(pres.dim))


def _is_nilpotent_matrix(L: Matrix) -> bool:
    P = L
    for _ in range(max(L.rows - 1, 0)):
        if P.is_zero():
            return True
        P = matmul(P, L)
    return P.is_zero()


def _frobenius(pres: AlgebraPresentation) -> Matrix:
    p = pres.field.p
    return Matrix.from_columns(pres.field, pres.dim,
                               [pres.power(pres.basis(j), p) for j in range(pres.dim)])


def nilradical(pres: AlgebraPresentation) -> Subspace:
    """Nilradical: trace-form kernel in characteristic 0, Frobenius-power kernel in char p."""
    F, n = pres.field, pres.dim
    if n == 0:
        return Subspace.zero(F, 0)
    if F.p:
        fr = _frobenius(pres)
        P, e = fr, F.p
        while e < n:
            P = matmul(P, fr)
            e *= F.p
        return kernel_basis(P)
    traces = [sum(L.data[k][k] for k in range(n)) for L in pres.left_basis()]
    form = Matrix(F, [[sum(c * t for c, t in zip(pres.mul[i][j], traces)) for j in range(n)]
                      for i in range(n)])
    return kernel_basis(form)


def _quotient_algebra(pres: AlgebraPresentation, I: Subspace):
    q = QuotientSpace(pres.dim, I)
    sec = q.section.columns()
    table = tuple(tuple(q.project(pres.multiply(a, b)) for b in sec) for a in sec)
    return q, AlgebraPresentation(pres.field, q.dim, q.project(pres.unit), table)


def minimal_polynomial(pres: AlgebraPresentation, y):
    """Monic minimal polynomial of y via the Krylov sequence 1, y, y^2, ..."""
    F = pres.field
    powers = [pres.unit]
    while True:
        nxt = pres.multiply(powers[-1], y)
        M = Matrix.from_columns(F, pres.dim, powers)
        try:
            c = solve(M, nxt)
        except NoSolution:
            powers.append(nxt)
            continue
        return [(-a) % F.p if F.p else -a for a in c] + [F.one]


def decide_field(pres: AlgebraPresentation, seed: int = 0, trials: int = 64) -> str:
    """Certify that a commutative algebra is a field, or raise NotLocal/LocalnessUndecided."""
    F, n = pres.field, pres.dim
    if n == 0:
        raise NotLocal("the zero ring is not local")
    if nilradical(pres).dim:
        raise NotLocal("quotient by the maximal ideal has nilpotents")
    if F.p:
        fixed = kernel_basis(_frobenius(pres) - Matrix.identity(F, n))
        if fixed.dim != 1:
            raise NotLocal(f"x^p = x has a {fixed.dim}-dimensional solution space over F_{F.p}",
                           witness=[v for v in fixed.vectors() if not _is_scalar(pres, v)][:1])
        return f"Frobenius fixed space is F_{F.p}"
    if n == 1:
        return "one-dimensional"
    rng = random.Random(seed)
    candidates = [pres.basis(i) for i in range(n)]
    candidates += [tuple(F(rng.randint(-3, 3)) for _ in range(n)) for _ in range(trials)]
    for y in candidates:
        mu = minimal_polynomial(pres, y)
        if poly.deg(mu) > 1:
            roots = poly.rational_roots(mu)
            if roots:
                g = [-roots[0], F.one]
                h, _ = poly.divmod_(F, mu, g)
                _, u, _ = poly.xgcd(F, g, h)
                e = pres.eval_poly(poly.mul(F, u, g), y)
                raise NotLocal(f"nontrivial idempotent from minimal polynomial split at {roots[0]}",
                               witness=e)
        if poly.deg(mu) == n:
            ok, reason = poly.irreducibility_over_q(mu)
            if ok:
                return f"primitive element with irreducible minimal polynomial ({reason})"
    raise LocalnessUndecided("no primitive element certificate or idempotent found")


def _is_scalar(pres, v):
    F = pres.field
    k = next((i for i, c in enumerate(pres.unit) if c), None)
    return k is not None and vec_scale(F, v[k] * F.inv(pres.unit[k]), pres.unit) == tuple(v)


def check_presentation(pres: AlgebraPresentation):
    """Commutativity, associativity and unit laws, exactly."""
    n = pres.dim
    for i in range(n):
        for j in range(i + 1, n):
            if pres.mul[i][j] != pres.mul[j][i]:
                raise NotCommutative(j, i)
    for i in range(n):
        for j in range(n):
            eij = pres.mul[i][j]
            for k in range(n):
                if pres.multiply(eij, pres.basis(k)) != pres.multiply(pres.basis(i), pres.mul[j][k]):
                    raise NotAssociative(i, j, k)
    for i in range(n):
        if pres.multiply(pres.unit, pres.basis(i)) != pres.basis(i):
            raise BadUnit(f"unit * e_{i} != e_{i}")


def validate_algebra(pres: AlgebraPresentation, maximal_ideal: Subspace | None = None,
                     certificate: str | None = None) -> LocalAlgebra:
    """Validate a presentation and certify it local.

    With ``maximal_ideal`` given it must be a nil ideal; otherwise the
    nilradical is computed.  The quotient is then certified to be a field
    unless ``certificate`` (e.g. ``"by-construction"``) vouches for it.
    """
    check_presentation(pres)
    n = pres.dim
    if n == 0:
        raise NotLocal("the zero ring is not local")
    if maximal_ideal is None:
        m = nilradical(pres)
    else:
        m = maximal_ideal
        if m.ambient_dim != n:
            raise NotAnIdeal("maximal ideal lives in the wrong space")
        if not is_ideal(pres, m):
            raise NotAnIdeal("asserted maximal ideal is not closed under multiplication")
        for v in m.vectors():
            if not _is_nilpotent_matrix(pres.left(v)):
                raise NotLocal("asserted maximal ideal contains a non-nilpotent element", witness=v)
    q, quot = _quotient_algebra(pres, m)
    if certificate is None:
        field_cert = decide_field(quot)
        certificate = "verified"
    else:
        field_cert = certificate
    residue = ResidueData(quotient=q, field_dim=q.dim, mul=quot.mul, certificate=field_cert)
    t0 = 1
    power = m
    while power.dim:
        power = _product(pres, power, m)
        t0 += 1
    return LocalAlgebra(pres, m, residue, t0, certificate)


def _product(pres, I: Subspace, J: Subspace) -> Subspace:
    return Subspace(pres.field, pres.dim,
                    [pres.multiply(a, b) for a in I.vectors() for b in J.vectors()])


def radical_and_residue(A: LocalAlgebra) -> ResidueData:
    return A.residue


def ideal_power(A: LocalAlgebra, I: Subspace, t: int) -> Subspace:
    if t < 0:
        raise ValueError("t must be nonnegative")
    if not is_ideal(A.presentation, I):
        raise NotAnIdeal("not an ideal")
    out = Subspace.full(A.field, A.dim)
    for _ in range(t):
        out = _product(A.presentation, out, I)
    return out


def power_of_maximal(A: LocalAlgebra, t: int) -> Subspace:
    return ideal_power(A, A.maximal_ideal, t)


# ----------------------------------------------------------- constructors


def _univariate_presentation(K: Field, g, symbol: str):
    N = poly.deg(g)
    F = K

    def reduce_mono(e):
        return poly.divmod_(F, [F.zero] * e + [F.one], g)[1]

    mul = []
    for i in range(N):
        row = []
        for j in range(N):
            r = reduce_mono(i + j)
            row.append(tuple(r) + (F.zero,) * (N - len(r)))
        mul.append(row)
    labels = ["1", symbol] + [f"{symbol}^{k}" for k in range(2, N)]
    unit = unit_vector(F, N, 0)
    return AlgebraPresentation(F, N, unit, mul, labels=labels[:N])


def make_univariate_quotient(K: Field, f, e: int = 1, symbol: str = "x") -> LocalAlgebra:
    """K[x]/(f^e) for monic irreducible f (coefficients in ascending degree)."""
    f = poly.trim(K(c) for c in f)
    if poly.deg(f) < 1 or f[-1] != K.one:
        raise NotMonic("f must be monic of degree >= 1")
    if e < 1:
        raise ValueError("exponent must be >= 1")
    ok, reason = poly.is_irreducible(K, f)
    if ok is False:
        raise ReducibleFactor(f"f is reducible ({reason})")
    g = poly.power(K, f, e)
    pres = _univariate_presentation(K, g, symbol)
    cert = "irreducible" if ok else "asserted irreducible"
    pres.provenance = f"univariate f={[K.fmt(c) for c in f]} e={e} ({cert}: {reason})"
    N = pres.dim
    fvec = tuple(f) + (K.zero,) * (N - len(f))
    m = _ideal_generated(pres, [fvec]) if e > 1 else Subspace.zero(K, N)
    return validate_algebra(pres, m, certificate="by-construction")


def _mono_label(names, a):
    parts = []
    for nm, k in zip(names, a):
        if k == 1:
            parts.append(nm)
        elif k > 1:
            parts.append(f"{nm}^{k}")
    return "".join(parts) or "1"


def make_monomial_quotient(K: Field, d: int, gens, names: Sequence[str] | None = None) -> LocalAlgebra:
    """K[x_1..x_d]/(monomials) with the standard monomial basis in graded order."""
    gens = [tuple(g) for g in gens]
    if any(len(g) != d for g in gens):
        raise ValueError("exponent vectors must have length d")
    if any(sum(g) == 0 for g in gens):
        raise NotLocal("the unit ideal gives the zero ring")
    bounds = []
    for v in range(d):
        pure = [g[v] for g in gens if g[v] > 0 and all(g[w] == 0 for w in range(d) if w != v)]
        if not pure:
            raise InfiniteColength(f"no pure power of variable {v} among the generators")
        bounds.append(min(pure))

    def in_ideal(a):
        return any(all(x >= y for x, y in zip(a, g)) for g in gens)

    monos = [a for a in product(*(range(b) for b in bounds)) if not in_ideal(a)]
    monos.sort(key=lambda a: (sum(a), tuple(-x for x in a)))
    index = {a: i for i, a in enumerate(monos)}
    n = len(monos)
    mul = []
    for a in monos:
        row = []
        for b in monos:
            c = tuple(x + y for x, y in zip(a, b))
            row.append(unit_vector(K, n, index[c]) if c in index else (K.zero,) * n)
        mul.append(row)
    if names is None:
        names = "xyzw"[:d] if d <= 4 else [f"x{i + 1}" for i in range(d)]
    pres = AlgebraPresentation(K, n, unit_vector(K, n, 0), mul,
                               provenance=f"monomial d={d} gens={[list(g) for g in gens]}",
                               labels=[_mono_label(names, a) for a in monos])
    m = Subspace(K, n, [unit_vector(K, n, i) for i in range(1, n)])
    return validate_algebra(pres, m, certificate="by-construction")


def extend_by_field(R: LocalAlgebra, g, symbol: str = "y"):
    """S = (K[y]/(g)) ⊗_K R with the inclusion r -> 1 ⊗ r."""
    if R.residue.field_dim != 1:
        raise ResidueNotBase("the residue field of R is larger than K")
    K = R.field
    fib = make_univariate_quotient(K, g, 1, symbol=symbol)
    a, b = fib.dim, R.dim
    cF, cR = fib.presentation.mul, R.presentation.mul
    p = K.p
    mul = []
    for i1 in range(a):
        for j1 in range(b):
            row = []
            for i2 in range(a):
                for j2 in range(b):
                    u, v = cF[i1][i2], cR[j1][j2]
                    row.append(tuple((x * y) % p if p else x * y for x in u for y in v))
            mul.append(row)
    unit = tuple((x * y) % p if p else x * y for x in fib.unit for y in R.unit)
    labels = []
    for lf in fib.labels:
        for lr in R.labels:
            labels.append(lf if lr == "1" else lr if lf == "1" else f"{lf}·{lr}")
    pres = AlgebraPresentation(K, a * b, unit, mul,
                               provenance=f"extend_by_field({fib.presentation.provenance})",
                               labels=labels)
    def tensor(u, v):
        return tuple((x * y) % p if p else x * y for x in u for y in v)

    m = Subspace(K, a * b, [tensor(fib.basis(i), v)
                            for i in range(a) for v in R.maximal_ideal.vectors()])
    S = validate_algebra(pres, m, certificate="by-construction")
    phi = Matrix.from_columns(K, a * b, [tensor(fib.unit, R.basis(j)) for j in range(b)])
    return S, validate_ring_map(R, S, phi)


def change_basis(pres: AlgebraPresentation, P: Matrix) -> AlgebraPresentation:
    """Same algebra in the basis given by the columns of the invertible matrix P."""
    Pinv = inverse(P)
    cols = P.columns()
    mul = [[Pinv.apply(pres.multiply(a, b)) for b in cols] for a in cols]
    return AlgebraPresentation(pres.field, pres.dim, Pinv.apply(pres.unit), mul,
                               provenance="change_basis")


# -------------------------------------------------------------- ring maps


@dataclass(eq=False)
class RingMap:
    source: LocalAlgebra
    target: LocalAlgebra
    matrix: Matrix

    def __call__(self, r):
        return self.matrix.apply(r)

    def images(self):
        return self.matrix.columns()


def validate_ring_map(R: LocalAlgebra, S: LocalAlgebra, M: Matrix) -> RingMap:
    if M.shape != (S.dim, R.dim):
        raise ValueError(f"map matrix must be {S.dim}x{R.dim}, got {M.rows}x{M.cols}")
    if M.apply(R.unit) != S.unit:
        raise NotUnital("phi(1_R) != 1_S")
    imgs = M.columns()
    for i in range(R.dim):
        for j in range(i, R.dim):
            if M.apply(R.presentation.mul[i][j]) != S.multiply(imgs[i], imgs[j]):
                raise NotMultiplicative(i, j)
    for v in R.maximal_ideal.vectors():
        if not S.maximal_ideal.contains(M.apply(v)):
            raise NotLocal("phi does not map m_R into m_S")
    return RingMap(R, S, M)


def identity_map(A: LocalAlgebra) -> RingMap:
    return RingMap(A, A, Matrix.identity(A.field, A.dim))


@dataclass(eq=False)
class FlatCertificate:
    map: RingMap
    rank: int
    epsilons: tuple
    assembled_matrix: Matrix
    extended_ideal: Subspace  # m_R S
    fiber: QuotientSpace  # S -> S/m_R S


def extended_ideal(phi: RingMap) -> Subspace:
    S = phi.target
    return _ideal_generated(S.presentation, [phi(v) for v in phi.source.maximal_ideal.vectors()])


def assemble(phi: RingMap, epsilons) -> Matrix:
    """K-matrix of R^m -> S, (r_i) -> sum phi(r_i) eps_i; block i holds r_i."""
    S, R = phi.target, phi.source
    cols = []
    imgs = phi.images()
    for eps in epsilons:
        for k in range(R.dim):
            cols.append(S.multiply(imgs[k], eps))
    return Matrix.from_columns(S.field, S.dim, cols)


def flat_certificate(phi: RingMap) -> FlatCertificate:
    """Certify S free over R and pick the canonical lifts eps_1..eps_m of a basis of S/m_R S."""
    R, S = phi.source, phi.target
    F = S.field
    mS = extended_ideal(phi)
    fiber = QuotientSpace(S.dim, mS)
    spanned = Subspace.zero(F, fiber.dim)
    imgs = phi.images()
    eps = []
    for j in range(fiber.dim):
        if spanned.contains(unit_vector(F, fiber.dim, j)):
            continue
        e = fiber.section.column(j)
        eps.append(e)
        spanned = spanned + Subspace(F, fiber.dim, [fiber.project(S.multiply(r, e)) for r in imgs])
    m = len(eps)
    if S.dim != m * R.dim:
        raise NotFree(f"dim_K S = {S.dim} but rank {m} times dim_K R = {m * R.dim}")
    A = assemble(phi, eps)
    if not A.is_invertible():
        raise NotFree("the assembled map R^m -> S is singular")
    return FlatCertificate(phi, m, tuple(eps), A, mS, fiber)
