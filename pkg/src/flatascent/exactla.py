"""Exact dense linear algebra over Q and prime fields F_p.

Scalars are plain Python values: ``Fraction`` for Q and ``int`` in ``[0, p)``
for F_p.  A :class:`Field` knows how to coerce, reduce and print them; all
matrix code works on the raw values and reduces mod p where needed.

Matrices act on column vectors.  Vectors are tuples.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NoSolution


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Ground field descriptor: ``Field("Q")`` or ``Field("Fp", p)``."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind == "Q":
            if p is not None:
                raise ValueError("Q takes no modulus")
        elif kind == "Fp":
            if not isinstance(p, int) or not is_prime(p):
                raise ValueError(f"modulus {p!r} is not prime")
        else:
            raise ValueError(f"unknown field kind {kind!r}")
        self.kind = kind
        self.p = p

    @property
    def char(self) -> int:
        return self.p or 0

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def __call__(self, x):
        """Coerce an int, Fraction or numeric string into the field."""
        if self.p:
            if isinstance(x, str):
                x = Fraction(x)
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{x} has p in its denominator")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        if isinstance(x, float):
            raise TypeError("floats are not exact scalars")
        return Fraction(x)

    def inv(self, x):
        if self.p:
            return pow(x, -1, self.p)
        return Fraction(1) / x

    def fmt(self, x):
        """JSON form: Q as a reduced "a/b" string, F_p as an int."""
        return int(x) if self.p else str(x)

    def random(self, rng, bound: int = 3):
        if self.p:
            return rng.randrange(self.p)
        return Fraction(rng.randint(-bound, bound))

    def to_json(self) -> dict:
        return {"kind": "Fp", "p": self.p} if self.p else {"kind": "Q"}

    def __eq__(self, other):
        return isinstance(other, Field) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"GF({self.p})" if self.p else "QQ"


QQ = Field("Q")


def GF(p: int) -> Field:
    return Field("Fp", p)


# ---------------------------------------------------------------- matrices


class Matrix:
    """Immutable dense matrix; ``data`` is a tuple of row tuples."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: Iterable[Iterable], cols: int | None = None):
        data = tuple(tuple(field(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("cols is required for a matrix with no rows")
            cols = len(data[0])
        for r in data:
            if len(r) != cols:
                raise ValueError("ragged matrix")
        self.field = field
        self.rows = len(data)
        self.cols = cols
        self.data = data

    @classmethod
    def _raw(cls, field, data, cols):
        m = object.__new__(cls)
        m.field, m.data, m.rows, m.cols = field, data, len(data), cols
        return m

    @classmethod
    def zeros(cls, field, rows, cols):
        z = field.zero
        return cls._raw(field, tuple((z,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls._raw(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, field, n_rows, columns):
        columns = [tuple(c) for c in columns]
        data = tuple(tuple(c[i] for c in columns) for i in range(n_rows))
        return cls._raw(field, data, len(columns))

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def column(self, j):
        return tuple(r[j] for r in self.data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.field, tuple(zip(*self.data)) if self.rows else tuple(
            () for _ in range(self.cols)), self.rows)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.shape == other.shape and self.data == other.data)

    def __hash__(self):
        return hash((self.field, self.shape, self.data))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {[list(map(str, r)) for r in self.data]})"

    def is_zero(self):
        return all(not x for r in self.data for x in r)

    def is_square(self):
        return self.rows == self.cols

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("field mismatch")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        p = self.field.p
        data = tuple(tuple((a + b) % p if p else a + b for a, b in zip(r, s))
                     for r, s in zip(self.data, other.data))
        return Matrix._raw(self.field, data, self.cols)

    def __neg__(self):
        return self.scale(self.field(-1))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        p = self.field.p
        data = tuple(tuple((c * a) % p if p else c * a for a in r) for r in self.data)
        return Matrix._raw(self.field, data, self.cols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return matmul(self, other)
        return self.apply(other)

    def apply(self, v):
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        p = self.field.p
        out = []
        for r in self.data:
            s = 0
            for a, b in zip(r, v):
                if a and b:
                    s += a * b
            out.append(s % p if p else Fraction(s))
        return tuple(out)

    def rank(self):
        return len(rref(self)[1])

    def is_invertible(self):
        return self.is_square() and self.rank() == self.rows


def matmul(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    p = a.field.p
    n = b.cols
    bt = b.data
    out = []
    for r in a.data:
        acc = [0] * n
        for k, x in enumerate(r):
            if x:
                brow = bt[k]
                for j in range(n):
                    y = brow[j]
                    if y:
                        acc[j] += x * y
        out.append(tuple(v % p for v in acc) if p else tuple(Fraction(v) for v in acc))
    return Matrix._raw(a.field, tuple(out), n)


def hstack(field, mats: Sequence[Matrix], rows: int | None = None) -> Matrix:
    if not mats:
        return Matrix.zeros(field, rows or 0, 0)
    data = tuple(sum((m.data[i] for m in mats), ()) for i in range(mats[0].rows))
    return Matrix._raw(field, data, sum(m.cols for m in mats))


def vstack(field, mats: Sequence[Matrix], cols: int | None = None) -> Matrix:
    if not mats:
        return Matrix.zeros(field, 0, cols or 0)
    c = mats[0].cols
    if any(m.cols != c for m in mats):
        raise ValueError("column mismatch in vstack")
    return Matrix._raw(field, sum((m.data for m in mats), ()), c)


def block_diag(field, mats: Sequence[Matrix]) -> Matrix:
    cols = sum(m.cols for m in mats)
    z = field.zero
    data = []
    off = 0
    for m in mats:
        for r in m.data:
            data.append((z,) * off + r + (z,) * (cols - off - m.cols))
        off += m.cols
    return Matrix._raw(field, tuple(data), cols)


def kron(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)
    p = a.field.p
    data = []
    for ra in a.data:
        for rb in b.data:
            data.append(tuple(((x * y) % p if p else x * y) for x in ra for y in rb))
    return Matrix._raw(a.field, tuple(data), a.cols * b.cols)


def vec_add(field, u, v):
    p = field.p
    return tuple((a + b) % p if p else a + b for a, b in zip(u, v))


def vec_sub(field, u, v):
    p = field.p
    return tuple((a - b) % p if p else a - b for a, b in zip(u, v))


def vec_scale(field, c, v):
    p = field.p
    return tuple((c * a) % p if p else c * a for a in v)


def unit_vector(field, n, i):
    z, o = field.zero, field.one
    return tuple(o if j == i else z for j in range(n))


# ------------------------------------------------------------- elimination


def _rref_rows(field, rows, ncols):
    """In-place RREF of a list of row lists; returns pivot columns."""
    p = field.p
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = field.inv(prow[c])
        if p:
            prow = [x * inv % p for x in prow]
        else:
            prow = [x * inv for x in prow]
        rows[r] = prow
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                row = rows[i]
                f = row[c]
                if f:
                    if p:
                        for j in nz:
                            row[j] = (row[j] - f * prow[j]) % p
                    else:
                        for j in nz:
                            row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    rows = [list(r) for r in m.data]
    pivots = _rref_rows(m.field, rows, m.cols)
    return Matrix._raw(m.field, tuple(tuple(r) for r in rows), m.cols), tuple(pivots)


class Subspace:
    """Subspace of K^n stored by its canonical RREF basis (rows)."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: Field, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        rows = [[field(x) for x in v] for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise ValueError("vector length does not match ambient dimension")
        pivots = _rref_rows(field, rows, ambient_dim)
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = Matrix._raw(field, tuple(tuple(r) for r in rows[:len(pivots)]), ambient_dim)
        self.pivots = tuple(pivots)

    @classmethod
    def zero(cls, field, n):
        return cls(field, n)

    @classmethod
    def full(cls, field, n):
        return cls(field, n, Matrix.identity(field, n).data)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def vectors(self):
        return list(self.basis.data)

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient_dim == other.ambient_dim and self.basis.data == other.basis.data)

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.basis.data))

    def __repr__(self):
        return f"Subspace(dim={self.dim} in K^{self.ambient_dim})"

    def reduce(self, v):
        """Residual of v after clearing the pivot coordinates."""
        p = self.field.p
        w = list(v)
        for r, c in zip(self.basis.data, self.pivots):
            f = w[c]
            if f:
                if p:
                    w = [(a - f * b) % p for a, b in zip(w, r)]
                else:
                    w = [a - f * b for a, b in zip(w, r)]
        return w

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    __contains__ = contains

    def coordinates(self, v):
        """Coefficients of v on the basis rows; raises NoSolution if v is outside."""
        if not self.contains(v):
            raise NoSolution("vector is not in the subspace")
        return tuple(v[c] for c in self.pivots)

    def combine(self, coeffs):
        out = [self.field.zero] * self.ambient_dim
        p = self.field.p
        for c, r in zip(coeffs, self.basis.data):
            if c:
                out = [(a + c * b) % p if p else a + c * b for a, b in zip(out, r)]
        return tuple(out)

    def __add__(self, other):
        return Subspace(self.field, self.ambient_dim, self.vectors() + other.vectors())

    def is_subspace_of(self, other) -> bool:
        return all(other.contains(v) for v in self.basis.data)

    def intersection(self, other) -> "Subspace":
        # x in U ∩ W  <=>  x = a·U = b·W, solved as a kernel of [U^T | -W^T]
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        stacked = hstack(self.field, [self.basis.T, -other.basis.T])
        ker = kernel_basis(stacked)
        return Subspace(self.field, self.ambient_dim,
                        [self.combine(k[:self.dim]) for k in ker.vectors()])

    def image(self, m: Matrix) -> "Subspace":
        return Subspace(self.field, m.rows, [m.apply(v) for v in self.basis.data])


def kernel_basis(m: Matrix) -> Subspace:
    """Null space {x : Mx = 0} as a subspace of K^cols."""
    r, pivots = rref(m)
    field = m.field
    p = field.p
    pivset = set(pivots)
    vecs = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = [field.zero] * m.cols
        v[f] = field.one
        for row, c in zip(r.data, pivots):
            if row[f]:
                v[c] = (-row[f]) % p if p else -row[f]
        vecs.append(v)
    return Subspace(field, m.cols, vecs)


def column_space(m: Matrix) -> Subspace:
    return Subspace(m.field, m.rows, m.T.data)


def solve(m: Matrix, b: Sequence):
    """Canonical solution of Mx = b (free variables zero); NoSolution if inconsistent."""
    if len(b) != m.rows:
        raise ValueError("right-hand side length does not match rows")
    aug = Matrix._raw(m.field, tuple(r + (m.field(x),) for r, x in zip(m.data, b)), m.cols + 1)
    r, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        raise NoSolution("b is not in the column space")
    x = [m.field.zero] * m.cols
    for row, c in zip(r.data, pivots):
        x[c] = row[-1]
    return tuple(x)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("not square")
    n = m.rows
    aug = hstack(m.field, [m, Matrix.identity(m.field, n)])
    r, pivots = rref(aug)
    if pivots[:n] != tuple(range(n)):
        raise NoSolution("matrix is singular")
    return Matrix._raw(m.field, tuple(row[n:] for row in r.data), n)


class QuotientSpace:
    """K^n / kernel with a projection and a section through non-pivot coordinates."""

    __slots__ = ("field", "ambient_dim", "kernel", "dim", "projection", "section", "free_coords")

    def __init__(self, ambient_dim: int, kernel: Subspace):
        if kernel.ambient_dim != ambient_dim:
            raise ValueError("kernel lives in a different ambient space")
        field = kernel.field
        pivset = set(kernel.pivots)
        free = [c for c in range(ambient_dim) if c not in pivset]
        p = field.p
        proj = [[field.zero] * ambient_dim for _ in free]
        for j, c in enumerate(free):
            proj[j][c] = field.one
            for row, pc in zip(kernel.basis.data, kernel.pivots):
                if row[c]:
                    proj[j][pc] = (-row[c]) % p if p else -row[c]
        self.field = field
        self.ambient_dim = ambient_dim
        self.kernel = kernel
        self.dim = len(free)
        self.free_coords = tuple(free)
        self.projection = Matrix._raw(field, tuple(tuple(r) for r in proj), ambient_dim)
        self.section = Matrix.from_columns(
            field, ambient_dim, [unit_vector(field, ambient_dim, c) for c in free])

    def project(self, v):
        return self.projection.apply(v)

    def lift(self, q):
        return self.section.apply(q)

    def induced(self, m: Matrix) -> Matrix:
        """Matrix of an endomorphism of K^n on the quotient; it must preserve the kernel."""
        for v in self.kernel.basis.data:
            if not self.kernel.contains(m.apply(v)):
                raise ValueError("map does not preserve the kernel")
        return matmul(matmul(self.projection, m), self.section)


def quotient_space(ambient_dim: int, ker: Subspace) -> QuotientSpace:
    return QuotientSpace(ambient_dim, ker)
