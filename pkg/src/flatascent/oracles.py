"""Independent recomputations used to cross-check the main code paths.

Nothing here calls into :mod:`flatascent.exactla` elimination or the tensor
construction; it deliberately re-derives the same numbers another way.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm


def _rank_integer(rows):
    """Fraction-free (Bareiss) rank of an integer matrix given as row lists."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank, prev = 0, 1
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, len(rows)):
            r = rows[i]
            f = r[c]
            rows[i] = [(pr[c] * r[j] - f * pr[j]) // prev for j in range(ncols)]
        prev = pr[c]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _rank_mod_p(rows, p):
    rows = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        pr = [x * inv % p for x in rows[rank]]
        rows[rank] = pr
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], pr)]
        rank += 1
    return rank


def rank(field, rows) -> int:
    """Rank of a list of vectors over the given field."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    if field.p:
        return _rank_mod_p(rows, field.p)
    out = []
    for r in rows:
        den = 1
        for x in r:
            den = lcm(den, Fraction(x).denominator)
        out.append([int(Fraction(x) * den) for x in r])
    return _rank_integer(out)


def tensor_relation_rank(A, phi, rng) -> int:
    """Rank of the A ⊗_K S relations, enumerated in a shuffled order element by element."""
    S = phi.target
    R = phi.source
    F = S.field
    p = F.p
    a, s = A.dim, S.dim
    triples = [(i, j, l) for i in range(R.dim) for j in range(a) for l in range(s)]
    rng.shuffle(triples)
    imgs = [phi.matrix.column(i) for i in range(R.dim)]
    rows = []
    for i, j, l in triples:
        v = [0] * (a * s)
        ra = A.actions[i].column(j)  # r_i · a_j
        for jj in range(a):
            if ra[jj]:
                v[jj * s + l] += ra[jj]
        prod = [0] * s  # phi(r_i) · s_l
        for k in range(s):
            c = imgs[i][k]
            if c:
                for t, w in enumerate(S.presentation.mul[k][l]):
                    prod[t] += c * w
        for t in range(s):
            if prod[t]:
                v[j * s + t] -= prod[t]
        rows.append([x % p for x in v] if p else v)
    return rank(F, rows)
