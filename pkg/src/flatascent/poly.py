"""Dense univariate polynomials over a :class:`~flatascent.exactla.Field`.

A polynomial is a list of coefficients in ascending degree, trimmed so the
last entry is nonzero (the zero polynomial is ``[]``).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .exactla import Field, GF, is_prime


def trim(f):
    f = list(f)
    while f and not f[-1]:
        f.pop()
    return f


def deg(f) -> int:
    return len(f) - 1


def _red(F: Field, x):
    return x % F.p if F.p else x


def add(F, f, g):
    n = max(len(f), len(g))
    f = list(f) + [F.zero] * (n - len(f))
    g = list(g) + [F.zero] * (n - len(g))
    return trim(_red(F, a + b) for a, b in zip(f, g))


def sub(F, f, g):
    return add(F, f, [_red(F, -c) for c in g])


def mul(F, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(F(c) if not F.p else c % F.p for c in out)


def scale(F, c, f):
    return trim(_red(F, c * a) for a in f)


def divmod_(F, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    q = [F.zero] * max(len(f) - len(g) + 1, 0)
    inv = F.inv(g[-1])
    while len(r) >= len(g) and r:
        c = _red(F, r[-1] * inv)
        shift = len(r) - len(g)
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] = _red(F, r[shift + i] - c * b)
        r = trim(r)
    return trim(q), r


def monic(F, f):
    return scale(F, F.inv(f[-1]), f) if f else []


def pgcd(F, f, g):
    while g:
        f, g = g, divmod_(F, f, g)[1]
    return monic(F, f)


def xgcd(F, f, g):
    """Return (d, u, v) with u f + v g = d monic."""
    r0, r1 = list(f), list(g)
    s0, s1 = [F.one], []
    t0, t1 = [], [F.one]
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    c = F.inv(r0[-1])
    return scale(F, c, r0), scale(F, c, s0), scale(F, c, t0)


def powmod(F, f, e: int, m):
    result = [F.one]
    base = divmod_(F, f, m)[1]
    while e:
        if e & 1:
            result = divmod_(F, mul(F, result, base), m)[1]
        base = divmod_(F, mul(F, base, base), m)[1]
        e >>= 1
    return result


def power(F, f, e: int):
    out = [F.one]
    for _ in range(e):
        out = mul(F, out, f)
    return out


def evaluate(F, f, x):
    acc = F.zero
    for c in reversed(f):
        acc = _red(F, acc * x + c)
    return acc


def _prime_factors(n: int):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_mod_p(F: Field, f) -> bool:
    """Rabin's test over F_p: x^(p^n) = x mod f and gcd(x^(p^(n/q)) - x, f) = 1."""
    f = monic(F, trim(f))
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    p = F.p
    x = [F.zero, F.one]

    def frob_iter(k):
        h = x
        for _ in range(k):
            h = powmod(F, h, p, f)
        return h

    if sub(F, frob_iter(n), x):
        return False
    for q in _prime_factors(n):
        h = sub(F, frob_iter(n // q), x)
        if deg(pgcd(F, h, f)) > 0:
            return False
    return True


def _integer_form(f):
    """Scale a rational polynomial to coprime integer coefficients."""
    den = 1
    for c in f:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in f]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints] if g else ints


def _divisors(n: int):
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def rational_roots(f):
    """All rational roots of a nonzero rational polynomial (rational root theorem)."""
    F = Field("Q")
    f = trim(F(c) for c in f)
    roots = []
    if not f:
        raise ValueError("zero polynomial")
    k = 0
    while not f[k]:
        k += 1
    if k:
        roots.append(Fraction(0))
    g = _integer_form(f[k:])
    if len(g) < 2:
        return roots
    for a in _divisors(g[0]):
        for b in _divisors(g[-1]):
            for r in (Fraction(a, b), Fraction(-a, b)):
                if r not in roots and evaluate(F, g, r) == 0:
                    roots.append(r)
    return sorted(roots)


def irreducibility_over_q(f, max_prime: int = 200):
    """Decide irreducibility of a rational polynomial where cheaply possible.

    Returns ``(verdict, reason)`` where verdict is True (certified irreducible),
    False (a rational root was found) or None (undecided).
    """
    F = Field("Q")
    f = trim(F(c) for c in f)
    n = deg(f)
    if n < 1:
        return False, "constant"
    if n == 1:
        return True, "linear"
    roots = rational_roots(f)
    if roots:
        return False, f"rational root {roots[0]}"
    if n <= 3:
        return True, "no rational root in degree <= 3"
    g = _integer_form(f)
    for q in range(2, max_prime):
        if not is_prime(q) or g[-1] % q == 0:
            continue
        Fq = GF(q)
        if is_irreducible_mod_p(Fq, [c % q for c in g]):
            return True, f"irreducible mod {q}"
    return None, "no certificate found"


def is_irreducible(F: Field, f):
    """(verdict, reason) over either ground field; see :func:`irreducibility_over_q`."""
    if F.p:
        ok = is_irreducible_mod_p(F, f)
        return ok, "Rabin test mod %d" % F.p
    return irreducibility_over_q(f)
