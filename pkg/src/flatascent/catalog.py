"""The shipped instance catalog.

Each entry builds its algebras from a construction (univariate quotient,
monomial quotient, field extension) so the JSON files under ``fixtures/``
can be regenerated and compared byte for byte.
"""

from __future__ import annotations

from pathlib import Path

from .exactla import GF, QQ, Matrix
from .instance import Instance, VerifyRequest, emit
from .rings import (extend_by_field, make_monomial_quotient, make_univariate_quotient,
                    validate_ring_map)

FIXTURE_DIR = Path(__file__).with_name("fixtures")


def _base(K):
    """K itself, as K[x]/(x)."""
    return make_univariate_quotient(K, [0, 1], 1)


def _instance(iid, description, R, S, phi, expect="pass"):
    return Instance(iid, R.field, {"R": R, "S": S}, {"phi": phi}, {},
                    {"thm37": VerifyRequest("phi", expect=expect)}, description)


def remark38():
    R = _base(QQ)
    S, phi = extend_by_field(R, [-2, 0, 1], symbol="√2")
    return _instance("remark38", "Q -> Q(√2); the unequal-structures example", R, S, phi)


def i1():
    inst = remark38()
    inst.id = "i1"
    inst.description = "Q -> Q(√2)"
    return inst


def i2():
    R = make_univariate_quotient(QQ, [0, 1], 3)
    S, phi = extend_by_field(R, [-2, 0, 1], symbol="√2")
    return _instance("i2", "Q[x]/(x^3) -> Q(√2)[x]/(x^3)", R, S, phi)


def i3():
    R = _base(GF(5))
    S, phi = extend_by_field(R, [3, 0, 1], symbol="a")
    return _instance("i3", "F_5 -> F_25 = F_5[a]/(a^2 - 2)", R, S, phi)


def i4():
    R = make_univariate_quotient(QQ, [0, 1], 2)
    S = make_monomial_quotient(QQ, 2, [(2, 0), (0, 2)])
    # basis of S is 1, x, y, xy
    M = Matrix(QQ, [[1, 0], [0, 1], [0, 0], [0, 0]])
    return _instance("i4", "Q[x]/(x^2) -> Q[x,y]/(x^2,y^2), x -> x", R, S, validate_ring_map(R, S, M))


def i5():
    R = _base(QQ)
    S = make_univariate_quotient(QQ, [0, 1], 3, symbol="y")
    M = Matrix(QQ, [[1], [0], [0]])
    return _instance("i5", "Q -> Q[y]/(y^3)", R, S, validate_ring_map(R, S, M))


def i6():
    R = make_univariate_quotient(QQ, [0, 1], 3)
    S = make_univariate_quotient(QQ, [0, 1], 3, symbol="z")
    # x -> z + z^2, so x^2 -> z^2
    M = Matrix(QQ, [[1, 0, 0], [0, 1, 0], [0, 1, 1]])
    return _instance("i6", "Q[x]/(x^3) -> Q[z]/(z^3), x -> z + z^2 (rank one)", R, S,
                     validate_ring_map(R, S, M))


def nonflat():
    R = make_univariate_quotient(QQ, [0, 1], 2)
    S = _base(QQ)
    M = Matrix(QQ, [[1, 0]])
    return _instance("nonflat", "Q[x]/(x^2) -> Q, x -> 0 (not flat)", R, S,
                     validate_ring_map(R, S, M), expect="NotFree")


CATALOG = {"remark38": remark38, "i1": i1, "i2": i2, "i3": i3, "i4": i4, "i5": i5, "i6": i6,
           "nonflat": nonflat}
FLAT = ("i1", "i2", "i3", "i4", "i5", "i6")


def build(name: str) -> Instance:
    return CATALOG[name]()


def write_fixtures(directory=FIXTURE_DIR) -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, fn in CATALOG.items():
        path = directory / f"{name}.json"
        path.write_bytes(emit(fn()))
        out.append(path)
    return out


if __name__ == "__main__":
    for p in write_fixtures():
        print(p)
