"""Exception types raised by the library.

Every error carries a short machine-readable ``code`` (the class name) so the
CLI can report it without string matching.
"""

from __future__ import annotations


class AlgebraError(Exception):
    """Base class for every mathematical precondition or validation failure."""

    @property
    def code(self) -> str:
        return type(self).__name__


# linear algebra
class NoSolution(AlgebraError):
    pass


# algebras and ring maps
class NotCommutative(AlgebraError):
    def __init__(self, i: int, j: int, msg: str = ""):
        self.index = (i, j)
        super().__init__(msg or f"e_{i}*e_{j} != e_{j}*e_{i}")


class NotAssociative(AlgebraError):
    def __init__(self, i: int, j: int, k: int):
        self.index = (i, j, k)
        super().__init__(f"(e_{i}*e_{j})*e_{k} != e_{i}*(e_{j}*e_{k})")


class BadUnit(AlgebraError):
    pass


class NotLocal(AlgebraError):
    def __init__(self, msg: str, witness=None):
        self.witness = witness
        super().__init__(msg)


class LocalnessUndecided(AlgebraError):
    pass


class NotAnIdeal(AlgebraError):
    pass


class NotMonic(AlgebraError):
    pass


class ReducibleFactor(AlgebraError):
    pass


class InfiniteColength(AlgebraError):
    pass


class ResidueNotBase(AlgebraError):
    pass


class NotUnital(AlgebraError):
    pass


class NotMultiplicative(AlgebraError):
    def __init__(self, i: int, j: int):
        self.index = (i, j)
        super().__init__(f"phi(e_{i}*e_{j}) != phi(e_{i})*phi(e_{j})")


class NotFree(AlgebraError):
    pass


# modules
class NotAModule(AlgebraError):
    def __init__(self, msg: str, index=None):
        self.index = index
        super().__init__(msg)


class DepthExceeded(AlgebraError):
    pass


class NotTorsion(AlgebraError):
    pass


# base change falsifiers; never expected on valid input
class NotIso(AlgebraError):
    pass


class RelationNotKilled(AlgebraError):
    pass


class RankNotOne(AlgebraError):
    pass


# instance files
class InputError(Exception):
    """Problem with an instance file; maps to CLI exit code 2."""

    def __init__(self, msg: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {msg}" if path else msg)

    @property
    def code(self) -> str:
        return type(self).__name__


class InstanceSyntaxError(InputError):
    pass


class SchemaError(InputError):
    pass


class ValidationError(InputError):
    def __init__(self, cause: AlgebraError, path: str = ""):
        self.cause = cause
        super().__init__(f"{cause.code}: {cause}", path)
