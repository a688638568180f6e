"""Exact ascent and descent of module structures along flat local maps of finite algebras."""

__version__ = "0.1.0"

from .exactla import GF, QQ, Field, Matrix, Subspace
from .rings import (LocalAlgebra, RingMap, extend_by_field, flat_certificate,
                    make_monomial_quotient, make_univariate_quotient, validate_algebra,
                    validate_ring_map)
from .modules import (ModulePresentation, ext_dim, ext_dims, length, matlis_dual, tensor_up,
                      validate_module)
from .basechange import (compare_power_structures, induced_power_structure, truncation_map,
                         verify_instance)

__all__ = [
    "GF", "QQ", "Field", "Matrix", "Subspace",
    "LocalAlgebra", "RingMap", "extend_by_field", "flat_certificate", "make_monomial_quotient",
    "make_univariate_quotient", "validate_algebra", "validate_ring_map",
    "ModulePresentation", "ext_dim", "ext_dims", "length", "matlis_dual", "tensor_up",
    "validate_module",
    "compare_power_structures", "induced_power_structure", "truncation_map", "verify_instance",
]
