"""Isolated points on X1(l^n): finite GL2 computations behind the case analysis."""

__version__ = "0.1.0"

from .errors import (ClosureTooLarge, ComputationLimitError, DataError, IsopointError,
                     NotClosedError, OutOfScopeError, SingularElementError)
from .gl2_core import Mat2, Modulus, Subgroup, Vec2, closure
from .kernels import backend

__all__ = ["Mat2", "Modulus", "Subgroup", "Vec2", "closure", "backend", "IsopointError",
           "DataError", "ComputationLimitError", "ClosureTooLarge", "SingularElementError",
           "NotClosedError", "OutOfScopeError", "__version__"]
