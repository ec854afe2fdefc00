"""Mod-Gaussian convergence laboratory.

Exact and asymptotic characteristic functions of log det(1 - T) for Haar
random matrices, limiting functions, Haar samplers, the random Euler
product model, local probability estimates and finite-field L-functions.
"""
from .errors import (AccuracyError, DomainError, IntegrityError, ModGaussError,
                     ResourceError, SingularSampleError)
from .groups import Family, GroupKind
from .rng import RandomStream

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "DomainError", "IntegrityError", "ModGaussError", "ResourceError",
    "SingularSampleError", "Family", "GroupKind", "RandomStream", "__version__",
]
