"""Exact finite models of oblate n-stars and fragmented deformations.

The package computes, over the rationals, the classical invariants of a
glueing of n smooth branches along a point (spectrum, unit constants, the
hyperplane invariant lambda, connectors, sub-component ideals), builds new
stars by the one-branch extension construction, compares stars, and runs
the parallel computations for one-parameter deformations whose generic
fibre splits into n disjoint branches.
"""

from .errors import (
    ContradictionError,
    DegenerateExtension,
    DegenerateInput,
    GenerationFailed,
    InvalidDeformation,
    InvalidStar,
    NotAUnit,
    StarforgeError,
    UsageError,
)
from .linalg import KERNEL_IMPL, LinearSpace
from .scalars import BACKEND, QQ
from .series import BiPoly, MultiGerm, TruncSeries

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BiPoly",
    "ContradictionError",
    "DegenerateExtension",
    "DegenerateInput",
    "GenerationFailed",
    "InvalidDeformation",
    "InvalidStar",
    "KERNEL_IMPL",
    "LinearSpace",
    "MultiGerm",
    "NotAUnit",
    "QQ",
    "StarforgeError",
    "TruncSeries",
    "UsageError",
    "__version__",
]
