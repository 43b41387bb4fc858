"""Labelled polytopes: canonical Einstein normalization, extremal affine
functions, soliton vectors, Abreu-equation audits and a 2-D toric
Monge-Ampere solver (C++ core)."""

from ._core import (
    ConvergenceError,
    GuilleminModel,
    HirzebruchModel,
    PerturbedModel,
    Polytope,
    PotentialModel,
    ValidationError,
    abreu_scalar,
    boundary_check,
    compare,
    cone_angles,
    cone_labels,
    delzant_check,
    einstein_normalize,
    einstein_residual,
    extremal_affine,
    legendre_h,
    moments,
    monotone_point,
    psi_map,
    rationality,
    solve,
    soliton_residual,
    soliton_vector,
)

__all__ = [
    "ConvergenceError",
    "GuilleminModel",
    "HirzebruchModel",
    "PerturbedModel",
    "Polytope",
    "PotentialModel",
    "ValidationError",
    "abreu_scalar",
    "boundary_check",
    "compare",
    "cone_angles",
    "cone_labels",
    "delzant_check",
    "einstein_normalize",
    "einstein_residual",
    "extremal_affine",
    "legendre_h",
    "moments",
    "monotone_point",
    "psi_map",
    "rationality",
    "solve",
    "soliton_residual",
    "soliton_vector",
]

from ._core import __version__  # noqa: E402

__version__ = __version__
