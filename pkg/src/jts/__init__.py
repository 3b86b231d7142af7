"""Reconstruction of finite Jacobi matrices from two spectra."""

from .core import (
    BoundaryParam,
    InterlacedSpectra,
    JacobiMatrix,
    JTSError,
    MFunctionProduct,
    Mode,
    ReconstructionResult,
    SpectralMeasure,
    validate,
)
from .forward import eigenvalues, normalizing_constants, perturb, truncate_first
from .inverse import check_conditions, recover
from .kernels import BACKEND
from .precision import extended_precision
from .reconstruct import ricatti_reconstruct, stieltjes_lanczos

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundaryParam",
    "InterlacedSpectra",
    "JacobiMatrix",
    "JTSError",
    "MFunctionProduct",
    "Mode",
    "ReconstructionResult",
    "SpectralMeasure",
    "check_conditions",
    "eigenvalues",
    "extended_precision",
    "normalizing_constants",
    "perturb",
    "recover",
    "ricatti_reconstruct",
    "stieltjes_lanczos",
    "truncate_first",
    "validate",
]
