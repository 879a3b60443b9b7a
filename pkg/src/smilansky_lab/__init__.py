"""Spectral analysis of the regularized Smilansky model.

Submodules: model (configuration and potentials), oned (1D comparison
operator), grid2d (truncated 2D Hamiltonian and transition scans), weyl
(quasi-mode certificates), bracketing (lower bounds and classification),
eigs (symmetric eigensolvers), quadrature (Gauss-Legendre panels), cli.
"""

from . import bracketing, eigs, grid2d, model, oned, quadrature, weyl
from .errors import (ComputationError, ConfigurationError, ConvergenceError,
                     RefinementError, SmilanskyError)

__version__ = "0.1.0"

__all__ = [
    "bracketing", "eigs", "grid2d", "model", "oned", "quadrature", "weyl",
    "SmilanskyError", "ConfigurationError", "ComputationError",
    "ConvergenceError", "RefinementError", "__version__",
]
