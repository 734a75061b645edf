"""Expectation values, reduced density matrices and entanglement entropy of
the XXX spin chain through the fermionic basis."""

from .matsubara import MatsubaraData, generate_md
from .numerics import DEQuadrature, Precision
from .omega import OmegaMatrix, omega_md, omega_zero

__all__ = ["DEQuadrature", "MatsubaraData", "OmegaMatrix", "Precision", "generate_md",
           "omega_md", "omega_zero"]
__version__ = "0.1.0"
