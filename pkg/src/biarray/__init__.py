"""Bilayer atomic-array optical interfaces: effective 1D scattering model,
diffraction-loss engineering, finite-array coupled-dipole simulation, and
tunable quantum-memory protocols."""

__version__ = "0.1.0"

from ._core import BACKEND
from .lattice import (
    GrazingOrderError,
    LayerGeometry,
    gamma_1d,
    make_geometry,
)
from .bilayer import BilayerConfig, analytic_scattering, effective_params
from .iface1d import InterfaceParams, ModeCoefficients

__all__ = [
    "__version__",
    "BACKEND",
    "GrazingOrderError",
    "LayerGeometry",
    "gamma_1d",
    "make_geometry",
    "BilayerConfig",
    "analytic_scattering",
    "effective_params",
    "InterfaceParams",
    "ModeCoefficients",
]
