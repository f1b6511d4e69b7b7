"""Entanglement harvesting between two particle detectors coupled to free fields."""

from .fields import (ConstantSpinor, DetectorConfig, Element, FieldKind, FieldModel, InitialState,
                     build_integrand)
from .quadrature import IntegralResult, QuadratureSettings, integrate, integrate_momentum_oracle
from .switching import GaussianSwitching, QuadratureError
from .twodetector import (MatrixElements, Protocol, TwoDetectorState, compute, compute_detailed,
                          negativity_closed_form, negativity_eigen)

__version__ = "0.1.0"

__all__ = [
    "ConstantSpinor", "DetectorConfig", "Element", "FieldKind", "FieldModel", "InitialState",
    "build_integrand", "IntegralResult", "QuadratureSettings", "integrate",
    "integrate_momentum_oracle", "GaussianSwitching", "QuadratureError", "MatrixElements",
    "Protocol", "TwoDetectorState", "compute", "compute_detailed", "negativity_closed_form",
    "negativity_eigen",
]
