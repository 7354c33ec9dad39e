from carlab.model.boundary import BoundaryCondition, BoundaryKind
from carlab.model.coefficients import CoefficientField, CoefficientSet, constant_field
from carlab.model.presets import PresetName, initial_state, preset
from carlab.model.semilinear import Semilinearity
from carlab.model.validation import (
    LipschitzReport,
    SamplePoint,
    ValidationReport,
    check_lipschitz,
    random_smooth_field,
    validate,
)

__all__ = [
    "CoefficientField",
    "CoefficientSet",
    "constant_field",
    "BoundaryCondition",
    "BoundaryKind",
    "Semilinearity",
    "ValidationReport",
    "LipschitzReport",
    "SamplePoint",
    "validate",
    "check_lipschitz",
    "random_smooth_field",
    "PresetName",
    "preset",
    "initial_state",
]
