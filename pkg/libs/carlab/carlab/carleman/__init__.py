from carlab.carleman.budget import (
    CarlemanBudget,
    CarlemanLhs,
    carleman_budget,
    lhs_car,
    rhs_car,
)
from carlab.carleman.identity import (
    EnergyCheck,
    J1Check,
    j1_identity_check,
    weighted_energy_check,
)
from carlab.carleman.sweep import (
    CarlemanSweep,
    LambdaDiagnostics,
    asweep_constant,
    sweep_constant,
)
from carlab.carleman.weight import CarlemanWeight, ScaledValue, WeightValue, weight

__all__ = [
    "CarlemanWeight",
    "WeightValue",
    "ScaledValue",
    "weight",
    "CarlemanLhs",
    "CarlemanBudget",
    "lhs_car",
    "rhs_car",
    "carleman_budget",
    "CarlemanSweep",
    "LambdaDiagnostics",
    "asweep_constant",
    "sweep_constant",
    "J1Check",
    "EnergyCheck",
    "j1_identity_check",
    "weighted_energy_check",
]
