from carlab.reconstruct.filters import filter_factors, reconstruct, spectrum
from carlab.reconstruct.options import (
    FilterKind,
    ReconstructionRecord,
    ReconstructionResult,
    ReconstructionSweep,
    ReconstructOptions,
)
from carlab.reconstruct.sweep import (
    areconstruction_sweep,
    noise_mode,
    reconstruction_sweep,
    two_mode_problem,
)

__all__ = [
    "FilterKind",
    "ReconstructOptions",
    "ReconstructionResult",
    "ReconstructionRecord",
    "ReconstructionSweep",
    "reconstruct",
    "spectrum",
    "filter_factors",
    "reconstruction_sweep",
    "areconstruction_sweep",
    "noise_mode",
    "two_mode_problem",
]
