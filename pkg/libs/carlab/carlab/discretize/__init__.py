from carlab.discretize.grid import Grid, RectGrid
from carlab.discretize.io import (
    load_trajectory,
    read_grid_function_csv,
    save_trajectory,
    write_grid_function_csv,
    write_trajectory_csv,
)
from carlab.discretize.norms import (
    NormKind,
    h1_norm,
    hbeta_norm,
    l2_norm,
    norm,
    sobolev_norm,
)
from carlab.discretize.operators import (
    apply_A_series,
    apply_P,
    assemble_A,
    boundary_defect,
    from_vector,
    gradient,
    gradient_matrix,
    time_derivative,
    to_vector,
)
from carlab.discretize.trace import TraceCheck, trace_check, trace_constant
from carlab.discretize.trajectory import Trajectory

__all__ = [
    "Grid",
    "RectGrid",
    "Trajectory",
    "NormKind",
    "norm",
    "l2_norm",
    "h1_norm",
    "hbeta_norm",
    "sobolev_norm",
    "assemble_A",
    "apply_A_series",
    "apply_P",
    "boundary_defect",
    "gradient",
    "gradient_matrix",
    "time_derivative",
    "to_vector",
    "from_vector",
    "TraceCheck",
    "trace_check",
    "trace_constant",
    "write_grid_function_csv",
    "read_grid_function_csv",
    "write_trajectory_csv",
    "save_trajectory",
    "load_trajectory",
]
