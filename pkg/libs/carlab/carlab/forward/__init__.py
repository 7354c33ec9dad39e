from carlab.forward.options import SolveOptions, TimeScheme
from carlab.forward.semigroup import propagate
from carlab.forward.solver import solve_forward, time_derivative_trajectories

__all__ = [
    "SolveOptions",
    "TimeScheme",
    "solve_forward",
    "time_derivative_trajectories",
    "propagate",
]
