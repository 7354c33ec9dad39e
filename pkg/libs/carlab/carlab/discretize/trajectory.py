from typing import Any, Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from carlab.discretize.grid import Grid
from carlab.model.boundary import BoundaryCondition


class Trajectory(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    # shape (nt + 1, N, nx + 2)
    values: np.ndarray
    grid: Grid
    bc: BoundaryCondition = Field(default_factory=BoundaryCondition.dirichlet)
    metadata: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_values(self):
        expected = (self.grid.nt + 1, self.grid.size)
        if self.values.ndim != 3 or (
            self.values.shape[0],
            self.values.shape[2],
        ) != expected:
            raise ValueError(
                f"trajectory values must have shape (nt+1, N, nx+2) = "
                f"({expected[0]}, N, {expected[1]}), got {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            step = int(np.argwhere(~np.isfinite(self.values))[0][0])
            raise ValueError(f"trajectory has non-finite values at step {step}")
        return self

    @classmethod
    def from_function(
        cls,
        grid: Grid,
        func: Callable[[np.ndarray, float], np.ndarray],
        bc: BoundaryCondition | None = None,
        **metadata,
    ) -> "Trajectory":
        slices = [np.atleast_2d(func(grid.nodes, t)) for t in grid.times]
        return cls(
            values=np.stack(slices).astype(float),
            grid=grid,
            bc=bc or BoundaryCondition.dirichlet(),
            metadata=metadata,
        )

    @property
    def N(self) -> int:
        return self.values.shape[1]

    @property
    def initial(self) -> np.ndarray:
        return self.values[0]

    @property
    def terminal(self) -> np.ndarray:
        return self.values[-1]

    def at(self, t: float) -> np.ndarray:
        position = np.clip(t / self.grid.dt, 0, self.grid.nt)
        lower = int(np.floor(position))
        if lower >= self.grid.nt:
            return self.values[-1]
        weight = position - lower
        return (1 - weight) * self.values[lower] + weight * self.values[lower + 1]

    def scaled(self, alpha: float) -> "Trajectory":
        return self.model_copy(update={"values": alpha * self.values})

    def __sub__(self, other: "Trajectory") -> "Trajectory":
        return self.model_copy(update={"values": self.values - other.values})
