import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from carlab.consts import DEFAULT_DOMAIN_LENGTH, DEFAULT_FINAL_TIME


class Grid(BaseModel):
    """Uniform space-time lattice on (0, length) x [0, final_time].

    Grid functions live on all ``nx + 2`` nodes, boundary nodes included.
    """

    model_config = ConfigDict(frozen=True)

    length: float = Field(default=DEFAULT_DOMAIN_LENGTH, gt=0)
    nx: int = Field(ge=3)
    final_time: float = Field(default=DEFAULT_FINAL_TIME, gt=0)
    nt: int = Field(ge=2)

    @property
    def h(self) -> float:
        return self.length / (self.nx + 1)

    @property
    def dt(self) -> float:
        return self.final_time / self.nt

    @property
    def size(self) -> int:
        return self.nx + 2

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.size)

    @property
    def points(self) -> np.ndarray:
        return self.nodes[None, :]

    @property
    def midpoints(self) -> np.ndarray:
        return ((np.arange(self.nx + 1) + 0.5) * self.h)[None, :]

    @property
    def boundary_points(self) -> np.ndarray:
        return np.array([[0.0, self.length]])

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.final_time, self.nt + 1)

    @property
    def weights(self) -> np.ndarray:
        weights = np.full(self.size, self.h)
        weights[[0, -1]] = self.h / 2
        return weights

    def with_time(self, final_time: float | None = None, nt: int | None = None):
        return self.model_copy(
            update={
                "final_time": self.final_time if final_time is None else final_time,
                "nt": self.nt if nt is None else nt,
            }
        )


class RectGrid(BaseModel):
    """Uniform node grid on the rectangle (0, length_x) x (0, length_y)."""

    model_config = ConfigDict(frozen=True)

    length_x: float = Field(default=DEFAULT_DOMAIN_LENGTH, gt=0)
    length_y: float = Field(default=DEFAULT_DOMAIN_LENGTH, gt=0)
    nx: int = Field(ge=3)
    ny: int = Field(ge=3)

    @property
    def hx(self) -> float:
        return self.length_x / (self.nx + 1)

    @property
    def hy(self) -> float:
        return self.length_y / (self.ny + 1)

    @property
    def nodes_x(self) -> np.ndarray:
        return np.linspace(0.0, self.length_x, self.nx + 2)

    @property
    def nodes_y(self) -> np.ndarray:
        return np.linspace(0.0, self.length_y, self.ny + 2)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.nodes_x, self.nodes_y, indexing="ij")
