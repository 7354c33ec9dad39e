import numpy as np

from carlab.discretize.grid import Grid


def sine_mode(grid: Grid, k: int = 1, components: int = 1) -> np.ndarray:
    profile = np.sin(k * np.pi * grid.nodes / grid.length)
    profile[[0, -1]] = 0.0
    return np.tile(profile, (components, 1))


def exact_heat_mode(k: int = 1, rate: float | None = None):
    rate = k**2 if rate is None else rate

    def exact(x: np.ndarray, t: float) -> np.ndarray:
        return np.exp(-rate * t) * np.sin(k * x)

    return exact
