import csv
from pathlib import Path

import numpy as np

from carlab.discretize.grid import Grid, RectGrid
from carlab.discretize.trajectory import Trajectory
from carlab.model.boundary import BoundaryCondition, BoundaryKind

GRID_FUNCTION_FIELDS = ["x", "component", "value"]
RECT_FUNCTION_FIELDS = ["x", "y", "component", "value"]
TRAJECTORY_FIELDS = ["t", "x", "component", "value"]


def _write_rows(path: Path, fieldnames: list[str], rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.DictWriter(
            f, fieldnames=fieldnames, extrasaction="ignore", lineterminator="\n"
        )
        writer.writeheader()
        writer.writerows(rows)


def write_grid_function_csv(path: Path, field: np.ndarray, grid: Grid | RectGrid):
    field = np.asarray(field, dtype=float)
    if isinstance(grid, RectGrid):
        values = field.reshape((-1,) + field.shape[-2:])
        rows = (
            {"x": float(x), "y": float(y), "component": k, "value": float(values[k, i, j])}
            for k in range(values.shape[0])
            for i, x in enumerate(grid.nodes_x)
            for j, y in enumerate(grid.nodes_y)
        )
        _write_rows(path, RECT_FUNCTION_FIELDS, rows)
        return
    values = np.atleast_2d(field)
    rows = (
        {"x": float(x), "component": k, "value": float(values[k, j])}
        for k in range(values.shape[0])
        for j, x in enumerate(grid.nodes)
    )
    _write_rows(path, GRID_FUNCTION_FIELDS, rows)


def read_grid_function_csv(path: Path) -> tuple[np.ndarray, np.ndarray]:
    """Read a 1-D grid function; returns ``(nodes, values)`` with values shaped ``(N, P)``."""
    with Path(path).open(newline="") as f:
        rows = list(csv.DictReader(f))
    components = sorted({int(row["component"]) for row in rows})
    nodes = np.array(
        sorted({float(row["x"]) for row in rows if int(row["component"]) == 0})
    )
    position = {x: j for j, x in enumerate(nodes)}
    values = np.zeros((len(components), nodes.size))
    for row in rows:
        values[int(row["component"]), position[float(row["x"])]] = float(row["value"])
    return nodes, values


def write_trajectory_csv(path: Path, traj: Trajectory, every: int = 1):
    nodes = traj.grid.nodes
    times = traj.grid.times
    rows = (
        {"t": float(times[m]), "x": float(x), "component": k, "value": float(traj.values[m, k, j])}
        for m in range(0, times.size, every)
        for k in range(traj.N)
        for j, x in enumerate(nodes)
    )
    _write_rows(path, TRAJECTORY_FIELDS, rows)


def save_trajectory(path: Path, traj: Trajectory):
    grid = traj.grid
    np.savez(
        path,
        values=traj.values,
        grid=np.array([grid.length, grid.nx, grid.final_time, grid.nt], dtype=float),
        bc=np.array(traj.bc.kind.value),
    )


def load_trajectory(path: Path) -> Trajectory:
    with np.load(path) as data:
        length, nx, final_time, nt = data["grid"]
        grid = Grid(length=length, nx=int(nx), final_time=final_time, nt=int(nt))
        return Trajectory(
            values=data["values"],
            grid=grid,
            bc=BoundaryCondition(kind=BoundaryKind(str(data["bc"]))),
        )
