import math
from functools import partial

import numpy as np
from carlab.carleman import sweep_constant
from carlab.consts import BC_DEFECT_TOLERANCE
from carlab.discretize import (
    Grid,
    boundary_defect,
    h1_norm,
    l2_norm,
    read_grid_function_csv,
    trace_check,
    write_grid_function_csv,
    write_trajectory_csv,
)
from carlab.errors import ConfigurationError, UnsupportedConfigurationError
from carlab.forward import SolveOptions, solve_forward
from carlab.model import (
    BoundaryKind,
    check_lipschitz,
    initial_state,
    random_smooth_field,
    validate,
)
from carlab.reconstruct import ReconstructOptions, reconstruct, reconstruction_sweep
from carlab.stability import HolderConfig, LogConfig, holder_experiment, log_experiment

from carlab_runner.config import RunConfig
from carlab_runner.models import Command, CommandResult, Export, InvariantCheck, Table

TRACE_FIELDS = 100
TRACE_EPSILON = 0.5


def build_grid(cfg: RunConfig) -> Grid:
    return Grid(length=cfg.length, nx=cfg.nx, final_time=cfg.final_time, nt=cfg.nt)


def _solve(cfg: RunConfig, grid: Grid):
    coeffs, bc, f = cfg.problem()
    u0 = initial_state(grid, bc, coeffs.N)
    traj = solve_forward(coeffs, bc, f, u0, grid, SolveOptions(scheme=cfg.scheme))
    return coeffs, traj


def run_forward(cfg: RunConfig) -> CommandResult:
    grid = build_grid(cfg)
    coeffs, traj = _solve(cfg, grid)
    norms = [
        {"t": float(t), "l2": l2_norm(values, grid), "h1": h1_norm(values, grid)}
        for t, values in zip(grid.times, traj.values)
    ]
    defect = boundary_defect(traj, coeffs)
    return CommandResult(
        tables=[Table(name="forward", fieldnames=["t", "l2", "h1"], rows=norms)],
        checks=[
            InvariantCheck(
                name="finite_state", passed=bool(np.all(np.isfinite(traj.values)))
            ),
            InvariantCheck(
                name="boundary_condition",
                passed=defect <= BC_DEFECT_TOLERANCE,
                detail=f"relative defect {defect:.3e}",
            ),
        ],
        summary=[
            f"{coeffs.name}: N={coeffs.N}, {traj.bc.kind.value} boundary, "
            f"nx={grid.nx}, nt={grid.nt}, T={grid.final_time}",
            f"||u(T)||_L2 = {norms[-1]['l2']:.6e}, ||u(T)||_H1 = {norms[-1]['h1']:.6e}",
        ],
        exports=[
            Export(
                name="trajectory",
                write=partial(write_trajectory_csv, traj=traj, every=cfg.trajectory_stride),
            ),
            Export(
                name="forward_terminal",
                write=partial(write_grid_function_csv, field=traj.terminal, grid=grid),
            ),
        ],
    )


def run_carleman(cfg: RunConfig) -> CommandResult:
    grid = build_grid(cfg)
    coeffs, z = _solve(cfg, grid)
    sweep = sweep_constant(z, coeffs, cfg.s_list, cfg.lambda_list, cfg.max_concurrency)
    rows = [
        {
            "s": cell.s,
            "lambda": cell.lambda_,
            "lhs_mantissa": cell.lhs.mantissa if cell.lhs else 0.0,
            "lhs_exponent": cell.exponent,
            "rhs_interior": cell.rhs_interior,
            "rhs_terminal": cell.rhs_terminal,
            "rhs_initial": cell.rhs_initial,
            "c_star": cell.c_star,
            "bc_warning": cell.bc_warning,
            "lhs_time": cell.lhs.time_part if cell.lhs else 0.0,
            "lhs_gradient": cell.lhs.gradient_part if cell.lhs else 0.0,
            "lhs_state": cell.lhs.state_part if cell.lhs else 0.0,
            "scaled": cell.scaled,
        }
        for cell in sweep.cells
    ]
    summary = [
        f"sup c_star = {sweep.sup_c_star:.6e} at s={sweep.argmax_s}, lambda={sweep.argmax_lambda}"
    ]
    for row in sweep.diagnostics:
        ratio = "n/a" if row.top_octave_ratio is None else f"{row.top_octave_ratio:.4f}"
        summary.append(
            f"lambda={row.lambda_}: monotone in s {row.monotone_in_s}, top-octave ratio {ratio}"
        )
    return CommandResult(
        tables=[Table(name="carleman", fieldnames=list(rows[0]), rows=rows)],
        checks=[
            InvariantCheck(
                name="finite_carleman_constant",
                passed=math.isfinite(sweep.sup_c_star),
                detail=f"sup c_star {sweep.sup_c_star:.6e}",
            ),
            InvariantCheck(
                name="boundary_condition",
                passed=not sweep.bc_warning,
                detail=f"relative defect {sweep.bc_defect:.3e}",
            ),
        ],
        summary=summary,
    )


def _twin_settings(cfg: RunConfig) -> dict:
    settings = {
        "preset": cfg.resolved_preset,
        "grid": build_grid(cfg),
        "perturbation": cfg.perturbation,
        "boundary": cfg.boundary,
        "robin_p": cfg.robin_p,
        "components": cfg.components,
        "scheme": cfg.scheme,
        "seed": cfg.seed,
        "max_concurrency": cfg.max_concurrency,
    }
    if cfg.eps_list is not None:
        settings["eps_list"] = cfg.eps_list
    return settings


def _failures(records) -> list[str]:
    return [f"eps={record.epsilon:g}: {record.failure}" for record in records if record.failure]


def run_holder(cfg: RunConfig) -> CommandResult:
    result = holder_experiment(
        HolderConfig(t0=cfg.t0, lambda_=cfg.lambda_, **_twin_settings(cfg))
    )
    fields = [
        "epsilon", "E_T", "E_t0", "theta", "slope", "ratio", "s", "bound",
        "holder_residual", "identity_defect", "apriori_ok", "failure",
    ]
    rows = [
        {**record.model_dump(include=set(fields)), "slope": result.slope}
        for record in result.records
    ]
    return CommandResult(
        tables=[Table(name="holder", fieldnames=fields, rows=rows)],
        checks=[
            InvariantCheck(
                name="slope_at_least_theta",
                passed=result.slope_consistent,
                detail=f"slope {result.slope:.4f} vs theta {result.theta:.6f}",
            ),
            InvariantCheck(
                name="calibrated_holder_bound",
                passed=result.violations == 0,
                detail=f"C={result.constant:.4e}, {result.violations} violating record(s)",
            ),
        ],
        summary=[
            f"theta(t0={cfg.t0}, T={cfg.final_time}, lambda={cfg.lambda_}) = {result.theta:.6f}",
            f"fitted slope of log E_t0 against log E_T: {result.slope:.4f}",
        ],
        numerical_failures=_failures(result.records),
    )


def run_lograte(cfg: RunConfig) -> CommandResult:
    result = log_experiment(LogConfig(alpha=cfg.alpha, **_twin_settings(cfg)))
    # the logarithmic rate has no Hoelder exponent or fitted slope; both columns stay blank
    fields = [
        "epsilon", "E_0", "D", "theta", "slope", "product", "M1", "ratio", "s",
        "excluded", "failure",
    ]
    rows = [
        {**record.model_dump(include=set(fields)), "slope": None}
        for record in result.records
    ]
    return CommandResult(
        tables=[Table(name="lograte", fieldnames=fields, rows=rows)],
        checks=[
            InvariantCheck(name="products_bounded", passed=result.bounded),
            InvariantCheck(name="products_nonincreasing", passed=result.nonincreasing),
        ],
        summary=[
            f"alpha={result.alpha}, usable records "
            f"{sum(record.usable for record in result.records)}/{len(result.records)}"
        ],
        numerical_failures=_failures(result.records),
    )


def _terminal_grid(cfg: RunConfig, nodes: np.ndarray) -> Grid:
    if nodes.size < 5 or abs(nodes[0]) > 1e-12 * abs(nodes[-1]):
        raise ConfigurationError(
            f"{cfg.terminal}: terminal data needs at least 5 nodes starting at x = 0"
        )
    spacing = np.diff(nodes)
    if not np.allclose(spacing, spacing[0], rtol=1e-9, atol=0.0):
        raise ConfigurationError(f"{cfg.terminal}: terminal data must sit on a uniform grid")
    return Grid(
        length=float(nodes[-1]), nx=nodes.size - 2, final_time=cfg.final_time, nt=cfg.nt
    )


def _reconstruct_terminal(cfg: RunConfig, coeffs) -> CommandResult:
    try:
        nodes, terminal = read_grid_function_csv(cfg.terminal)
    except (KeyError, ValueError) as e:
        raise ConfigurationError(f"{cfg.terminal}: not a grid-function CSV ({e})") from e
    grid = _terminal_grid(cfg, nodes)
    opts = ReconstructOptions(filter=cfg.filter, alpha=cfg.alpha, noise_level=cfg.noise_level)
    result = reconstruct(terminal, coeffs, grid, opts)
    row = {
        "delta": cfg.noise_level,
        "retained_modes": result.retained_modes,
        "gamma": result.gamma,
        "s": result.s,
    }
    return CommandResult(
        tables=[Table(name="reconstruct", fieldnames=list(row), rows=[row])],
        checks=[
            InvariantCheck(
                name="finite_estimate", passed=bool(np.all(np.isfinite(result.estimate)))
            )
        ],
        summary=[
            f"{result.filter.value} filter at delta={cfg.noise_level:g}: "
            f"{result.retained_modes} mode(s) retained, nx={grid.nx}, T={grid.final_time}"
        ],
        exports=[
            Export(
                name="estimate",
                write=partial(write_grid_function_csv, field=result.estimate, grid=grid),
            )
        ],
    )


def run_reconstruct(cfg: RunConfig) -> CommandResult:
    """Invert a terminal CSV when one is given, otherwise run the noise-level sweep."""
    if cfg.boundary != BoundaryKind.DIRICHLET:
        raise UnsupportedConfigurationError("reconstruction supports Dirichlet conditions only")
    coeffs, _, _ = cfg.problem()
    if cfg.terminal is not None:
        return _reconstruct_terminal(cfg, coeffs)
    sweep = reconstruction_sweep(
        coeffs,
        build_grid(cfg),
        deltas=cfg.delta_list,
        filter=cfg.filter,
        alpha=cfg.alpha,
        max_concurrency=cfg.max_concurrency,
    )
    fields = ["delta", "error", "retained_modes", "gamma", "s"]
    return CommandResult(
        tables=[
            Table(
                name="reconstruct",
                fieldnames=fields,
                rows=[record.model_dump() for record in sweep.records],
            )
        ],
        checks=[
            InvariantCheck(
                name="log_rate_trend",
                passed=sweep.slope_ok,
                detail=f"slope {sweep.slope:.4f} vs -alpha {-sweep.alpha}",
            )
        ],
        summary=[f"{sweep.filter.value} filter, noise mode k={sweep.noise_mode}"],
    )


def run_validate(cfg: RunConfig) -> CommandResult:
    coeffs, bc, f = cfg.problem()
    bc.check_compatible(coeffs)
    grid = build_grid(cfg)
    report = validate(
        coeffs,
        cfg.samples,
        length=cfg.length,
        final_time=cfg.final_time,
        seed=cfg.seed,
    )
    rows = [
        {"check": "symmetry_defect", "value": report.symmetry_defect},
        {"check": "ellipticity_margin", "value": report.ellipticity_margin},
        {"check": "rayleigh_margin", "value": report.rayleigh_margin},
        {"check": "min_eigenvalue", "value": report.min_eigenvalue},
    ]
    checks = [
        InvariantCheck(
            name="symmetry_and_ellipticity",
            passed=report.passed,
            detail=f"defect {report.symmetry_defect:.3e}, margin {report.ellipticity_margin:.3e}",
        )
    ]

    if not f.is_linear:
        lipschitz = check_lipschitz(f, grid, components=coeffs.N, seed=cfg.seed)
        rows.append({"check": "lipschitz_ratio", "value": lipschitz.max_ratio})
        checks.append(
            InvariantCheck(
                name="lipschitz",
                passed=lipschitz.passed,
                detail=f"max ratio {lipschitz.max_ratio:.9f} vs L={lipschitz.lipschitz}",
            )
        )

    rng = np.random.default_rng(cfg.seed)
    traces = [
        trace_check(
            random_smooth_field(grid, coeffs.N, rng, dirichlet=False), TRACE_EPSILON, grid
        )
        for _ in range(TRACE_FIELDS)
    ]
    held = sum(trace.holds for trace in traces)
    rows.append({"check": "trace_fields_held", "value": float(held)})
    checks.append(
        InvariantCheck(
            name="trace_inequality",
            passed=held == TRACE_FIELDS,
            detail=f"{held}/{TRACE_FIELDS} at eps={TRACE_EPSILON}",
        )
    )
    return CommandResult(
        tables=[Table(name="validate", fieldnames=["check", "value"], rows=rows)],
        checks=checks,
        summary=[f"{coeffs.name}: N={coeffs.N}, {report.samples} sample points"],
    )


HANDLERS = {
    Command.FORWARD: run_forward,
    Command.CARLEMAN: run_carleman,
    Command.HOLDER: run_holder,
    Command.LOGRATE: run_lograte,
    Command.RECONSTRUCT: run_reconstruct,
    Command.VALIDATE: run_validate,
}
