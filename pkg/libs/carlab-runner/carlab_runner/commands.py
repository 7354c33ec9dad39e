import functools
import logging
from pathlib import Path

import click
from carlab.errors import ConfigurationError
from carlab.forward import TimeScheme
from carlab.model import BoundaryKind, PresetName
from carlab.reconstruct import FilterKind
from carlab.stability import PerturbationFamily

from carlab_runner.artifacts import SUMMARY_FILE
from carlab_runner.config import resolve_config
from carlab_runner.models import Command, ExitCode
from carlab_runner.runner import run

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


class FloatList(click.ParamType):
    """Comma-separated floats, e.g. ``1e-1,1e-2,1e-3``."""

    name = "float-list"

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return [float(item) for item in value]
        try:
            return [float(item) for item in value.split(",") if item.strip()]
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated list of numbers", param, ctx)


FLOAT_LIST = FloatList()


def _choice(enum_type) -> click.Choice:
    return click.Choice([option.value for option in enum_type])


def shared_options(func):
    """Problem, grid and run options every command accepts."""
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            help="TOML file with run settings; flags override its values",
        ),
        click.option("--preset", type=_choice(PresetName), help="Coefficient preset"),
        click.option("--boundary", type=_choice(BoundaryKind), help="Boundary condition kind"),
        click.option("--robin-p", "robin_p", type=float, help="Robin coefficient p"),
        click.option("--components", type=int, help="Component count for paper_example"),
        click.option("--nx", type=int, help="Interior spatial nodes"),
        click.option("--nt", type=int, help="Time steps"),
        click.option("--T", "final_time", type=float, help="Final time"),
        click.option("--scheme", type=_choice(TimeScheme), help="Time-stepping scheme"),
        click.option("--seed", type=int, help="Seed for every stochastic choice"),
        click.option(
            "--max-concurrency", "max_concurrency", type=int, help="Parallel sweep cells"
        ),
        click.option(
            "--output-dir",
            "output_dir",
            type=click.Path(file_okay=False, path_type=Path),
            help="Artifact directory (default: $CARLAB_OUTPUT_DIR or ./carlab-runs)",
        ),
        click.option(
            "--log-level",
            "log_level",
            type=click.Choice(LOG_LEVELS, case_sensitive=False),
            help="Logging level",
        ),
    ]
    return functools.reduce(lambda wrapped, option: option(wrapped), reversed(options), func)


def _execute(command: Command, options: dict):
    config_path = options.pop("config_path", None)
    if options.get("log_level"):
        options["log_level"] = options["log_level"].upper()
    try:
        config = resolve_config(command, config_path, options)
    except ConfigurationError as e:
        click.echo(f"Error: {e}", err=True)
        raise SystemExit(int(ExitCode.CONFIG_ERROR))

    logging.basicConfig(
        level=config.log_level, format="%(levelname)s %(name)s: %(message)s"
    )
    outcome = run(config)
    click.echo((outcome.output_dir / SUMMARY_FILE).read_text(), nl=False)
    if outcome.exit_code != ExitCode.PASSED:
        failed = ", ".join(check.name for check in outcome.failed_checks)
        click.echo(f"Error: {outcome.message or f'failed invariants: {failed}'}", err=True)
        raise SystemExit(int(outcome.exit_code))


class CarlabGroup(click.Group):
    """Reports usage errors with the config-error exit status."""

    def main(self, *args, **kwargs):
        kwargs.pop("standalone_mode", None)
        try:
            return super().main(*args, standalone_mode=False, **kwargs)
        except click.ClickException as e:
            e.show()
            raise SystemExit(int(ExitCode.CONFIG_ERROR))
        except click.Abort:
            click.echo("Aborted!", err=True)
            raise SystemExit(int(ExitCode.CONFIG_ERROR))


@click.group(name="carlab", cls=CarlabGroup)
def carlab():
    """Carleman-estimate laboratory for backward coupled parabolic systems"""


@carlab.command(name="forward")
@shared_options
@click.option(
    "--trajectory-stride",
    "trajectory_stride",
    type=int,
    help="Write every n-th time slice to trajectory.csv",
)
def forward(**options):
    """Solve the forward problem from the preset's default initial state"""
    _execute(Command.FORWARD, options)


@carlab.command(name="carleman")
@shared_options
@click.option("--s", "s_list", type=FLOAT_LIST, help="Carleman parameters s, comma-separated")
@click.option(
    "--lambda", "lambda_list", type=FLOAT_LIST, help="Weight parameters lambda, comma-separated"
)
def carleman(**options):
    """Sweep the Carleman constant over an (s, lambda) grid"""
    _execute(Command.CARLEMAN, options)


@carlab.command(name="holder")
@shared_options
@click.option("--t0", type=float, help="Observation time inside (0, T)")
@click.option("--lambda", "lambda_", type=float, help="Weight parameter lambda")
@click.option("--eps", "eps_list", type=FLOAT_LIST, help="Perturbation amplitudes")
@click.option("--perturbation", type=_choice(PerturbationFamily), help="Perturbation family")
def holder(**options):
    """Twin experiment for the Holder rate at an interior time"""
    _execute(Command.HOLDER, options)


@carlab.command(name="lograte")
@shared_options
@click.option("--alpha", type=float, help="Exponent alpha in (0, 1)")
@click.option("--eps", "eps_list", type=FLOAT_LIST, help="Perturbation amplitudes")
@click.option("--perturbation", type=_choice(PerturbationFamily), help="Perturbation family")
def lograte(**options):
    """Twin experiment for the logarithmic rate at t = 0"""
    _execute(Command.LOGRATE, options)


@carlab.command(name="reconstruct")
@shared_options
@click.option("--alpha", type=float, help="Exponent alpha in (0, 1)")
@click.option("--delta", "delta_list", type=FLOAT_LIST, help="Noise levels in (0, 1)")
@click.option("--filter", "filter", type=_choice(FilterKind), help="Spectral filter")
@click.option(
    "--terminal",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Grid-function CSV (x, component, value) to invert instead of the sweep",
)
@click.option(
    "--noise-level", "noise_level", type=float, help="Noise level delta for --terminal data"
)
def reconstruct(**options):
    """Filtered backward reconstruction over a noise-level sweep"""
    _execute(Command.RECONSTRUCT, options)


@carlab.command(name="validate")
@shared_options
@click.option("--samples", type=int, help="Random (x, t) sample points")
def validate(**options):
    """Check the structural assumptions of a coefficient set"""
    _execute(Command.VALIDATE, options)


if __name__ == "__main__":
    carlab()
