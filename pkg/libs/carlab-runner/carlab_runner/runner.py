import logging
import time

from carlab.errors import (
    ConfigurationError,
    DomainError,
    InvariantViolationError,
    NumericalError,
)
from pydantic import ValidationError

from carlab_runner.artifacts import (
    Manifest,
    collect_versions,
    render_summary,
    sha256_of,
    utc_timestamp,
    write_csv,
    write_manifest,
    write_summary,
)
from carlab_runner.config import RunConfig, describe_validation_error
from carlab_runner.handlers import HANDLERS
from carlab_runner.models import CommandResult, ExitCode, RunOutcome

logger = logging.getLogger(__name__)


def _exit_code(result: CommandResult) -> ExitCode:
    if result.numerical_failures:
        return ExitCode.NUMERICAL_FAILURE
    if any(not check.passed for check in result.checks):
        return ExitCode.INVARIANT_VIOLATION
    return ExitCode.PASSED


def run(config: RunConfig) -> RunOutcome:
    """
    Execute one command and write its artifacts into ``config.output_dir``.

    Every run leaves a ``manifest.json`` and ``summary.txt`` behind, even when the
    command itself fails; CSV tables are written only for commands that finished.
    """
    output_dir = config.output_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(
        command=config.command.value,
        config=config.manifest_dict(),
        versions=collect_versions(),
        started_at=utc_timestamp(),
    )
    logger.info(f"Running '{config.command.value}' into {output_dir}")

    started = time.perf_counter()
    result, exit_code, message = None, ExitCode.PASSED, ""
    try:
        result = HANDLERS[config.command](config)
    except (ConfigurationError, DomainError) as e:
        exit_code, message = ExitCode.CONFIG_ERROR, f"configuration error: {e}"
    except ValidationError as e:
        exit_code = ExitCode.CONFIG_ERROR
        message = f"configuration error: {describe_validation_error(e)}"
    except NumericalError as e:
        exit_code, message = ExitCode.NUMERICAL_FAILURE, f"{type(e).__name__}: {e}"
    except InvariantViolationError as e:
        exit_code, message = ExitCode.INVARIANT_VIOLATION, f"invariant violated: {e}"
    manifest.timings["compute_seconds"] = time.perf_counter() - started

    artifacts, summary_lines = [], []
    if result is not None:
        exit_code = _exit_code(result)
        if result.numerical_failures:
            message = "numerical failure: " + "; ".join(result.numerical_failures)
        for table in result.tables:
            path = output_dir / f"{table.name}.csv"
            manifest.csv_sha256[path.name] = write_csv(path, table.fieldnames, table.rows)
            artifacts.append(path)
        for export in result.exports:
            path = output_dir / f"{export.name}.csv"
            export.write(path)
            manifest.csv_sha256[path.name] = sha256_of(path)
            artifacts.append(path)
        manifest.invariants = result.checks
        summary_lines = result.summary

    if message:
        logger.error(message)
    manifest.exit_code = int(exit_code)
    manifest.message = message
    manifest.timings["total_seconds"] = time.perf_counter() - started
    artifacts.append(write_manifest(output_dir, manifest))
    artifacts.append(write_summary(output_dir, render_summary(manifest, summary_lines)))
    return RunOutcome(
        command=config.command,
        exit_code=exit_code,
        output_dir=output_dir,
        checks=manifest.invariants,
        artifacts=artifacts,
        message=message,
    )
