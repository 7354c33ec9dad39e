import csv
import hashlib
import platform
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field

from carlab_runner.models import InvariantCheck

MANIFEST_FILE = "manifest.json"
SUMMARY_FILE = "summary.txt"
TRACKED_DISTRIBUTIONS = ("carlab", "carlab-runner", "numpy", "scipy", "pydantic", "click")


class Manifest(BaseModel):
    command: str
    config: dict[str, Any]
    versions: dict[str, str]
    started_at: str
    timings: dict[str, float] = Field(default_factory=dict)
    csv_sha256: dict[str, str] = Field(default_factory=dict)
    invariants: list[InvariantCheck] = Field(default_factory=list)
    exit_code: int = 0
    message: str = ""


def collect_versions() -> dict[str, str]:
    versions = {"python": platform.python_version()}
    for distribution in TRACKED_DISTRIBUTIONS:
        try:
            versions[distribution] = version(distribution)
        except PackageNotFoundError:
            versions[distribution] = "unknown"
    return versions


def utc_timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _format(value: Any) -> Any:
    # repr keeps every bit of a float, so reruns compare byte for byte
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return value


def write_csv(path: Path, fieldnames: list[str], rows: list[dict]) -> str:
    """Write rows with a fixed column order and return the file's sha256."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _format(row.get(key)) for key in fieldnames})
    return sha256_of(path)


def sha256_of(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(output_dir: Path, manifest: Manifest) -> Path:
    path = output_dir / MANIFEST_FILE
    path.write_text(manifest.model_dump_json(indent=2) + "\n")
    return path


def render_summary(manifest: Manifest, lines: list[str]) -> str:
    verdict = "PASS" if manifest.exit_code == 0 else f"FAIL (exit {manifest.exit_code})"
    out = [f"carlab {manifest.command}: {verdict}"]
    if manifest.message:
        out.append(manifest.message)
    out.extend(lines)
    if manifest.invariants:
        out.append("")
        out.append("invariants:")
        for check in manifest.invariants:
            mark = "pass" if check.passed else "FAIL"
            detail = f"  {check.detail}" if check.detail else ""
            out.append(f"  [{mark}] {check.name}{detail}")
    return "\n".join(out) + "\n"


def write_summary(output_dir: Path, text: str) -> Path:
    path = output_dir / SUMMARY_FILE
    path.write_text(text)
    return path
