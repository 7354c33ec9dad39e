from importlib.metadata import PackageNotFoundError, version

from carlab import carleman, discretize, forward, model, reconstruct, stability
from carlab.errors import (
    CarlabError,
    ConfigurationError,
    DomainError,
    InvariantViolationError,
    NumericalError,
)

try:
    __version__ = version("carlab")
except PackageNotFoundError:
    __version__ = "0.0.0"

__all__ = [
    "model",
    "discretize",
    "forward",
    "carleman",
    "stability",
    "reconstruct",
    "CarlabError",
    "ConfigurationError",
    "DomainError",
    "NumericalError",
    "InvariantViolationError",
    "__version__",
]
