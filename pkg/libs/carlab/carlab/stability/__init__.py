from carlab.stability.holder import (
    aholder_experiment,
    holder_experiment,
    integral_identity_defect,
)
from carlab.stability.lograte import (
    alog_experiment,
    log_experiment,
    products_verdict,
    rate_products,
)
from carlab.stability.models import (
    ExperimentRecord,
    HolderConfig,
    HolderResult,
    LogConfig,
    LogResult,
    PerturbationFamily,
)
from carlab.stability.theta import (
    HolderBound,
    log_bound,
    log_rate_parameter,
    optimal_carleman_parameter,
    theta,
)

__all__ = [
    "theta",
    "HolderBound",
    "optimal_carleman_parameter",
    "log_rate_parameter",
    "log_bound",
    "PerturbationFamily",
    "HolderConfig",
    "LogConfig",
    "ExperimentRecord",
    "HolderResult",
    "LogResult",
    "holder_experiment",
    "aholder_experiment",
    "integral_identity_defect",
    "log_experiment",
    "alog_experiment",
    "rate_products",
    "products_verdict",
]
