from carlab.utils.concurrency import flexible_call, gather_bounded
from carlab.utils.pythonic import deep_merge, fit_slope

__all__ = ["flexible_call", "gather_bounded", "deep_merge", "fit_slope"]
