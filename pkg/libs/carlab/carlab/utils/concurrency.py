import asyncio
import inspect
from typing import Any, Callable, Sequence

from carlab.consts import DEFAULT_MAX_CONCURRENCY


async def flexible_call(func, *args, **kwargs):
    if inspect.iscoroutinefunction(func):
        return await func(*args, **kwargs)
    return await asyncio.to_thread(func, *args, **kwargs)


async def gather_bounded(
    calls: Sequence[Callable[[], Any]],
    max_concurrency: int = DEFAULT_MAX_CONCURRENCY,
    return_exceptions: bool = False,
) -> list[Any]:
    """Run ``calls`` with at most ``max_concurrency`` in flight; results keep submission order."""
    if max_concurrency < 1:
        raise ValueError(f"max_concurrency must be positive, got {max_concurrency}")
    semaphore = asyncio.Semaphore(max_concurrency)

    async def run(call):
        async with semaphore:
            return await flexible_call(call)

    return await asyncio.gather(
        *(run(call) for call in calls), return_exceptions=return_exceptions
    )
