import asyncio
from functools import partial

import pytest

from carlab.utils.concurrency import flexible_call, gather_bounded


class TestFlexibleCall:
    async def test_sync_function_runs_in_thread(self):
        assert await flexible_call(lambda a, b: a + b, 2, 3) == 5

    async def test_coroutine_function_is_awaited(self):
        async def double(value):
            return 2 * value

        assert await flexible_call(double, 4) == 8


class TestGatherBounded:
    async def test_results_keep_submission_order(self):
        async def delayed(value, delay):
            await asyncio.sleep(delay)
            return value

        calls = [partial(delayed, v, 0.01 * (5 - v)) for v in range(5)]

        assert await gather_bounded(calls, max_concurrency=3) == [0, 1, 2, 3, 4]

    async def test_concurrency_is_bounded(self):
        running, peak = 0, 0

        async def tracked():
            nonlocal running, peak
            running += 1
            peak = max(peak, running)
            await asyncio.sleep(0.01)
            running -= 1

        await gather_bounded([tracked] * 8, max_concurrency=2)

        assert peak <= 2

    async def test_exceptions_can_be_returned(self):
        def fail():
            raise ArithmeticError("boom")

        results = await gather_bounded([lambda: 1, fail], return_exceptions=True)

        assert results[0] == 1
        assert isinstance(results[1], ArithmeticError)

    async def test_rejects_non_positive_bound(self):
        with pytest.raises(ValueError):
            await gather_bounded([lambda: 1], max_concurrency=0)
