"""Concurrent evaluation of independent branch propagations.

Each job result lands in its own slot, so the schedule cannot change the
numbers: running with any thread count is bit-identical to the serial loop.
"""
import asyncio
import logging
from typing import Callable, Iterable, TypeVar

from ..errors import ArgumentError, SymplecticError

logger = logging.getLogger(__name__)

T = TypeVar("T")


async def _sweep_async(job: Callable[[int], T], indices: list[int], threads: int) -> list[T]:
    semaphore = asyncio.Semaphore(threads)
    results: list = [None] * len(indices)

    async def run_branch(slot: int, index: int):
        async with semaphore:
            try:
                results[slot] = await asyncio.to_thread(job, index)
            except SymplecticError:
                raise
            except Exception as exc:
                raise RuntimeError(f"Propagation failed on branch {index}") from exc

    tasks = [
        asyncio.create_task(run_branch(slot, index))
        for slot, index in enumerate(indices)
    ]
    try:
        await asyncio.gather(*tasks)
    except Exception:
        for task in tasks:
            task.cancel()
        await asyncio.gather(*tasks, return_exceptions=True)
        raise
    return results


def parallel_sweep(job: Callable[[int], T], indices: Iterable[int], threads: int = 1) -> list[T]:
    """Evaluate job(i) for every index, up to `threads` at a time, results in index order."""
    if threads < 1:
        raise ArgumentError(f"threads must be >= 1, got {threads}")
    indices = list(indices)
    if threads == 1 or len(indices) <= 1:
        return [job(i) for i in indices]

    logger.debug("sweeping %d branches on %d threads", len(indices), threads)
    try:
        loop = asyncio.get_running_loop()
    except RuntimeError:
        return asyncio.run(_sweep_async(job, indices, threads))
    else:
        import nest_asyncio

        nest_asyncio.apply()
        return loop.run_until_complete(_sweep_async(job, indices, threads))
