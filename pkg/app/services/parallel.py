"""
Parallel Execution

Bounded fan-out for independent jobs: registry verifications, progression
scans over different strides, acceptance criteria. Series values are
immutable, so jobs share inputs read-only and results are merged in
submission order regardless of completion order.

Two entry points:
1. execute_parallel: async, per-job failure isolation ({"success": False, "error": ...})
2. map_ordered: sync, ordered results, first exception propagates
"""

import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar

from app.core.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

Job = Tuple[str, Callable[[], Any]]


class ParallelExecutor:
    """
    Executor capped at max_concurrent simultaneous jobs.

    The cap defaults to settings.FALSETHETA_THREADS.
    """

    def __init__(self, max_concurrent: Optional[int] = None):
        """
        Initialize parallel executor.

        Args:
            max_concurrent: Maximum concurrent jobs (>= 1)
        """
        self.max_concurrent = max_concurrent or settings.FALSETHETA_THREADS
        if self.max_concurrent < 1:
            raise ValueError("max_concurrent must be >= 1")

    async def execute_parallel(self, jobs: Sequence[Job]) -> List[Dict[str, Any]]:
        """
        Run (job_id, fn) pairs on a thread pool behind a semaphore.

        Returns:
            One dict per job, in submission order:
            {"job_id", "success": True, "result"} or {"job_id", "success": False, "error"}
        """
        semaphore = asyncio.Semaphore(self.max_concurrent)
        loop = asyncio.get_running_loop()

        with ThreadPoolExecutor(max_workers=self.max_concurrent) as pool:

            async def execute_with_semaphore(job_id: str, fn: Callable[[], Any]) -> Dict[str, Any]:
                async with semaphore:
                    try:
                        result = await loop.run_in_executor(pool, fn)
                        return {"job_id": job_id, "success": True, "result": result}
                    except Exception as e:
                        logger.error(f"Parallel execution error for {job_id}: {e}")
                        return {"job_id": job_id, "success": False, "error": str(e)}

            tasks = [execute_with_semaphore(job_id, fn) for job_id, fn in jobs]
            results = await asyncio.gather(*tasks, return_exceptions=True)

        processed_results = []
        for (job_id, _), result in zip(jobs, results):
            if isinstance(result, BaseException):
                processed_results.append({"job_id": job_id, "success": False, "error": str(result)})
            else:
                processed_results.append(result)

        ok = sum(1 for r in processed_results if r["success"])
        logger.info(f"Parallel batch finished: {ok}/{len(processed_results)} succeeded")
        return processed_results

    def run_jobs(self, jobs: Sequence[Job]) -> List[Dict[str, Any]]:
        """Synchronous wrapper around execute_parallel for the CLI."""
        return asyncio.run(self.execute_parallel(jobs))

    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        """fn over items, results in input order; runs inline when there is nothing to overlap."""
        items = list(items)
        if self.max_concurrent == 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=min(self.max_concurrent, len(items))) as pool:
            return list(pool.map(fn, items))
