"""
Tests for Parallel Execution

Validates:
1. Async batch execution with per-job failure isolation
2. Ordered synchronous mapping
3. Concurrency cap validation
4. Results independent of the thread count
"""

import time

import pytest
from pathlib import Path
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))


class TestParallelExecutor:
    """Tests for ParallelExecutor."""

    def test_default_cap_from_settings(self):
        from app.core.config import settings
        from app.services.parallel import ParallelExecutor

        assert ParallelExecutor().max_concurrent == settings.FALSETHETA_THREADS

    def test_invalid_cap(self):
        from app.services.parallel import ParallelExecutor

        with pytest.raises(ValueError):
            ParallelExecutor(-1)

    @pytest.mark.asyncio
    async def test_execute_parallel_isolates_errors(self):
        """A failing job is reported, the others still succeed."""
        from app.services.parallel import ParallelExecutor

        def boom():
            raise RuntimeError("job failed")

        jobs = [("a", lambda: 1), ("b", boom), ("c", lambda: 3)]
        results = await ParallelExecutor(2).execute_parallel(jobs)

        assert [r["job_id"] for r in results] == ["a", "b", "c"]
        assert results[0] == {"job_id": "a", "success": True, "result": 1}
        assert not results[1]["success"]
        assert "job failed" in results[1]["error"]
        assert results[2]["result"] == 3

    def test_run_jobs_sync_wrapper(self):
        from app.services.parallel import ParallelExecutor

        results = ParallelExecutor(3).run_jobs([(str(i), (lambda i=i: i * i)) for i in range(5)])
        assert [r["result"] for r in results] == [0, 1, 4, 9, 16]

    def test_map_ordered_keeps_input_order(self):
        """Later items finishing first does not reorder the output."""
        from app.services.parallel import ParallelExecutor

        def slow_for_small(x):
            time.sleep(0.01 * (5 - x))
            return x

        assert ParallelExecutor(4).map_ordered(slow_for_small, range(5)) == [0, 1, 2, 3, 4]

    def test_map_ordered_propagates(self):
        from app.services.parallel import ParallelExecutor

        def fail_on_two(x):
            if x == 2:
                raise ValueError("two")
            return x

        with pytest.raises(ValueError):
            ParallelExecutor(2).map_ordered(fail_on_two, range(4))

    def test_scan_independent_of_threads(self):
        """Scan output is identical with one worker and with several."""
        from app.tools.identities import c_t_series
        from app.tools.scanner import scan_progressions

        c5 = c_t_series(5, 1000, 2)
        serial = scan_progressions(c5, 12, min_hits=40, max_workers=1)
        threaded = scan_progressions(c5, 12, min_hits=40, max_workers=4)
        assert serial == threaded
