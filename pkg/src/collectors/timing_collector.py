"""
Timing Collector
Wall-clock timing of experiment phases and sweep cells (console display only)
"""
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, List, Optional


@dataclass
class TimingEntry:
    """A single timing measurement"""
    operation: str
    duration_ms: float
    success: bool = True
    error: Optional[str] = None
    metadata: dict = field(default_factory=dict)


class TimingCollector:
    """Collects timing measurements; never written to result files"""

    def __init__(self):
        self.timings: List[TimingEntry] = []

    @contextmanager
    def measure(self, operation: str, metadata: Optional[dict] = None):
        """Context manager for measuring operation time"""
        start = time.perf_counter()
        success = True
        error = None
        try:
            yield
        except Exception as e:
            success = False
            error = str(e)
            raise
        finally:
            duration_ms = (time.perf_counter() - start) * 1000
            self.timings.append(TimingEntry(operation, round(duration_ms, 2), success, error, metadata or {}))

    def get_statistics(self, operation: str) -> Dict:
        timings = [t for t in self.timings if t.operation == operation]
        if not timings:
            return {}

        durations = sorted(t.duration_ms for t in timings)
        n = len(durations)
        stats = {
            "count": n,
            "failure_count": sum(1 for t in timings if not t.success),
            "min_ms": round(durations[0], 2),
            "max_ms": round(durations[-1], 2),
            "avg_ms": round(sum(durations) / n, 2),
            "p50_ms": round(durations[int(n * 0.5)], 2),
            "total_ms": round(sum(durations), 2),
        }
        cells = sum(t.metadata.get("cells", 0) for t in timings)
        if cells:
            stats["ms_per_cell"] = round(stats["total_ms"] / cells, 2)
        return stats

    def get_summary(self) -> Dict:
        """Statistics per operation, in first-seen order"""
        operations = list(dict.fromkeys(t.operation for t in self.timings))
        return {op: self.get_statistics(op) for op in operations}

    def clear(self):
        self.timings = []
