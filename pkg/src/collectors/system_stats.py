"""
System Stats Collector
Host resources, used to suggest a worker count for sweeps
"""
from typing import Dict

import psutil

# Rough resident size of one sweep worker process
WORKER_MEMORY_GB = 0.25


class SystemStatsCollector:
    """Collects host CPU and memory information"""

    def get_system_stats(self) -> Dict:
        memory = psutil.virtual_memory()
        return {
            "cpu_count": psutil.cpu_count(logical=True) or 1,
            "cpu_physical": psutil.cpu_count(logical=False) or 1,
            "cpu_percent": psutil.cpu_percent(interval=0.1),
            "memory_total_gb": round(memory.total / (1024 ** 3), 2),
            "memory_available_gb": round(memory.available / (1024 ** 3), 2),
            "memory_percent": memory.percent,
        }

    def suggested_workers(self, stats: Dict = None) -> int:
        """Physical cores, capped by available memory"""
        stats = stats or self.get_system_stats()
        by_memory = int(stats["memory_available_gb"] / WORKER_MEMORY_GB)
        return max(1, min(stats["cpu_physical"], by_memory))
