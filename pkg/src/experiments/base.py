"""
Base Experiment Class
"""
import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..collectors import TimingCollector
from ..core.harness import FidelitySeries, LabelledState, ProgressCallback, ScoreRow, SweepRow
from .schema import ExperimentConfig

logger = logging.getLogger(__name__)


@dataclass
class ExperimentResult:
    """Result of an experiment; everything except timing is deterministic"""
    name: str
    config: ExperimentConfig
    states: List[LabelledState]
    rows: List[SweepRow]
    series: Dict[int, FidelitySeries] = field(default_factory=dict)
    scores: Dict[int, List[ScoreRow]] = field(default_factory=dict)
    thresholds: Dict[int, Optional[float]] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    # Console only
    duration_seconds: float = 0.0
    timing_summary: Dict = field(default_factory=dict)

    @property
    def degenerate_runs(self) -> int:
        return sum(row.degenerate_runs for row in self.rows)


class BaseExperiment(ABC):
    """Base class for experiments: setup, execute, teardown"""

    def __init__(self, name: str, config: ExperimentConfig):
        self.name = name
        self.config = config
        self.timing_collector = TimingCollector()
        self.warnings: List[str] = []

    @abstractmethod
    def setup(self):
        """Resolve inputs"""

    @abstractmethod
    def execute(self, progress: Optional[ProgressCallback] = None):
        """Run the computation"""

    def teardown(self):
        pass

    @abstractmethod
    def build_result(self) -> ExperimentResult:
        pass

    def run(self, progress: Optional[ProgressCallback] = None) -> ExperimentResult:
        """Run the complete experiment"""
        start = time.perf_counter()
        try:
            with self.timing_collector.measure("setup"):
                self.setup()
            with self.timing_collector.measure("execute", metadata=self.cell_metadata()):
                self.execute(progress)
        finally:
            self.teardown()

        result = self.build_result()
        result.warnings = list(self.warnings)
        result.duration_seconds = round(time.perf_counter() - start, 3)
        result.timing_summary = self.timing_collector.get_summary()
        logger.info(f"Experiment '{self.name}' finished in {result.duration_seconds:.1f}s")
        return result

    def cell_metadata(self) -> dict:
        return {}
