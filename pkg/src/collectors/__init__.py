"""Collectors module"""
from .system_stats import SystemStatsCollector
from .timing_collector import TimingCollector

__all__ = ['SystemStatsCollector', 'TimingCollector']
