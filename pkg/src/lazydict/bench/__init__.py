"""Workload generation, replay engines, and the benchmark CLI."""

from .runner import Report, run, verify
from .workload import Workload, WorkloadError, generate, parse

__all__ = ["Report", "Workload", "WorkloadError", "generate", "parse", "run", "verify"]
