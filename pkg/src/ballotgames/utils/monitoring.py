"""
Monitoring utilities for experiment runs.

Provides the operation timer used across the harness and a trial monitor that
collects per-game outcomes for a run summary.
"""

import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime
from functools import wraps
from threading import Lock
from typing import Any, Callable, Dict, Optional, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar('T')

SLOW_OPERATION_SECONDS = 30.0


@dataclass
class TrialMonitor:
    """Collects outcomes of the games played in one run."""
    label: str
    trials: int = 0
    wins: int = 0
    faults: int = 0
    disqualifications: Counter = field(default_factory=Counter)
    total_duration: float = 0.0
    lock: Lock = field(default_factory=Lock, repr=False, compare=False)

    def record_game(self, won: bool, disqualified: Optional[str], duration: float) -> None:
        """Record one finished game."""
        with self.lock:
            self.trials += 1
            self.total_duration += duration
            if won:
                self.wins += 1
            if disqualified:
                self.disqualifications[disqualified] += 1

    def record_fault(self) -> None:
        """Record a faulted trial."""
        with self.lock:
            self.faults += 1

    def get_summary(self) -> Dict[str, Any]:
        """Get a summary of the run so far."""
        with self.lock:
            return {
                "label": self.label,
                "trials": self.trials,
                "wins": self.wins,
                "faults": self.faults,
                "disqualifications": dict(self.disqualifications),
                "avg_game_seconds": (
                    self.total_duration / self.trials if self.trials > 0 else 0.0
                ),
            }


class PerformanceTimer:
    """Context manager for measuring operation performance."""

    def __init__(self, operation: str, component: str):
        self.operation = operation
        self.component = component
        self.start_time: Optional[float] = None
        self.end_time: Optional[float] = None

    @property
    def duration(self) -> float:
        if self.start_time is None:
            return 0.0
        end = self.end_time if self.end_time is not None else time.perf_counter()
        return end - self.start_time

    def __enter__(self) -> "PerformanceTimer":
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        self.end_time = time.perf_counter()
        duration = self.duration

        logger.info(
            f"Performance: {self.operation} in {self.component} took {duration:.3f}s",
            extra={
                "operation": self.operation,
                "component": self.component,
                "duration_seconds": duration,
                "timestamp": datetime.now().isoformat()
            }
        )

        if duration > SLOW_OPERATION_SECONDS:
            logger.warning(
                f"Slow operation: {self.operation} took {duration:.1f}s",
                extra={"duration_seconds": duration, "threshold": SLOW_OPERATION_SECONDS}
            )


def performance_monitor(operation: str, component: str) -> Callable[[Callable[..., T]], Callable[..., T]]:
    """Decorator for monitoring operation performance."""

    def decorator(func: Callable[..., T]) -> Callable[..., T]:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> T:
            with PerformanceTimer(operation, component):
                return func(*args, **kwargs)
        return wrapper

    return decorator
