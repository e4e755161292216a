"""Segment supervision, command routing, session loop, and metrics."""

from .events import RuntimeEvent
from .router import Route, route
from .metrics import FEATURES, SessionMetrics, export_metrics, read_metrics
from .supervisor import RestartPolicy, SegmentUnavailableError, Supervisor
from .clock import SimClock, WallClock
from .config import RuntimeConfig, load_config
from .session import Session, build_session, run_session

__all__ = [
    "FEATURES",
    "RestartPolicy",
    "Route",
    "RuntimeConfig",
    "RuntimeEvent",
    "Session",
    "SegmentUnavailableError",
    "SessionMetrics",
    "SimClock",
    "Supervisor",
    "WallClock",
    "build_session",
    "export_metrics",
    "load_config",
    "read_metrics",
    "route",
    "run_session",
]
