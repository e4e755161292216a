"""Segment supervision: failure detection, reporting, restart with backoff.

Segments are supervised workers behind a call() boundary. A raising worker
is marked failed, a SegmentFailed event plus exactly one ErrorReport are
emitted immediately, and a restart is scheduled with backoff - unless the
segment exceeded the restart budget for the rolling window, in which case
it is parked as failed. Other segments are untouched; callers see
SegmentUnavailableError and degrade gracefully.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .events import RuntimeEvent


class SegmentUnavailableError(RuntimeError):
    """The segment is failed or restarting; the call was not made."""


@dataclass(frozen=True)
class RestartPolicy:
    backoffs: tuple[float, ...] = (0.5, 1.0, 2.0)
    max_restarts: int = 3
    window_s: float = 60.0


@dataclass
class Segment:
    name: str
    factory: object  # zero-arg callable building the worker
    worker: object = None
    status: str = "running"  # running | restarting | failed
    reason: str | None = None
    restart_count: int = 0
    failure_times: list[float] = field(default_factory=list)
    restart_due: float | None = None


class Supervisor:
    def __init__(self, clock, on_event=None, policy: RestartPolicy | None = None):
        self.clock = clock
        self.policy = policy or RestartPolicy()
        self._on_event = on_event or (lambda event: None)
        self._segments: dict[str, Segment] = {}

    def register(self, name: str, factory) -> None:
        segment = Segment(name=name, factory=factory)
        segment.worker = factory()
        self._segments[name] = segment

    def segment(self, name: str) -> Segment:
        return self._segments[name]

    @property
    def names(self):
        return tuple(self._segments)

    def status(self) -> list[dict]:
        return [
            {
                "name": s.name,
                "status": s.status,
                "reason": s.reason,
                "restart_count": s.restart_count,
            }
            for s in self._segments.values()
        ]

    def is_running(self, name: str) -> bool:
        return self._segments[name].status == "running"

    def call(self, name: str, method: str, *args, **kwargs):
        """Invoke a worker method; failures isolate to this segment."""
        segment = self._segments[name]
        if segment.status != "running":
            raise SegmentUnavailableError(f"{name} is {segment.status}")
        try:
            return getattr(segment.worker, method)(*args, **kwargs)
        except Exception as exc:  # segment fault: contain, report, degrade
            self._record_failure(segment, f"{type(exc).__name__}: {exc}")
            raise SegmentUnavailableError(f"{name} failed: {exc}") from exc

    def force_fail(self, name: str, reason: str = "forced failure") -> None:
        """Fault injection: mark the segment crashed as if a call raised."""
        self._record_failure(self._segments[name], reason)

    def poll(self) -> None:
        """Revive segments whose restart backoff has elapsed."""
        now = self.clock.now()
        for segment in self._segments.values():
            if segment.status == "restarting" and now >= segment.restart_due:
                segment.worker = segment.factory()
                segment.status = "running"
                segment.reason = None
                segment.restart_due = None
                segment.restart_count += 1

    def _record_failure(self, segment: Segment, reason: str) -> None:
        now = self.clock.now()
        segment.reason = reason
        segment.failure_times.append(now)
        window_start = now - self.policy.window_s
        recent = [t for t in segment.failure_times if t >= window_start]
        segment.failure_times = recent

        self._on_event(
            RuntimeEvent("segment_failed", now, {"segment": segment.name, "reason": reason})
        )
        self._on_event(
            RuntimeEvent("error_report", now, {"segment": segment.name, "reason": reason})
        )

        if len(recent) > self.policy.max_restarts:
            segment.status = "failed"  # parked: out of restart budget
            segment.restart_due = None
        else:
            backoff = self.policy.backoffs[min(len(recent) - 1, len(self.policy.backoffs) - 1)]
            segment.status = "restarting"
            segment.restart_due = now + backoff
