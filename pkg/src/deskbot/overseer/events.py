"""Typed runtime events flowing between session, segments, and gateway."""

from __future__ import annotations

from dataclasses import dataclass, field

EVENT_KINDS = (
    "transcript",
    "command_detected",
    "chat_turn",
    "task_started",
    "task_finished",
    "assistant_answered",
    "segment_failed",
    "error_report",
)


@dataclass(frozen=True)
class RuntimeEvent:
    kind: str
    time: float
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "time": self.time, **self.data}
