"""Interruptible gait execution against a servo bus.

GaitRun is a single-tick stepper so callers choose the drive mode: the
scripted session steps it inline (deterministic simulated time), while
execute() drives it to completion with optional real-time pacing.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from deskbot.hal.bus import ServoBus, ServoBusError

from deskbot.body import NEUTRAL_DEG, RobotBodyConfig, angle_to_pulse
from .sequence import GaitSequence

DEFAULT_TICK_S = 0.02  # one control frame per 50 Hz PWM period


@dataclass(frozen=True)
class TaskCommand:
    kind: str  # walk | run | stop | turn | pickup | assistant_mode
    direction: str | None = None
    object_name: str | None = None

    KINDS = ("walk", "run", "stop", "turn", "pickup", "assistant_mode")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.kind == "turn" and self.direction not in ("left", "right"):
            raise ValueError("turn needs direction 'left' or 'right'")
        if self.kind == "pickup" and not self.object_name:
            raise ValueError("pickup needs a nonempty object name")

    @property
    def label(self) -> str:
        if self.kind == "turn":
            return f"turn-{self.direction}"
        if self.kind == "pickup":
            return f"pickup:{self.object_name}"
        return self.kind


@dataclass(frozen=True)
class TaskOutcome:
    status: str  # completed | interrupted | faulted
    frames_emitted: int
    elapsed: float
    reason: str | None = None

    def __post_init__(self):
        if self.status not in ("completed", "interrupted", "faulted"):
            raise ValueError(f"bad status {self.status!r}")


class GaitRun:
    """Steps a sequence one control tick at a time.

    repeat: number of periods for cyclic sequences (None = run until the
    interrupt flag is raised); non-cyclic sequences always play once.
    The interrupt flag is checked at every tick; on interrupt the bus gets
    one final neutral-stance frame, so at most one extra frame follows the
    flag being raised.
    """

    def __init__(
        self,
        seq: GaitSequence,
        body: RobotBodyConfig,
        bus: ServoBus,
        tick: float = DEFAULT_TICK_S,
        interrupt: threading.Event | None = None,
        repeat: int | None = 1,
        neutral: dict[str, float] | None = None,
    ):
        if tick <= 0:
            raise ValueError("tick must be positive")
        self.seq = seq
        self.body = body
        self.bus = bus
        self.tick = tick
        self.interrupt = interrupt if interrupt is not None else threading.Event()
        self.neutral = neutral or {j: NEUTRAL_DEG for j in seq.joints}
        if seq.cyclic:
            self.duration = None if repeat is None else seq.period * repeat
        else:
            self.duration = seq.duration
        self.t = 0.0
        self.frames_emitted = 0
        self.outcome: TaskOutcome | None = None

    @property
    def done(self) -> bool:
        return self.outcome is not None

    def _issue(self, targets: dict[str, float]) -> None:
        for joint in sorted(targets):
            spec = self.body.servo(joint)
            self.bus.set_pulse(spec.channel, angle_to_pulse(targets[joint], spec))

    def _finish(self, status: str, reason: str | None = None) -> TaskOutcome:
        self.outcome = TaskOutcome(
            status=status,
            frames_emitted=self.frames_emitted,
            elapsed=self.frames_emitted * self.tick,
            reason=reason,
        )
        return self.outcome

    def step(self) -> TaskOutcome | None:
        """Advance one tick; returns the outcome once finished, else None."""
        if self.outcome is not None:
            return self.outcome
        try:
            if self.interrupt.is_set():
                self._issue(self.neutral)
                self.bus.tick(self.tick)
                self.frames_emitted += 1
                return self._finish("interrupted")
            if self.duration is not None and self.t >= self.duration:
                return self._finish("completed")
            self._issue(self.seq.sample(self.t))
            self.bus.tick(self.tick)
            self.frames_emitted += 1
            self.t += self.tick
            return None
        except ServoBusError as exc:
            return self._finish("faulted", reason=str(exc))


def execute(
    seq: GaitSequence,
    body: RobotBodyConfig,
    bus: ServoBus,
    tick: float = DEFAULT_TICK_S,
    interrupt: threading.Event | None = None,
    repeat: int | None = 1,
    neutral: dict[str, float] | None = None,
    sleep_fn=None,
) -> TaskOutcome:
    """Drive a sequence to completion; sleep_fn paces real-time execution."""
    run = GaitRun(seq, body, bus, tick=tick, interrupt=interrupt, repeat=repeat, neutral=neutral)
    while True:
        outcome = run.step()
        if outcome is not None:
            return outcome
        if sleep_fn is not None:
            sleep_fn(tick)
