"""Servo bus abstraction and the simulated implementation.

The simulated bus models each servo as a first-order slew-limited plant:
the actual angle chases the commanded angle at the servo's rated speed,
never overshooting. Pulse jitter is switchable: hardware-timed PWM is
exact, software-timed adds seeded gaussian noise to the *effective* pulse
(what a scope would show on the wire); the plant tracks the commanded
angle either way so the state invariant |actual - commanded| is monotone
under a constant command.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace

import numpy as np

from deskbot.body import RobotBodyConfig, pulse_to_angle
from .trace import TraceLog

SOFTWARE_JITTER_SIGMA_US = 15.0


class ServoBusError(Exception):
    """Base for bus-level failures."""


class UnknownChannelError(ServoBusError):
    pass


class PulseOutOfRangeError(ServoBusError):
    pass


class BusFaultError(ServoBusError):
    """Injected or propagated hardware fault."""


class BusOwnershipError(ServoBusError):
    """A second executor tried to own the bus."""


@dataclass(frozen=True)
class JitterMode:
    kind: str  # "hardware" | "software"
    sigma_us: float = SOFTWARE_JITTER_SIGMA_US

    def __post_init__(self):
        if self.kind not in ("hardware", "software"):
            raise ValueError(f"jitter kind must be hardware or software, got {self.kind!r}")
        if self.sigma_us < 0:
            raise ValueError("sigma_us must be >= 0")

    @classmethod
    def hardware(cls) -> "JitterMode":
        return cls(kind="hardware", sigma_us=0.0)

    @classmethod
    def software(cls, sigma_us: float = SOFTWARE_JITTER_SIGMA_US) -> "JitterMode":
        return cls(kind="software", sigma_us=sigma_us)


@dataclass
class SimulatedServoState:
    channel: int
    commanded_angle: float
    actual_angle: float
    last_pulse: float


class ServoBus:
    """Interface every bus backend implements."""

    def set_pulse(self, channel: int, pulse: float) -> float:
        raise NotImplementedError

    def tick(self, dt: float) -> None:
        raise NotImplementedError

    def snapshot(self):
        raise NotImplementedError


class GpioServoBus(ServoBus):
    """Placeholder for a physical GPIO backend; not implemented here."""

    def __init__(self, *args, **kwargs):
        raise NotImplementedError("physical GPIO output is not available in this build")


class SimServoBus(ServoBus):
    def __init__(
        self,
        body: RobotBodyConfig,
        jitter: JitterMode | None = None,
        seed: int = 0,
        start_angle: float = 90.0,
        trace: TraceLog | None = None,
    ):
        self.body = body
        self.jitter = jitter or JitterMode.hardware()
        self.trace = trace if trace is not None else TraceLog()
        self.clock = 0.0
        self._rng = np.random.default_rng(seed)
        self._lock = threading.Lock()
        self._owner = None
        self._fault: str | None = None
        self._states = {
            spec.channel: SimulatedServoState(
                channel=spec.channel,
                commanded_angle=start_angle,
                actual_angle=start_angle,
                last_pulse=0.0,
            )
            for spec in body.servos
        }

    # -- ownership token: the overseer's single-task rule is asserted here

    def acquire(self, owner: str) -> None:
        with self._lock:
            if self._owner is not None:
                raise BusOwnershipError(f"bus owned by {self._owner!r}, wanted by {owner!r}")
            self._owner = owner

    def release(self, owner: str) -> None:
        with self._lock:
            if self._owner == owner:
                self._owner = None

    @property
    def owner(self):
        return self._owner

    # -- fault injection (tests, chaos directives)

    def inject_fault(self, reason: str) -> None:
        with self._lock:
            self._fault = reason

    def clear_fault(self) -> None:
        with self._lock:
            self._fault = None

    # -- bus operations

    def set_pulse(self, channel: int, pulse: float) -> float:
        """Command a pulse; returns the effective (possibly jittered) pulse."""
        with self._lock:
            if self._fault:
                raise BusFaultError(self._fault)
            spec = self.body.servo_at(channel)
            if spec is None:
                raise UnknownChannelError(f"channel {channel} not on this bus")
            if not spec.min_pulse <= pulse <= spec.max_pulse:
                raise PulseOutOfRangeError(
                    f"channel {channel}: pulse {pulse} outside "
                    f"[{spec.min_pulse}, {spec.max_pulse}]"
                )
            if self.jitter.kind == "software":
                effective = pulse + self._rng.normal(0.0, self.jitter.sigma_us)
            else:
                effective = pulse
            state = self._states[channel]
            state.commanded_angle = pulse_to_angle(pulse, spec)
            state.last_pulse = effective
            self.trace.append(self.clock, channel, pulse, effective, state.actual_angle)
            return effective

    def tick(self, dt: float) -> None:
        """Advance the plant: each angle moves toward its command, slew-limited."""
        if dt <= 0:
            raise ValueError("dt must be positive")
        with self._lock:
            for spec in self.body.servos:
                state = self._states[spec.channel]
                delta = state.commanded_angle - state.actual_angle
                limit = spec.max_slew * dt
                if abs(delta) <= limit:
                    state.actual_angle = state.commanded_angle
                else:
                    state.actual_angle += limit if delta > 0 else -limit
            self.clock += dt

    def snapshot(self) -> tuple[float, list[SimulatedServoState]]:
        """Consistent whole-bus copy of (time, per-servo states)."""
        with self._lock:
            return self.clock, [replace(s) for s in self._states.values()]

    def state_of(self, channel: int) -> SimulatedServoState:
        with self._lock:
            if channel not in self._states:
                raise UnknownChannelError(f"channel {channel} not on this bus")
            return replace(self._states[channel])
