"""Robot body configuration and the angle <-> pulse-width mapping.

The default body is 12 hobby servos on one bus: 8 large MG995 for legs and
shoulders, 4 micro SG90 for elbows, neck pan and the gripper, all driven at
50 Hz with 500-2500 us pulses over a 180 degree range.
"""

from __future__ import annotations

from dataclasses import dataclass, field

PWM_FREQUENCY_HZ = 50.0

# Rated no-load speeds: MG995 ~0.16 s / 60 deg, SG90 ~0.11 s / 60 deg.
SLEW_DEG_PER_S = {"MG995": 375.0, "SG90": 545.0}

LEG_JOINTS = (
    "left_hip", "right_hip",
    "left_knee", "right_knee",
    "left_ankle", "right_ankle",
)
ARM_JOINTS = ("left_shoulder", "right_shoulder", "left_elbow", "right_elbow")
HEAD_JOINTS = ("neck_pan",)
GRIPPER_JOINT = "gripper"

ALL_JOINTS = LEG_JOINTS + ARM_JOINTS + HEAD_JOINTS + (GRIPPER_JOINT,)

NEUTRAL_DEG = 90.0


class AngleOutOfRangeError(ValueError):
    """Requested angle is outside the servo's mechanical range."""


class PulseExceedsPeriodError(ValueError):
    """Pulse width longer than one PWM period."""


@dataclass(frozen=True)
class ServoSpec:
    id: str
    channel: int
    model: str  # "MG995" or "SG90"
    min_pulse: float = 500.0
    max_pulse: float = 2500.0
    angle_range: float = 180.0
    max_slew: float | None = None  # deg/s; None = model default

    def __post_init__(self):
        if self.model not in SLEW_DEG_PER_S:
            raise ValueError(f"unknown servo model {self.model!r}")
        if self.min_pulse >= self.max_pulse:
            raise ValueError("min_pulse must be below max_pulse")
        if self.angle_range <= 0:
            raise ValueError("angle_range must be positive")
        if self.max_slew is None:
            object.__setattr__(self, "max_slew", SLEW_DEG_PER_S[self.model])
        if self.max_slew <= 0:
            raise ValueError("max_slew must be positive")


@dataclass(frozen=True)
class RobotBodyConfig:
    servos: tuple[ServoSpec, ...]
    pwm_frequency: float = PWM_FREQUENCY_HZ
    _by_id: dict = field(init=False, repr=False, compare=False)
    _by_channel: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        models = [s.model for s in self.servos]
        if models.count("MG995") != 8 or models.count("SG90") != 4:
            raise ValueError(
                f"body needs exactly 8 MG995 + 4 SG90 servos, got "
                f"{models.count('MG995')} + {models.count('SG90')}"
            )
        channels = [s.channel for s in self.servos]
        if len(set(channels)) != len(channels):
            raise ValueError("servo channels must be unique")
        ids = [s.id for s in self.servos]
        if len(set(ids)) != len(ids):
            raise ValueError("servo ids must be unique")
        object.__setattr__(self, "_by_id", {s.id: s for s in self.servos})
        object.__setattr__(self, "_by_channel", {s.channel: s for s in self.servos})

    @property
    def joint_names(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.servos)

    @property
    def channels(self) -> tuple[int, ...]:
        return tuple(s.channel for s in self.servos)

    def servo(self, joint: str) -> ServoSpec:
        return self._by_id[joint]

    def servo_at(self, channel: int) -> ServoSpec | None:
        return self._by_channel.get(channel)


def default_body() -> RobotBodyConfig:
    """Standard 12-joint layout; channel order matches ALL_JOINTS."""
    large = LEG_JOINTS + ("left_shoulder", "right_shoulder")
    micro = ("left_elbow", "right_elbow", "neck_pan", GRIPPER_JOINT)
    servos = tuple(
        ServoSpec(id=joint, channel=ch, model="MG995")
        for ch, joint in enumerate(large)
    ) + tuple(
        ServoSpec(id=joint, channel=ch + len(large), model="SG90")
        for ch, joint in enumerate(micro)
    )
    return RobotBodyConfig(servos=servos)


def angle_to_pulse(angle: float, spec: ServoSpec) -> float:
    """Linear map from joint angle to pulse width in microseconds."""
    if not 0.0 <= angle <= spec.angle_range:
        raise AngleOutOfRangeError(
            f"{spec.id}: angle {angle} outside [0, {spec.angle_range}]"
        )
    return spec.min_pulse + (angle / spec.angle_range) * (spec.max_pulse - spec.min_pulse)


def pulse_to_angle(pulse: float, spec: ServoSpec) -> float:
    """Inverse of angle_to_pulse; pulse must be within the servo's range."""
    return (pulse - spec.min_pulse) / (spec.max_pulse - spec.min_pulse) * spec.angle_range


def pulse_to_duty(pulse: float, frequency: float = PWM_FREQUENCY_HZ) -> float:
    """Fraction of one PWM period the signal is high."""
    period_us = 1e6 / frequency
    if pulse > period_us:
        raise PulseExceedsPeriodError(f"pulse {pulse} us exceeds period {period_us} us")
    if pulse < 0:
        raise ValueError("pulse must be non-negative")
    return pulse / period_us
