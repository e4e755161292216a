"""Gait generation and interruptible execution over a servo bus."""

from deskbot.body import (
    AngleOutOfRangeError,
    PulseExceedsPeriodError,
    RobotBodyConfig,
    ServoSpec,
    angle_to_pulse,
    default_body,
    pulse_to_angle,
    pulse_to_duty,
)
from .sequence import (
    GaitParams,
    GaitSequence,
    JointSetMismatchError,
    Keyframe,
    LimitViolationError,
    interpolate,
)
from .generators import (
    generate_pickup,
    generate_run_cycle,
    generate_turn,
    generate_walk_cycle,
)
from .executor import GaitRun, TaskCommand, TaskOutcome, execute

__all__ = [
    "AngleOutOfRangeError",
    "GaitParams",
    "GaitRun",
    "GaitSequence",
    "JointSetMismatchError",
    "Keyframe",
    "LimitViolationError",
    "PulseExceedsPeriodError",
    "RobotBodyConfig",
    "ServoSpec",
    "TaskCommand",
    "TaskOutcome",
    "angle_to_pulse",
    "default_body",
    "execute",
    "generate_pickup",
    "generate_run_cycle",
    "generate_turn",
    "generate_walk_cycle",
    "interpolate",
    "pulse_to_angle",
    "pulse_to_duty",
]
