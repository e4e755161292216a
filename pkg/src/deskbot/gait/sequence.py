"""Timed keyframes, linear interpolation, and gait parameters."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from deskbot.body import ALL_JOINTS, NEUTRAL_DEG, RobotBodyConfig

CYCLIC_SEAM_TOL = 1e-9


class JointSetMismatchError(ValueError):
    """Keyframes being interpolated target different joint sets."""


class LimitViolationError(ValueError):
    """A generated angle leaves the servo's mechanical range."""


@dataclass(frozen=True)
class Keyframe:
    t: float  # seconds from sequence start
    targets: dict[str, float]  # joint name -> angle (deg)

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("keyframe time must be >= 0")


@dataclass(frozen=True)
class GaitSequence:
    keyframes: tuple[Keyframe, ...]
    period: float
    cyclic: bool
    name: str = "sequence"

    def __post_init__(self):
        if not self.keyframes:
            raise ValueError("sequence needs at least one keyframe")
        times = [k.t for k in self.keyframes]
        if any(a >= b for a, b in zip(times, times[1:])):
            raise ValueError("keyframe times must be strictly increasing")
        if self.cyclic:
            first, last = self.keyframes[0], self.keyframes[-1]
            if first.targets.keys() != last.targets.keys():
                raise ValueError("cyclic sequence first/last joint sets differ")
            for joint, angle in first.targets.items():
                if abs(angle - last.targets[joint]) > CYCLIC_SEAM_TOL:
                    raise ValueError(
                        f"cyclic sequence discontinuous at seam: {joint} "
                        f"{angle} != {last.targets[joint]}"
                    )

    @property
    def joints(self) -> tuple[str, ...]:
        return tuple(self.keyframes[0].targets)

    @property
    def duration(self) -> float:
        return self.keyframes[-1].t

    def sample(self, t: float) -> dict[str, float]:
        """Joint targets at time t; cyclic sequences wrap modulo the period."""
        if self.cyclic:
            t = t % self.period
        t = min(max(t, self.keyframes[0].t), self.keyframes[-1].t)
        lo = 0
        for i, kf in enumerate(self.keyframes):
            if kf.t <= t:
                lo = i
            else:
                break
        if lo == len(self.keyframes) - 1:
            return dict(self.keyframes[-1].targets)
        return interpolate(self.keyframes[lo], self.keyframes[lo + 1], t)


def interpolate(a: Keyframe, b: Keyframe, t: float) -> dict[str, float]:
    """Per-joint linear interpolation between two keyframes; exact at endpoints."""
    if a.targets.keys() != b.targets.keys():
        missing = a.targets.keys() ^ b.targets.keys()
        raise JointSetMismatchError(f"joint sets differ: {sorted(missing)}")
    if not a.t <= t <= b.t:
        raise ValueError(f"query time {t} outside [{a.t}, {b.t}]")
    if t == a.t:
        return dict(a.targets)
    if t == b.t:
        return dict(b.targets)
    frac = (t - a.t) / (b.t - a.t)
    return {j: a.targets[j] + frac * (b.targets[j] - a.targets[j]) for j in a.targets}


def default_neutral() -> dict[str, float]:
    return {joint: NEUTRAL_DEG for joint in ALL_JOINTS}


@dataclass(frozen=True)
class GaitParams:
    step_period: float = 1.2
    hip_amplitude: float = 20.0
    knee_amplitude: float = 25.0
    ankle_amplitude: float = 10.0
    neutral: dict[str, float] = field(default_factory=default_neutral)
    frames_per_cycle: int = 20

    def __post_init__(self):
        if self.step_period <= 0:
            raise ValueError("step_period must be positive")
        if min(self.hip_amplitude, self.knee_amplitude, self.ankle_amplitude) < 0:
            raise ValueError("amplitudes must be >= 0")
        if self.frames_per_cycle < 2:
            raise ValueError("frames_per_cycle must be at least 2")
        if self.frames_per_cycle % 2:
            # half-period shifts must land on the keyframe grid, or leg
            # antiphase would not survive linear interpolation
            raise ValueError("frames_per_cycle must be even")

    def scaled(self, period_factor: float, leg_amplitude_factor: float) -> "GaitParams":
        return replace(
            self,
            step_period=self.step_period * period_factor,
            hip_amplitude=self.hip_amplitude * leg_amplitude_factor,
            knee_amplitude=self.knee_amplitude * leg_amplitude_factor,
            ankle_amplitude=self.ankle_amplitude * leg_amplitude_factor,
        )

    def check_against(self, body: RobotBodyConfig) -> None:
        """Amplitude envelope must stay inside every leg servo's range."""
        for side in ("left", "right"):
            for joint_kind, amp in (
                ("hip", self.hip_amplitude),
                ("knee", self.knee_amplitude),
                ("ankle", self.ankle_amplitude),
            ):
                joint = f"{side}_{joint_kind}"
                spec = body.servo(joint)
                mid = self.neutral.get(joint, NEUTRAL_DEG)
                if mid - amp < 0 or mid + amp > spec.angle_range:
                    raise LimitViolationError(
                        f"{joint}: neutral {mid} +/- amplitude {amp} leaves "
                        f"[0, {spec.angle_range}]"
                    )
