"""Parametric gait construction: walk, run, turn, pick-up.

Walk is a sinusoidal keyframe cycle: legs in exact antiphase, knees leading
hips by a quarter period for swing clearance, shoulders counter-swinging at
a quarter of the hip amplitude. Run and turn are derived transformations of
walk; pick-up is a fixed scripted sequence.
"""

from __future__ import annotations

import math

from deskbot.body import ALL_JOINTS, NEUTRAL_DEG, RobotBodyConfig
from .sequence import GaitParams, GaitSequence, Keyframe, LimitViolationError

RUN_PERIOD_FACTOR = 0.6
RUN_AMPLITUDE_FACTOR = 1.25
TURN_INNER_HIP_FACTOR = 0.5

PICKUP_DURATION_S = 4.0
PICKUP_KEYFRAMES = 6
GRIPPER_CLOSED_DEG = 30.0


def _check_limits(body: RobotBodyConfig, keyframes: list[Keyframe], name: str) -> None:
    for kf in keyframes:
        for joint, angle in kf.targets.items():
            limit = body.servo(joint).angle_range
            if not 0.0 <= angle <= limit:
                raise LimitViolationError(
                    f"{name}: {joint} = {angle:.3f} deg at t={kf.t:.3f} "
                    f"outside [0, {limit}]"
                )


def _sin_cycle(
    params: GaitParams,
    body: RobotBodyConfig,
    hip_amp: dict[str, float],
    name: str,
) -> GaitSequence:
    """Build one cyclic gait period from per-side hip amplitudes.

    Keyframes sit at k*period/frames_per_cycle for k = 0..frames_per_cycle;
    the final frame closes the seam (equal to the first). frames_per_cycle
    is even, so a half-period shift lands exactly on the keyframe grid and
    leg antiphase survives linear interpolation.
    """
    params.check_against(body)
    period = params.step_period
    n = params.frames_per_cycle
    omega = 2.0 * math.pi / period

    def neutral(joint):
        return params.neutral.get(joint, NEUTRAL_DEG)

    # phase offset per side: right side lags by half a period
    side_phase = {"left": 0.0, "right": math.pi}

    keyframes = []
    for k in range(n + 1):
        t = k * period / n
        targets = {joint: neutral(joint) for joint in ALL_JOINTS}
        for side in ("left", "right"):
            phase = omega * t + side_phase[side]
            targets[f"{side}_hip"] += hip_amp[side] * math.sin(phase)
            targets[f"{side}_knee"] += params.knee_amplitude * math.sin(phase + math.pi / 2)
            targets[f"{side}_ankle"] += params.ankle_amplitude * math.sin(phase)
            targets[f"{side}_shoulder"] += (hip_amp[side] / 4.0) * math.sin(phase + math.pi)
        keyframes.append(Keyframe(t=t, targets=targets))

    # close the seam exactly: float sin(2*pi) is ~1e-16 off zero
    keyframes[-1] = Keyframe(t=keyframes[-1].t, targets=dict(keyframes[0].targets))
    _check_limits(body, keyframes, name)
    return GaitSequence(keyframes=tuple(keyframes), period=period, cyclic=True, name=name)


def generate_walk_cycle(params: GaitParams, body: RobotBodyConfig) -> GaitSequence:
    amp = params.hip_amplitude
    return _sin_cycle(params, body, {"left": amp, "right": amp}, "walk")


def generate_run_cycle(params: GaitParams, body: RobotBodyConfig) -> GaitSequence:
    scaled = params.scaled(RUN_PERIOD_FACTOR, RUN_AMPLITUDE_FACTOR)
    amp = scaled.hip_amplitude
    return _sin_cycle(scaled, body, {"left": amp, "right": amp}, "run")


def generate_turn(params: GaitParams, body: RobotBodyConfig, direction: str) -> GaitSequence:
    """Walk cycle with the turn-side hip amplitude halved."""
    if direction not in ("left", "right"):
        raise ValueError(f"turn direction must be 'left' or 'right', got {direction!r}")
    amp = params.hip_amplitude
    hip_amp = {side: amp for side in ("left", "right")}
    hip_amp[direction] *= TURN_INNER_HIP_FACTOR
    return _sin_cycle(params, body, hip_amp, f"turn-{direction}")


def generate_pickup(
    object_name: str,
    body: RobotBodyConfig,
    params: GaitParams | None = None,
    gripper_closed: float = GRIPPER_CLOSED_DEG,
) -> GaitSequence:
    """Scripted crouch-reach-grip-rise sequence; the object string is carried
    for logging only."""
    if not object_name:
        raise ValueError("pickup needs a nonempty object name")
    params = params or GaitParams()

    def neutral(joint):
        return params.neutral.get(joint, NEUTRAL_DEG)

    def pose(**offsets):
        targets = {joint: neutral(joint) for joint in ALL_JOINTS}
        for joint, delta in offsets.items():
            targets[joint] = neutral(joint) + delta
        return targets

    crouch = dict(
        left_knee=35.0, right_knee=35.0,
        left_hip=-25.0, right_hip=-25.0,
        left_ankle=10.0, right_ankle=10.0,
    )
    reach = dict(
        crouch,
        left_shoulder=40.0, right_shoulder=40.0,
        left_elbow=-35.0, right_elbow=-35.0,
    )
    grip_delta = gripper_closed - neutral("gripper")
    grip = dict(reach, gripper=grip_delta)
    rise = dict(
        left_shoulder=15.0, right_shoulder=15.0,
        left_elbow=-20.0, right_elbow=-20.0,
        gripper=grip_delta,
    )
    hold = dict(
        left_shoulder=5.0, right_shoulder=5.0,
        left_elbow=-10.0, right_elbow=-10.0,
        gripper=grip_delta,
    )

    step = PICKUP_DURATION_S / (PICKUP_KEYFRAMES - 1)
    poses = [pose(), pose(**crouch), pose(**reach), pose(**grip), pose(**rise), pose(**hold)]
    keyframes = [Keyframe(t=i * step, targets=p) for i, p in enumerate(poses)]
    name = f"pickup:{object_name}"
    _check_limits(body, keyframes, name)
    return GaitSequence(
        keyframes=tuple(keyframes), period=PICKUP_DURATION_S, cyclic=False, name=name
    )
