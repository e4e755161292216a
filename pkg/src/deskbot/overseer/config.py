"""Runtime configuration file (JSON) loading."""

from __future__ import annotations

import datetime
import json
from dataclasses import dataclass, field
from pathlib import Path

from deskbot.body import RobotBodyConfig, ServoSpec, default_body
from deskbot.gait.sequence import GaitParams, default_neutral
from deskbot.hal.bus import JitterMode
from deskbot.intent.corpus import bundled_corpus_path
from deskbot.assistant.providers import bundled_fixture_path


@dataclass
class RuntimeConfig:
    intents: Path
    fixture: Path
    model: Path | None = None
    jitter: JitterMode = field(default_factory=JitterMode.hardware)
    bus_seed: int = 0
    gait: GaitParams = field(default_factory=GaitParams)
    body: RobotBodyConfig = field(default_factory=default_body)
    transcript: str = "interactive"  # interactive | script:<path> | gateway
    serve: str | None = None
    seed: int = 0
    threshold: float = 0.25
    metrics_csv: Path | None = None
    trace_csv: Path | None = None
    error_log: Path | None = None
    growth_log: Path | None = None
    script_step_s: float = 0.5
    fixed_date: datetime.date | None = None

    @property
    def script_path(self) -> Path | None:
        if self.transcript.startswith("script:"):
            return Path(self.transcript.split(":", 1)[1])
        return None


def gait_from_dict(data: dict) -> GaitParams:
    neutral = default_neutral()
    neutral.update(data.get("neutral", {}))
    return GaitParams(
        step_period=float(data.get("step_period", 1.2)),
        hip_amplitude=float(data.get("hip_amplitude", 20.0)),
        knee_amplitude=float(data.get("knee_amplitude", 25.0)),
        ankle_amplitude=float(data.get("ankle_amplitude", 10.0)),
        neutral=neutral,
        frames_per_cycle=int(data.get("frames_per_cycle", 20)),
    )


def body_from_dict(data: dict) -> RobotBodyConfig:
    servos = tuple(
        ServoSpec(
            id=s["id"],
            channel=int(s["channel"]),
            model=s["model"],
            min_pulse=float(s.get("min_pulse", 500.0)),
            max_pulse=float(s.get("max_pulse", 2500.0)),
            angle_range=float(s.get("angle_range", 180.0)),
            max_slew=float(s["max_slew"]) if "max_slew" in s else None,
        )
        for s in data["servos"]
    )
    return RobotBodyConfig(servos=servos, pwm_frequency=float(data.get("pwm_frequency", 50.0)))


def jitter_from_dict(data: dict) -> JitterMode:
    kind = data.get("jitter", "hardware")
    if kind == "software":
        return JitterMode.software(float(data.get("jitter_sigma_us", 15.0)))
    return JitterMode.hardware()


def load_config(path: str | Path) -> RuntimeConfig:
    """Parse a runtime config; relative paths resolve against the file."""
    path = Path(path)
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    base = path.parent

    def resolve(key, default=None):
        value = doc.get(key, default)
        if value is None:
            return None
        return (base / value).resolve() if not Path(value).is_absolute() else Path(value)

    bus = doc.get("bus", {})
    if bus.get("kind", "sim") != "sim":
        raise ValueError(f"unsupported bus kind {bus.get('kind')!r}; only 'sim' is built")

    outputs = doc.get("outputs", {})

    def out_path(key):
        value = outputs.get(key)
        if value is None:
            return None
        p = Path(value)
        return (base / p) if not p.is_absolute() else p

    transcript = doc.get("transcript", "interactive")
    if transcript.startswith("script:"):
        script = transcript.split(":", 1)[1]
        if not Path(script).is_absolute():
            transcript = f"script:{(base / script).resolve()}"
    elif transcript not in ("interactive", "gateway"):
        raise ValueError(f"unknown transcript source {transcript!r}")

    fixed_date = None
    if doc.get("fixed_date"):
        fixed_date = datetime.date.fromisoformat(doc["fixed_date"])

    return RuntimeConfig(
        intents=resolve("intents") or bundled_corpus_path(),
        fixture=resolve("fixture") or bundled_fixture_path(),
        model=resolve("model"),
        jitter=jitter_from_dict(bus),
        bus_seed=int(bus.get("seed", 0)),
        gait=gait_from_dict(doc.get("gait", {})),
        body=body_from_dict(doc["body"]) if "body" in doc else default_body(),
        transcript=transcript,
        serve=doc.get("serve"),
        seed=int(doc.get("seed", 0)),
        threshold=float(doc.get("threshold", 0.25)),
        metrics_csv=out_path("metrics_csv"),
        trace_csv=out_path("trace_csv"),
        error_log=out_path("error_log"),
        growth_log=out_path("growth_log"),
        script_step_s=float(doc.get("script_step_s", 0.5)),
        fixed_date=fixed_date,
    )
