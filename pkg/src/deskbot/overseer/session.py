"""The session loop: transcripts in, routed actions out, faults contained.

Two drive modes share all routing/dispatch logic:
  - scripted: single-threaded, the loop owns simulated time and steps the
    active gait run inline between lines - fully deterministic.
  - live (repl/gateway): wall clock, the gait executor runs in its own
    thread, "stop" flips the shared interrupt flag.

Script files may contain chaos directives: `!wait <seconds>` advances
simulated time, `!fail <segment> [reason]` injects a segment crash; lines
starting with `#` are comments.
"""

from __future__ import annotations

import json
import random
import threading
from dataclasses import dataclass

from deskbot.assistant.providers import (
    FixedClock,
    SystemClock,
    answer,
    load_fixture,
    parse_query,
)
from deskbot.body import NEUTRAL_DEG
from deskbot.gait.executor import DEFAULT_TICK_S, GaitRun, TaskCommand
from deskbot.gait.generators import (
    generate_pickup,
    generate_run_cycle,
    generate_turn,
    generate_walk_cycle,
)
from deskbot.hal.bus import SimServoBus
from deskbot.hal.display import FACE_FAULT, FACE_NEUTRAL, FACE_SMILE, DotMatrixDisplay
from deskbot.hal.trace import export_trace
from deskbot.intent.corpus import GrowthLog, load_corpus
from deskbot.intent.model import load_model, respond, save_model
from deskbot.intent.network import TrainingConfig
from deskbot.intent.training import train

from .clock import SimClock, WallClock
from .config import RuntimeConfig
from .events import RuntimeEvent
from .metrics import SessionMetrics, export_metrics
from .router import route
from .supervisor import SegmentUnavailableError, Supervisor

SEGMENTS = ("speech", "chatbot", "task_parser", "assistant", "gateway")

BUSY_NOTICE = "I am already doing something; say stop first."
NOTHING_TO_STOP_NOTICE = "Nothing is running right now."
CHAT_UNAVAILABLE_NOTICE = "The chatbot is unavailable right now; please try again shortly."
PARSER_UNAVAILABLE_NOTICE = "I cannot move right now; the task parser is unavailable."
ASSISTANT_UNAVAILABLE_NOTICE = "The home assistant is unavailable right now."
SPEECH_UNAVAILABLE_NOTICE = "Speech recognition is unavailable; utterance dropped."


class SpeechWorker:
    """Stands in for the offline speech recognizer: text passes through."""

    def transcribe(self, raw: str) -> str:
        return raw


class ChatWorker:
    def __init__(self, model, corpus, rng, growth_log, threshold):
        self.model = model
        self.corpus = corpus
        self.rng = rng
        self.growth_log = growth_log
        self.threshold = threshold

    def reply(self, text: str):
        return respond(
            self.model, self.corpus, text, self.rng,
            growth_log=self.growth_log, threshold=self.threshold,
        )


class TaskWorker:
    def __init__(self, body, gait_params):
        self.body = body
        self.gait = gait_params

    def build(self, command: TaskCommand):
        if command.kind == "walk":
            return generate_walk_cycle(self.gait, self.body)
        if command.kind == "run":
            return generate_run_cycle(self.gait, self.body)
        if command.kind == "turn":
            return generate_turn(self.gait, self.body, command.direction)
        if command.kind == "pickup":
            return generate_pickup(command.object_name, self.body, self.gait)
        raise ValueError(f"no sequence for command {command.kind!r}")


class AssistantWorker:
    def __init__(self, fixture, date_clock):
        self.fixture = fixture
        self.date_clock = date_clock

    def answer(self, text: str):
        return answer(parse_query(text), self.fixture, self.date_clock)


class NullWorker:
    """Gateway segment placeholder; health is tracked, nothing is called."""


@dataclass
class ActiveTask:
    label: str
    command: TaskCommand
    run: GaitRun
    thread: threading.Thread | None = None


class Session:
    def __init__(
        self,
        config: RuntimeConfig,
        corpus,
        model,
        fixture,
        clock,
        threaded: bool = False,
        hub=None,
        echo: bool = False,
        tick: float = DEFAULT_TICK_S,
    ):
        self.config = config
        self.body = config.body
        self.bus = SimServoBus(self.body, jitter=config.jitter, seed=config.bus_seed)
        self.display = DotMatrixDisplay()
        self.clock = clock
        self.threaded = threaded
        self.hub = hub
        self.echo = echo
        self.tick = tick
        self.mode = "normal"
        self.active: ActiveTask | None = None
        self.interrupt = threading.Event()
        self.stopping = False
        self.metrics = SessionMetrics()
        self.events: list[RuntimeEvent] = []
        self.outputs: list[tuple[str, str]] = []
        self._lock = threading.RLock()
        self._growth = GrowthLog(sink=config.growth_log, clock=clock)
        self._chat_rng = random.Random(config.seed)
        date_clock = FixedClock(config.fixed_date) if config.fixed_date else SystemClock()

        self.supervisor = Supervisor(clock, on_event=self._emit)
        self.supervisor.register("speech", SpeechWorker)
        self.supervisor.register(
            "chatbot",
            lambda: ChatWorker(model, corpus, self._chat_rng, self._growth, config.threshold),
        )
        self.supervisor.register(
            "task_parser", lambda: TaskWorker(self.body, config.gait)
        )
        self.supervisor.register(
            "assistant", lambda: AssistantWorker(fixture, date_clock)
        )
        self.supervisor.register("gateway", NullWorker)

        self._neutral_pose = {
            joint: config.gait.neutral.get(joint, NEUTRAL_DEG)
            for joint in self.body.joint_names
        }

    # ---- event and output plumbing

    def _emit(self, event: RuntimeEvent) -> None:
        with self._lock:
            self.events.append(event)
            if event.kind == "error_report":
                self.metrics.increment("errors")
                if self.config.error_log is not None:
                    with open(self.config.error_log, "a", encoding="utf-8") as f:
                        f.write(json.dumps(event.to_dict()) + "\n")
                self.display.show(FACE_FAULT)
        if self.hub is not None:
            self.hub.publish_event(event)

    def _event(self, kind: str, **data) -> None:
        self._emit(RuntimeEvent(kind, self.clock.now(), data))

    def say(self, text: str, speaker: str = "robot") -> None:
        with self._lock:
            self.outputs.append((speaker, text))
        if self.echo:
            prefix = "" if speaker == "robot" else f"[{speaker}] "
            print(f"{prefix}{text}")
        if self.hub is not None and speaker == "system":
            self.hub.publish_notice(speaker, text)

    # ---- transcript processing

    def process_line(self, raw: str) -> None:
        raw = raw.strip()
        if not raw or raw.startswith("#"):
            return
        if raw.startswith("!"):
            self._directive(raw)
            return
        try:
            text = self.supervisor.call("speech", "transcribe", raw)
        except SegmentUnavailableError:
            self.say(SPEECH_UNAVAILABLE_NOTICE, speaker="system")
            return
        with self._lock:
            self._event("transcript", text=text, mode=self.mode)
            if text.strip().lower() == "shutdown":
                self.stopping = True
                return
            decision, self.mode = route(text, self.mode)
            self._dispatch(decision, text)

    def _directive(self, raw: str) -> None:
        parts = raw[1:].split()
        if not parts:
            return
        if parts[0] == "wait" and len(parts) >= 2:
            if self.threaded:
                self.clock.sleep(float(parts[1]))
                self.supervisor.poll()
            else:
                self.advance(float(parts[1]))
        elif parts[0] == "fail" and len(parts) >= 2:
            reason = " ".join(parts[2:]) or "injected failure"
            self.supervisor.force_fail(parts[1], reason)
        elif parts[0] == "bus-fault":
            self.bus.inject_fault(" ".join(parts[1:]) or "injected bus fault")
        elif parts[0] == "bus-clear":
            self.bus.clear_fault()
        else:
            self.say(f"unknown directive {raw!r}", speaker="system")

    def _dispatch(self, decision, text: str) -> None:
        if decision.kind == "task":
            command = decision.command
            self._event("command_detected", command=command.label)
            if command.kind == "stop":
                self._handle_stop()
            elif command.kind == "assistant_mode":
                state = "on" if self.mode == "assistant" else "off"
                self.say(f"Home assistant mode {state}.", speaker="system")
            else:
                self._start_motor_task(command)
        elif decision.kind == "chat":
            self._handle_chat(text)
        elif decision.kind == "assistant":
            self._handle_assistant(text)

    def _handle_chat(self, text: str) -> None:
        try:
            reply, tag = self.supervisor.call("chatbot", "reply", text)
        except SegmentUnavailableError:
            self.say(CHAT_UNAVAILABLE_NOTICE, speaker="system")
            return
        self.metrics.increment("chatbot_turns")
        self._event("chat_turn", text=text, reply=reply, tag=tag)
        self.say(reply)

    def _handle_assistant(self, text: str) -> None:
        try:
            result = self.supervisor.call("assistant", "answer", text)
        except SegmentUnavailableError:
            self.say(ASSISTANT_UNAVAILABLE_NOTICE, speaker="system")
            return
        self.metrics.increment("assistant_queries")
        self._event(
            "assistant_answered",
            query=text, reply=result.text, provider=result.provider, offline=result.offline,
        )
        self.say(result.text)

    def _handle_stop(self) -> None:
        if self.active is None:
            self.say(NOTHING_TO_STOP_NOTICE, speaker="system")
            return
        self.interrupt.set()
        if not self.threaded:
            outcome = self.active.run.step()  # retires on the interrupt frame
            if outcome is not None:
                self._finish_task(outcome)

    def _start_motor_task(self, command: TaskCommand) -> None:
        if self.active is not None:
            self.say(BUSY_NOTICE, speaker="system")
            return
        try:
            seq = self.supervisor.call("task_parser", "build", command)
        except SegmentUnavailableError:
            self.say(PARSER_UNAVAILABLE_NOTICE, speaker="system")
            return
        label = command.label
        self.bus.acquire(label)
        self.interrupt.clear()
        run = GaitRun(
            seq, self.body, self.bus,
            tick=self.tick,
            interrupt=self.interrupt,
            repeat=None if seq.cyclic else 1,
            neutral=self._neutral_pose,
        )
        self.metrics.increment(command.kind)
        self._event("task_started", task=label)
        task = ActiveTask(label=label, command=command, run=run)
        self.active = task
        if self.threaded:
            task.thread = threading.Thread(
                target=self._drive_task, args=(task,), daemon=True
            )
            task.thread.start()

    def _drive_task(self, task: ActiveTask) -> None:
        while True:
            outcome = task.run.step()
            if outcome is not None:
                break
            self.clock.sleep(self.tick)
        with self._lock:
            if self.active is task:
                self._finish_task(outcome)

    def _finish_task(self, outcome) -> None:
        task = self.active
        self._event(
            "task_finished",
            task=task.label,
            status=outcome.status,
            reason=outcome.reason,
            frames_emitted=outcome.frames_emitted,
            elapsed=outcome.elapsed,
        )
        self.bus.release(task.label)
        if outcome.status == "completed":
            self.display.show(FACE_SMILE)
        elif outcome.status == "faulted":
            # hardware-level trouble, not a segment crash: report without
            # touching supervisor state
            self._event("error_report", segment="bus", reason=outcome.reason)
        else:
            self.display.show(FACE_NEUTRAL)
        self.active = None
        self.interrupt.clear()

    # ---- time driving (scripted mode)

    def advance(self, seconds: float) -> None:
        """Advance simulated time, stepping the active run tick by tick."""
        ticks = int(round(seconds / self.tick))
        for _ in range(ticks):
            if self.active is not None and not self.threaded:
                outcome = self.active.run.step()
                if outcome is not None:
                    self._finish_task(outcome)
            self.supervisor.poll()
            self.clock.advance(self.tick)

    # ---- state snapshot (gateway)

    def snapshot(self) -> dict:
        bus_time, states = self.bus.snapshot()
        with self._lock:
            return {
                "time": bus_time,
                "joints": [
                    {
                        "name": self.body.servo_at(s.channel).id,
                        "channel": s.channel,
                        "commanded_angle": s.commanded_angle,
                        "actual_angle": s.actual_angle,
                        "pulse": s.last_pulse,
                    }
                    for s in states
                ],
                "active_task": self.active.label if self.active else None,
                "mode": self.mode,
                "display": list(self.display.current()),
                "supervisor": self.supervisor.status(),
                "metrics": dict(self.metrics.counts),
            }

    # ---- lifecycle

    def drain_active_task(self) -> None:
        """Interrupt and retire any running task (used at session end)."""
        with self._lock:
            task = self.active
        if task is None:
            return
        self.interrupt.set()
        if self.threaded:
            if task.thread is not None:
                task.thread.join(timeout=5.0)
        else:
            with self._lock:
                outcome = task.run.step()
                if outcome is not None and self.active is task:
                    self._finish_task(outcome)

    def flush(self) -> None:
        if self.config.metrics_csv is not None:
            export_metrics(self.metrics, self.config.metrics_csv)
        if self.config.trace_csv is not None:
            export_trace(self.bus.trace, self.config.trace_csv)

    def run_scripted(self, lines) -> int:
        for raw in lines:
            if self.stopping:
                break
            self.process_line(raw)
            self.advance(self.config.script_step_s)
        self.drain_active_task()
        self.flush()
        return 0


def build_session(
    config: RuntimeConfig,
    threaded: bool = False,
    hub=None,
    echo: bool = False,
) -> Session:
    corpus = load_corpus(config.intents)
    if config.model is not None and config.model.exists():
        model = load_model(config.model)
    else:
        model, _ = train(
            corpus, TrainingConfig(seed=config.seed), threshold=config.threshold,
            stop_at_accuracy=1.0,
        )
        if config.model is not None:
            save_model(model, config.model)
    fixture = load_fixture(config.fixture)
    clock = WallClock() if threaded else SimClock()
    return Session(
        config, corpus, model, fixture, clock,
        threaded=threaded, hub=hub, echo=echo,
    )


def run_session(config: RuntimeConfig, echo: bool = False) -> int:
    """Entry point for scripted and interactive sessions (no gateway)."""
    script = config.script_path
    if script is not None:
        session = build_session(config, threaded=False, echo=echo)
        with open(script, encoding="utf-8") as f:
            return session.run_scripted(f)
    if config.transcript == "interactive":
        session = build_session(config, threaded=True, echo=True)
        try:
            while not session.stopping:
                try:
                    raw = input("> ")
                except EOFError:
                    break
                session.process_line(raw)
                session.supervisor.poll()
        except KeyboardInterrupt:
            pass
        session.drain_active_task()
        session.flush()
        return 0
    raise ValueError(
        f"transcript source {config.transcript!r} needs the gateway runner"
    )
