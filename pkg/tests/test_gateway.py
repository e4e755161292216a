import json
import socket
import threading
import time

import pytest
from websockets.sync.client import connect

from deskbot.assistant import bundled_fixture_path, load_fixture
from deskbot.gateway import (
    BindFailureError,
    ConsoleHub,
    SchemaError,
    parse_client_envelope,
    validate_server_envelope,
)
from deskbot.gateway.server import run_gateway_session
from deskbot.intent import TrainingConfig, train
from deskbot.intent.corpus import bundled_corpus_path, load_bundled_corpus
from deskbot.overseer import RuntimeConfig, WallClock
from deskbot.overseer.session import Session

CORPUS = load_bundled_corpus()
MODEL, _ = train(CORPUS, TrainingConfig(seed=1), stop_at_accuracy=1.0)
FIXTURE = load_fixture(bundled_fixture_path())


@pytest.fixture
def runtime():
    config = RuntimeConfig(
        intents=bundled_corpus_path(),
        fixture=bundled_fixture_path(),
        transcript="gateway",
        seed=1,
    )
    hub = ConsoleHub("127.0.0.1", 0)
    session = Session(config, CORPUS, MODEL, FIXTURE, WallClock(), threaded=True, hub=hub)
    hub.attach(session)
    thread = threading.Thread(target=run_gateway_session, args=(session, hub), daemon=True)
    thread.start()
    yield hub, session
    session.stopping = True
    thread.join(timeout=5.0)


class Console:
    def __init__(self, address):
        self.conn = connect(f"ws://{address}", open_timeout=5)
        self.seq = 0
        self.frames = []

    def close(self):
        self.conn.close()

    def recv(self, timeout=3.0):
        frame = json.loads(self.conn.recv(timeout=timeout))
        self.frames.append(frame)
        return frame

    def send(self, frame_type, payload=None, seq=None):
        if seq is None:
            self.seq += 1
            seq = self.seq
        self.conn.send(json.dumps({"type": frame_type, "seq": seq, "payload": payload or {}}))
        return seq

    def send_raw(self, raw):
        self.conn.send(raw)

    def collect_until(self, predicate, timeout=5.0):
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            remaining = max(0.05, deadline - time.monotonic())
            frame = json.loads(self.conn.recv(timeout=remaining))
            self.frames.append(frame)
            if predicate(frame):
                return frame
        raise TimeoutError("predicate not satisfied in time")

    def of_type(self, frame_type):
        return [f for f in self.frames if f["type"] == frame_type]


def test_hello_is_first_frame_with_full_snapshot(runtime):
    hub, _ = runtime
    console = Console(hub.address)
    try:
        hello = console.recv()
        assert hello["type"] == "hello"
        assert hello["seq"] == 1
        snapshot = hello["payload"]["snapshot"]
        assert len(snapshot["joints"]) == 12
        assert snapshot["active_task"] is None
        assert len(snapshot["display"]) == 64
        validate_server_envelope(hello)
    finally:
        console.close()


def test_command_walk_then_stop_end_to_end(runtime):
    hub, session = runtime
    console = Console(hub.address)
    try:
        console.recv()  # hello
        seq = console.send("command", {"text": "walk"})
        ack = console.collect_until(lambda f: f["type"] == "ack")
        assert ack["payload"]["for_seq"] == seq
        started = console.collect_until(
            lambda f: f["type"] == "task" and f["payload"]["event"] == "started"
        )
        assert started["payload"]["task"] == "walk"

        # >= 20 servo snapshots per second while a task runs
        t0 = time.monotonic()
        moving = []
        while time.monotonic() - t0 < 1.0:
            frame = console.recv()
            if frame["type"] == "servo_state" and frame["payload"]["active_task"] == "walk":
                moving.append(frame)
        assert len(moving) >= 20
        hips = {f["payload"]["joints"][0]["commanded_angle"] for f in moving}
        assert len(hips) > 3  # the legs are actually swinging

        console.send("command", {"text": "stop"})
        finished = console.collect_until(
            lambda f: f["type"] == "task" and f["payload"]["event"] == "finished"
        )
        assert finished["payload"]["status"] == "interrupted"
        assert session.metrics["walk"] == 1
    finally:
        console.close()


def test_chat_round_trip_over_console(runtime):
    hub, _ = runtime
    console = Console(hub.address)
    try:
        console.recv()
        console.send("chat", {"text": "hello"})
        user = console.collect_until(
            lambda f: f["type"] == "chat_turn" and f["payload"]["speaker"] == "user"
        )
        assert user["payload"]["text"] == "hello"
        robot = console.collect_until(
            lambda f: f["type"] == "chat_turn" and f["payload"]["speaker"] == "robot"
        )
        assert robot["payload"]["tag"] == "greeting"
    finally:
        console.close()


def test_malformed_frame_gets_error_and_connection_survives(runtime):
    hub, _ = runtime
    console = Console(hub.address)
    try:
        console.recv()
        console.send_raw("this is not json{{{")
        error = console.collect_until(lambda f: f["type"] == "error")
        assert error["payload"]["for_seq"] is None
        # still alive: a valid frame is acked
        seq = console.send("ack_request")
        ack = console.collect_until(lambda f: f["type"] == "ack")
        assert ack["payload"]["for_seq"] == seq
    finally:
        console.close()


def test_unknown_type_and_bad_payload_get_errors_with_seq(runtime):
    hub, _ = runtime
    console = Console(hub.address)
    try:
        console.recv()
        console.send_raw(json.dumps({"type": "teleport", "seq": 77, "payload": {}}))
        error = console.collect_until(lambda f: f["type"] == "error")
        assert error["payload"]["for_seq"] == 77
        console.send_raw(json.dumps({"type": "command", "seq": 78, "payload": {"text": ""}}))
        error = console.collect_until(
            lambda f: f["type"] == "error" and f["payload"]["for_seq"] == 78
        )
        assert "text" in error["payload"]["message"]
    finally:
        console.close()


def test_seq_strictly_increasing_and_schema_valid_over_session(runtime):
    hub, _ = runtime
    console = Console(hub.address)
    try:
        console.recv()
        console.send("chat", {"text": "tell me a joke"})
        console.send("command", {"text": "pick up a pencil"})
        deadline = time.monotonic() + 2.0
        while time.monotonic() < deadline:
            try:
                console.recv(timeout=0.5)
            except TimeoutError:
                break
        seqs = [f["seq"] for f in console.frames]
        assert seqs == sorted(seqs)
        assert len(set(seqs)) == len(seqs)
        for frame in console.frames:
            validate_server_envelope(frame)
        assert {f["type"] for f in console.frames} >= {
            "hello", "servo_state", "chat_turn", "ack", "supervisor", "metrics", "task",
        }
    finally:
        console.close()


def test_two_clients_see_identical_chat_streams(runtime):
    hub, _ = runtime
    a, b = Console(hub.address), Console(hub.address)
    try:
        a.recv()
        b.recv()
        a.send("chat", {"text": "who are you"})
        for console in (a, b):
            console.collect_until(
                lambda f: f["type"] == "chat_turn" and f["payload"]["speaker"] == "robot"
            )
        chats_a = [f["payload"] for f in a.of_type("chat_turn")]
        chats_b = [f["payload"] for f in b.of_type("chat_turn")]
        assert chats_a == chats_b
    finally:
        a.close()
        b.close()


def test_error_report_broadcast(runtime):
    hub, session = runtime
    console = Console(hub.address)
    try:
        console.recv()
        session.supervisor.force_fail("assistant", "injected for console test")
        report = console.collect_until(lambda f: f["type"] == "error_report")
        assert report["payload"]["segment"] == "assistant"
        validate_server_envelope(report)
    finally:
        console.close()


def test_idle_broadcast_rate_at_least_1hz(runtime):
    hub, _ = runtime
    console = Console(hub.address)
    try:
        console.recv()
        t0 = time.monotonic()
        servo_frames = 0
        while time.monotonic() - t0 < 2.0:
            try:
                frame = console.recv(timeout=1.5)
            except TimeoutError:
                break
            if frame["type"] == "servo_state":
                servo_frames += 1
        assert servo_frames >= 2  # >= 1 Hz idle
    finally:
        console.close()


def test_slow_client_dropped_without_harming_others(runtime):
    hub, _ = runtime

    class DeadConnection:
        def send(self, data):
            time.sleep(3600)

        def close(self):
            pass

    from deskbot.gateway.server import _Client

    laggard = _Client(DeadConnection(), buffer_frames=4)
    with hub._lock:
        hub._clients[laggard.id] = laggard
    healthy = Console(hub.address)
    try:
        healthy.recv()
        for _ in range(10):
            hub._broadcast("chat_turn", {"speaker": "system", "text": "flood", "tag": None})
        assert not laggard.alive
        with hub._lock:
            assert laggard.id not in hub._clients
        healthy.collect_until(
            lambda f: f["type"] == "chat_turn" and f["payload"]["text"] == "flood"
        )
    finally:
        healthy.close()


def test_bind_failure_on_occupied_port():
    blocker = socket.socket()
    blocker.bind(("127.0.0.1", 0))
    blocker.listen(1)
    port = blocker.getsockname()[1]
    try:
        with pytest.raises(BindFailureError):
            ConsoleHub("127.0.0.1", port)
    finally:
        blocker.close()


def test_console_and_script_sources_are_indistinguishable(runtime, tmp_path):
    # identical text through the console produces the same event kinds as a
    # scripted source
    hub, session = runtime
    console = Console(hub.address)
    try:
        console.recv()
        console.send("command", {"text": "walk"})
        console.collect_until(
            lambda f: f["type"] == "task" and f["payload"]["event"] == "started"
        )
        console.send("command", {"text": "stop"})
        console.collect_until(
            lambda f: f["type"] == "task" and f["payload"]["event"] == "finished"
        )
    finally:
        console.close()
    live_kinds = [e.kind for e in session.events]

    from deskbot.overseer import SimClock

    config = RuntimeConfig(
        intents=bundled_corpus_path(), fixture=bundled_fixture_path(), seed=1
    )
    scripted = Session(config, CORPUS, MODEL, FIXTURE, SimClock())
    scripted.run_scripted(["walk", "stop"])
    scripted_kinds = [e.kind for e in scripted.events]
    assert live_kinds == scripted_kinds


def test_parse_client_envelope_validation():
    with pytest.raises(SchemaError):
        parse_client_envelope("[]")
    with pytest.raises(SchemaError):
        parse_client_envelope(json.dumps({"type": "command", "seq": "x", "payload": {}}))
    doc = parse_client_envelope(
        json.dumps({"type": "command", "seq": 1, "payload": {"text": "walk"}})
    )
    assert doc["payload"]["text"] == "walk"
