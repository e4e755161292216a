"""WebSocket gateway: state broadcast to consoles, command/chat injection.

One hub serves any number of console connections. Each connection gets a
hello frame with a full snapshot, then deltas: servo_state at the task
rate (50 Hz running, 2 Hz idle), supervisor/metrics/display on change and
periodically, chat traffic as it happens. Inbound command/chat frames are
pushed onto the hub's queue; the session loop drains it, so console input
is indistinguishable from any other transcript source. Every inbound frame
is answered with exactly one ack or error envelope carrying its seq.

Slow consumers are disconnected once their outbound buffer overflows;
other connections are unaffected.
"""

from __future__ import annotations

import json
import queue
import threading
import time as _time

from websockets.exceptions import ConnectionClosed
from websockets.sync.server import serve as ws_serve

from deskbot import __version__
from .protocol import SchemaError, make_envelope, parse_client_envelope

DEFAULT_BUFFER_FRAMES = 256
RUNNING_SNAPSHOT_PERIOD_S = 0.02
IDLE_SNAPSHOT_PERIOD_S = 0.5
STATUS_PERIOD_S = 1.0


class BindFailureError(OSError):
    """The gateway address could not be bound."""


class _Client:
    _ids = iter(range(1, 1 << 30))

    def __init__(self, connection, buffer_frames: int):
        self.id = next(self._ids)
        self.connection = connection
        self.outbound: queue.Queue = queue.Queue(maxsize=buffer_frames)
        self.seq = 0
        self.alive = True

    def enqueue(self, frame_type: str, payload: dict) -> bool:
        try:
            self.outbound.put_nowait((frame_type, payload))
            return True
        except queue.Full:
            self.alive = False
            return False


class ConsoleHub:
    def __init__(self, host: str = "127.0.0.1", port: int = 0,
                 buffer_frames: int = DEFAULT_BUFFER_FRAMES):
        self.inbound: queue.Queue = queue.Queue()
        self.session = None
        self._buffer_frames = buffer_frames
        self._clients: dict[int, _Client] = {}
        self._lock = threading.Lock()
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        try:
            self._server = ws_serve(self._handle_connection, host, port)
        except OSError as exc:
            raise BindFailureError(f"cannot bind {host}:{port}: {exc}") from exc
        self.host, self.port = self._server.socket.getsockname()[:2]

    # ---- lifecycle

    def attach(self, session) -> None:
        self.session = session

    def start(self) -> None:
        if self.session is None:
            raise RuntimeError("attach a session before starting the hub")
        accept = threading.Thread(target=self._server.serve_forever, daemon=True)
        broadcaster = threading.Thread(target=self._broadcast_loop, daemon=True)
        accept.start()
        broadcaster.start()
        self._threads += [accept, broadcaster]

    def stop(self) -> None:
        self._stop.set()
        self._server.shutdown()
        with self._lock:
            clients = list(self._clients.values())
        for client in clients:
            self._drop(client)

    @property
    def address(self) -> str:
        return f"{self.host}:{self.port}"

    def client_count(self) -> int:
        with self._lock:
            return len(self._clients)

    # ---- broadcasting

    def _broadcast(self, frame_type: str, payload: dict) -> None:
        with self._lock:
            clients = list(self._clients.values())
        for client in clients:
            if client.alive and not client.enqueue(frame_type, payload):
                self._drop(client)

    def publish_event(self, event) -> None:
        """Translate a RuntimeEvent into console frames."""
        kind, data = event.kind, event.data
        if kind == "transcript":
            self._broadcast("chat_turn", {"speaker": "user", "text": data["text"], "tag": None})
        elif kind == "chat_turn":
            self._broadcast(
                "chat_turn",
                {"speaker": "robot", "text": data["reply"], "tag": data.get("tag")},
            )
        elif kind == "assistant_answered":
            self._broadcast("chat_turn", {"speaker": "robot", "text": data["reply"], "tag": None})
        elif kind in ("task_started", "task_finished"):
            payload = {"event": kind.removeprefix("task_"), "task": data["task"]}
            if kind == "task_finished":
                payload["status"] = data["status"]
                payload["reason"] = data.get("reason")
            self._broadcast("task", payload)
            self._push_status()
        elif kind == "segment_failed":
            self._push_status()
        elif kind == "error_report":
            self._broadcast(
                "error_report",
                {"segment": data["segment"], "reason": data["reason"], "time": event.time},
            )
            self._push_metrics()

    def publish_notice(self, speaker: str, text: str) -> None:
        self._broadcast("chat_turn", {"speaker": speaker, "text": text, "tag": None})

    def _snapshot(self) -> dict:
        return self.session.snapshot()

    def _push_servo_state(self, snapshot: dict) -> None:
        self._broadcast(
            "servo_state",
            {
                "time": snapshot["time"],
                "joints": snapshot["joints"],
                "active_task": snapshot["active_task"],
            },
        )

    def _push_status(self) -> None:
        snapshot = self._snapshot()
        self._broadcast(
            "supervisor",
            {"segments": snapshot["supervisor"], "active_task": snapshot["active_task"]},
        )

    def _push_metrics(self) -> None:
        self._broadcast("metrics", {"counts": self._snapshot()["metrics"]})

    def _broadcast_loop(self) -> None:
        last_status = 0.0
        last_display = None
        while not self._stop.is_set():
            snapshot = self._snapshot()
            self._push_servo_state(snapshot)
            display = tuple(snapshot["display"])
            if display != last_display:
                self._broadcast("display", {"bitmap": list(display)})
                last_display = display
            now = _time.monotonic()
            if now - last_status >= STATUS_PERIOD_S:
                self._broadcast(
                    "supervisor",
                    {"segments": snapshot["supervisor"], "active_task": snapshot["active_task"]},
                )
                self._broadcast("metrics", {"counts": snapshot["metrics"]})
                last_status = now
            period = (
                RUNNING_SNAPSHOT_PERIOD_S
                if snapshot["active_task"]
                else IDLE_SNAPSHOT_PERIOD_S
            )
            self._stop.wait(period)

    # ---- per-connection plumbing

    def _handle_connection(self, connection) -> None:
        client = _Client(connection, self._buffer_frames)
        snapshot = self._snapshot()
        hello = {
            "server": "deskbot",
            "version": __version__,
            "snapshot": snapshot,
            "joints": [s.id for s in self.session.body.servos],
        }
        with self._lock:
            self._clients[client.id] = client
        sender = threading.Thread(target=self._sender_loop, args=(client,), daemon=True)
        try:
            self._send(client, "hello", hello)
            sender.start()
            for raw in connection:
                self._handle_inbound(client, raw)
        except ConnectionClosed:
            pass
        finally:
            self._drop(client)

    def _send(self, client: _Client, frame_type: str, payload: dict) -> None:
        client.seq += 1
        client.connection.send(make_envelope(frame_type, client.seq, payload))

    def _sender_loop(self, client: _Client) -> None:
        while client.alive:
            item = client.outbound.get()
            if item is None:
                break
            try:
                self._send(client, *item)
            except (ConnectionClosed, OSError):
                break
        self._drop(client)

    def _handle_inbound(self, client: _Client, raw) -> None:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8", errors="replace")
        try:
            doc = parse_client_envelope(raw)
        except SchemaError as exc:
            for_seq = None
            try:
                maybe = json.loads(raw)
                if isinstance(maybe, dict) and isinstance(maybe.get("seq"), int):
                    for_seq = maybe["seq"]
            except (json.JSONDecodeError, UnicodeDecodeError):
                pass
            client.enqueue("error", {"for_seq": for_seq, "message": str(exc)})
            return
        if doc["type"] in ("command", "chat"):
            self.inbound.put(doc["payload"]["text"])
        client.enqueue("ack", {"for_seq": doc["seq"]})

    def _drop(self, client: _Client) -> None:
        with self._lock:
            self._clients.pop(client.id, None)
        client.alive = False
        try:
            client.outbound.put_nowait(None)
        except queue.Full:
            pass
        try:
            client.connection.close()
        except Exception:
            pass


def run_gateway_session(session, hub: ConsoleHub, poll_interval: float = 0.1) -> int:
    """Session loop fed by console frames; runs until shutdown."""
    hub.start()
    try:
        while not session.stopping:
            try:
                raw = hub.inbound.get(timeout=poll_interval)
            except queue.Empty:
                session.supervisor.poll()
                continue
            session.process_line(raw)
            session.supervisor.poll()
    except KeyboardInterrupt:
        pass
    session.drain_active_task()
    session.flush()
    hub.stop()
    return 0
