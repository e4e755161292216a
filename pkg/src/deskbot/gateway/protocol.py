"""The console wire protocol: JSON text frames {"type", "seq", "payload"}.

Server to client: hello, servo_state, chat_turn, supervisor, error_report,
metrics, display, task, ack, error. Client to server: command, chat,
ack_request. seq is strictly increasing per connection in each direction;
receivers ignore frame types they do not know.
"""

from __future__ import annotations

import json


class SchemaError(ValueError):
    """Envelope violates the published schema."""


SERVER_FRAME_TYPES = (
    "hello",
    "servo_state",
    "chat_turn",
    "supervisor",
    "error_report",
    "metrics",
    "display",
    "task",
    "ack",
    "error",
)
CLIENT_FRAME_TYPES = ("command", "chat", "ack_request")
PROTOCOL_FRAME_TYPES = SERVER_FRAME_TYPES + CLIENT_FRAME_TYPES


def make_envelope(frame_type: str, seq: int, payload: dict) -> str:
    return json.dumps({"type": frame_type, "seq": seq, "payload": payload})


def parse_client_envelope(raw: str) -> dict:
    """Parse and validate an inbound client frame; raises SchemaError."""
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("envelope must be a JSON object")
    frame_type = doc.get("type")
    if frame_type not in CLIENT_FRAME_TYPES:
        raise SchemaError(f"unknown client frame type {frame_type!r}")
    seq = doc.get("seq")
    if not isinstance(seq, int):
        raise SchemaError("seq must be an integer")
    payload = doc.get("payload", {})
    if not isinstance(payload, dict):
        raise SchemaError("payload must be an object")
    if frame_type in ("command", "chat"):
        text = payload.get("text")
        if not isinstance(text, str) or not text.strip():
            raise SchemaError(f"{frame_type} frame needs a nonempty payload.text")
    return doc


_REQUIRED_PAYLOAD_FIELDS = {
    "hello": ("server", "version", "snapshot"),
    "servo_state": ("time", "joints"),
    "chat_turn": ("speaker", "text"),
    "supervisor": ("segments", "active_task"),
    "error_report": ("segment", "reason", "time"),
    "metrics": ("counts",),
    "display": ("bitmap",),
    "task": ("event", "task"),
    "ack": ("for_seq",),
    "error": ("message",),
}


def validate_server_envelope(doc: dict) -> None:
    """Assert a server frame matches the published schema (tests, clients)."""
    if not isinstance(doc, dict):
        raise SchemaError("envelope must be an object")
    frame_type = doc.get("type")
    if frame_type not in SERVER_FRAME_TYPES:
        raise SchemaError(f"unknown server frame type {frame_type!r}")
    if not isinstance(doc.get("seq"), int):
        raise SchemaError("seq must be an integer")
    payload = doc.get("payload")
    if not isinstance(payload, dict):
        raise SchemaError("payload must be an object")
    for field in _REQUIRED_PAYLOAD_FIELDS[frame_type]:
        if field not in payload:
            raise SchemaError(f"{frame_type} payload missing {field!r}")
    if frame_type == "display":
        bitmap = payload["bitmap"]
        if len(bitmap) != 64 or any(b not in (0, 1) for b in bitmap):
            raise SchemaError("display bitmap must be 64 cells of 0/1")
    if frame_type == "servo_state":
        for joint in payload["joints"]:
            for key in ("name", "commanded_angle", "actual_angle", "pulse"):
                if key not in joint:
                    raise SchemaError(f"servo_state joint missing {key!r}")
