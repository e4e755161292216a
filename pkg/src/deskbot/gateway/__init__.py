"""Operator console gateway: JSON-envelope WebSocket broadcast and control."""

from .protocol import (
    PROTOCOL_FRAME_TYPES,
    SchemaError,
    make_envelope,
    parse_client_envelope,
    validate_server_envelope,
)
from .server import BindFailureError, ConsoleHub

__all__ = [
    "BindFailureError",
    "ConsoleHub",
    "PROTOCOL_FRAME_TYPES",
    "SchemaError",
    "make_envelope",
    "parse_client_envelope",
    "validate_server_envelope",
]
