"""Hardware abstraction: servo bus (simulated), trace export, dot-matrix display."""

from .bus import (
    BusFaultError,
    BusOwnershipError,
    GpioServoBus,
    JitterMode,
    PulseOutOfRangeError,
    ServoBus,
    ServoBusError,
    SimServoBus,
    SimulatedServoState,
    UnknownChannelError,
)
from .trace import TraceLog, export_trace
from .display import (
    FACE_FAULT,
    FACE_NEUTRAL,
    FACE_SMILE,
    DotMatrixDisplay,
    DotMatrixFrame,
)

__all__ = [
    "BusFaultError",
    "BusOwnershipError",
    "DotMatrixDisplay",
    "DotMatrixFrame",
    "FACE_FAULT",
    "FACE_NEUTRAL",
    "FACE_SMILE",
    "GpioServoBus",
    "JitterMode",
    "PulseOutOfRangeError",
    "ServoBus",
    "ServoBusError",
    "SimServoBus",
    "SimulatedServoState",
    "TraceLog",
    "UnknownChannelError",
    "export_trace",
]
