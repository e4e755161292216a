"""Pulse trace logging and CSV export."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

TRACE_HEADER = ("time", "channel", "pulse_commanded", "pulse_effective", "actual_angle")


@dataclass
class TraceLog:
    rows: list[tuple] = field(default_factory=list)

    def append(self, time, channel, pulse_commanded, pulse_effective, actual_angle):
        if self.rows and time < self.rows[-1][0]:
            raise ValueError("trace time must be non-decreasing")
        self.rows.append(
            (float(time), int(channel), float(pulse_commanded),
             float(pulse_effective), float(actual_angle))
        )

    def __len__(self):
        return len(self.rows)


def export_trace(trace: TraceLog, path: str | Path) -> int:
    """Write the trace as CSV ordered by (time, channel); returns row count.

    Floats are written with repr so identical runs produce byte-identical
    files.
    """
    rows = sorted(trace.rows, key=lambda r: (r[0], r[1]))
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for time, channel, commanded, effective, angle in rows:
            writer.writerow([repr(time), channel, repr(commanded), repr(effective), repr(angle)])
    return len(rows)


def read_trace(path: str | Path) -> TraceLog:
    """Parse a CSV produced by export_trace (round-trip helper)."""
    trace = TraceLog()
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = tuple(next(reader))
        if header != TRACE_HEADER:
            raise ValueError(f"unexpected trace header {header}")
        for row in reader:
            trace.append(float(row[0]), int(row[1]), float(row[2]), float(row[3]), float(row[4]))
    return trace
