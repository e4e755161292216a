"""Per-session feature-usage counters and CSV export."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

FEATURES = (
    "chatbot_turns",
    "walk",
    "run",
    "turn",
    "pickup",
    "assistant_queries",
    "errors",
)


@dataclass
class SessionMetrics:
    counts: dict[str, int] = field(default_factory=lambda: {f: 0 for f in FEATURES})

    def increment(self, feature: str) -> None:
        if feature not in self.counts:
            raise KeyError(f"unknown feature {feature!r}")
        self.counts[feature] += 1

    def __getitem__(self, feature: str) -> int:
        return self.counts[feature]


def export_metrics(metrics: SessionMetrics, path: str | Path) -> int:
    """CSV `feature,count` in fixed feature order; returns data row count."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(("feature", "count"))
        for feature in FEATURES:
            writer.writerow((feature, metrics.counts[feature]))
    return len(FEATURES)


def read_metrics(path: str | Path) -> SessionMetrics:
    metrics = SessionMetrics()
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = tuple(next(reader))
        if header != ("feature", "count"):
            raise ValueError(f"unexpected metrics header {header}")
        for feature, count in reader:
            metrics.counts[feature] = int(count)
    return metrics
