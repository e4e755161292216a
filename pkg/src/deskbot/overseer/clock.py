"""Session clocks: simulated (scripted runs, tests) and wall (live runs)."""

from __future__ import annotations

import time as _time


class SimClock:
    """Manually advanced clock; sleep() just moves time forward."""

    def __init__(self, start: float = 0.0):
        self._now = start

    def now(self) -> float:
        return self._now

    def time(self) -> float:  # GrowthLog-compatible
        return self._now

    def advance(self, dt: float) -> None:
        if dt < 0:
            raise ValueError("cannot advance backwards")
        self._now += dt

    def sleep(self, dt: float) -> None:
        self.advance(dt)


class WallClock:
    def __init__(self):
        self._start = _time.monotonic()

    def now(self) -> float:
        return _time.monotonic() - self._start

    def time(self) -> float:
        return _time.time()

    def sleep(self, dt: float) -> None:
        _time.sleep(dt)
