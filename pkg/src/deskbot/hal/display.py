"""8x8 dot-matrix display: a status face driven by the overseer."""

from __future__ import annotations

DotMatrixFrame = tuple  # 64 ints, row-major, each 0 or 1


def frame_from_rows(rows: list[str]) -> DotMatrixFrame:
    """Build a frame from 8 strings of 8 chars; '#' is lit."""
    if len(rows) != 8 or any(len(r) != 8 for r in rows):
        raise ValueError("frame needs 8 rows of 8 cells")
    return tuple(1 if c == "#" else 0 for row in rows for c in row)


def validate_frame(frame) -> DotMatrixFrame:
    cells = tuple(frame)
    if len(cells) != 64:
        raise ValueError(f"frame has {len(cells)} cells, needs 64")
    if any(c not in (0, 1) for c in cells):
        raise ValueError("frame cells must be 0 or 1")
    return cells


FACE_NEUTRAL = frame_from_rows([
    "........",
    ".##..##.",
    ".##..##.",
    "........",
    "........",
    ".######.",
    "........",
    "........",
])

FACE_SMILE = frame_from_rows([
    "........",
    ".##..##.",
    ".##..##.",
    "........",
    "#......#",
    "#......#",
    ".######.",
    "........",
])

FACE_FAULT = frame_from_rows([
    "#......#",
    ".#....#.",
    "..#..#..",
    "...##...",
    "...##...",
    "..#..#..",
    ".#....#.",
    "#......#",
])


class DotMatrixDisplay:
    """Simulated display: stores the last shown frame for readback."""

    def __init__(self):
        self._frame = FACE_NEUTRAL

    def show(self, frame) -> None:
        self._frame = validate_frame(frame)

    def current(self) -> DotMatrixFrame:
        return self._frame
