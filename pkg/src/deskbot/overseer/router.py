"""Transcript routing: recognized commands to the task parser, everything
else to the chatbot or, in assistant mode, to the provider chain."""

from __future__ import annotations

from dataclasses import dataclass

from deskbot.gait.executor import TaskCommand
from deskbot.intent.text import normalize_text

MODE_NORMAL = "normal"
MODE_ASSISTANT = "assistant"

# recognized command phrases as token tuples, longest first so e.g.
# "turn left" wins over any single-token rule
_COMMAND_PATTERNS = (
    ("home", "assistant"),
    ("exit", "assistant"),
    ("turn", "left"),
    ("turn", "right"),
    ("pick", "up"),
    ("walk",),
    ("run",),
    ("stop",),
)

MOTOR_KINDS = ("walk", "run", "stop", "turn", "pickup")


@dataclass(frozen=True)
class Route:
    kind: str  # "task" | "chat" | "assistant"
    command: TaskCommand | None = None


def _find_pattern(tokens: list[str], pattern: tuple[str, ...]) -> int | None:
    """Index right after the first contiguous occurrence, or None."""
    n = len(pattern)
    for i in range(len(tokens) - n + 1):
        if tuple(tokens[i : i + n]) == pattern:
            return i + n
    return None


def _match_command(tokens: list[str]) -> TaskCommand | None:
    for pattern in _COMMAND_PATTERNS:
        end = _find_pattern(tokens, pattern)
        if end is None:
            continue
        if pattern == ("home", "assistant") or pattern == ("exit", "assistant"):
            return TaskCommand(kind="assistant_mode")
        if pattern == ("turn", "left"):
            return TaskCommand(kind="turn", direction="left")
        if pattern == ("turn", "right"):
            return TaskCommand(kind="turn", direction="right")
        if pattern == ("pick", "up"):
            obj = " ".join(tokens[end:])
            if not obj:
                continue  # bare "pick up": nothing to grab, let the chatbot answer
            return TaskCommand(kind="pickup", object_name=obj)
        return TaskCommand(kind=pattern[0])
    return None


def route(text: str, mode: str = MODE_NORMAL) -> tuple[Route, str]:
    """Pure routing decision: (route, next mode).

    Case-insensitive, longest-match-wins over normalized tokens. "home
    assistant" enters assistant mode; the mode is sticky until "exit
    assistant" or a recognized motor command. "stop" is matched like any
    other command regardless of mode, so a running task can always be
    terminated.
    """
    tokens = normalize_text(text)
    command = _match_command(tokens)

    if command is not None:
        if command.kind == "assistant_mode":
            next_mode = MODE_NORMAL if mode == MODE_ASSISTANT else MODE_ASSISTANT
            return Route(kind="task", command=command), next_mode
        # motor commands always leave assistant mode
        return Route(kind="task", command=command), MODE_NORMAL

    if mode == MODE_ASSISTANT:
        return Route(kind="assistant"), MODE_ASSISTANT
    return Route(kind="chat"), MODE_NORMAL
