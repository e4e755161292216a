from deskbot.overseer import route
from deskbot.overseer.router import MODE_ASSISTANT, MODE_NORMAL


def test_walk_routes_to_task():
    decision, mode = route("walk", MODE_NORMAL)
    assert decision.kind == "task"
    assert decision.command.kind == "walk"
    assert mode == MODE_NORMAL


def test_all_basic_commands_recognized():
    for text, kind in (("walk", "walk"), ("run", "run"), ("stop", "stop")):
        decision, _ = route(text, MODE_NORMAL)
        assert decision.command.kind == kind


def test_matching_is_case_insensitive():
    decision, _ = route("WALK", MODE_NORMAL)
    assert decision.command.kind == "walk"
    decision, _ = route("Turn LEFT!", MODE_NORMAL)
    assert decision.command.kind == "turn"
    assert decision.command.direction == "left"


def test_pickup_captures_object():
    decision, _ = route("please pick up the bottle", MODE_NORMAL)
    assert decision.command.kind == "pickup"
    assert decision.command.object_name == "the bottle"


def test_bare_pickup_falls_through_to_chat():
    decision, _ = route("pick up", MODE_NORMAL)
    assert decision.kind == "chat"


def test_bare_turn_falls_through_to_chat():
    decision, _ = route("turn", MODE_NORMAL)
    assert decision.kind == "chat"


def test_turn_directions():
    left, _ = route("turn left", MODE_NORMAL)
    right, _ = route("turn right", MODE_NORMAL)
    assert left.command.direction == "left"
    assert right.command.direction == "right"


def test_unmatched_text_is_chat_in_normal_mode():
    decision, mode = route("how are you", MODE_NORMAL)
    assert decision.kind == "chat"
    assert mode == MODE_NORMAL


def test_word_fragments_do_not_match():
    # "running" is not the token "run"
    decision, _ = route("i was running late", MODE_NORMAL)
    assert decision.kind == "chat"


def test_home_assistant_enters_assistant_mode():
    decision, mode = route("home assistant", MODE_NORMAL)
    assert decision.kind == "task"
    assert decision.command.kind == "assistant_mode"
    assert mode == MODE_ASSISTANT


def test_assistant_mode_is_sticky_for_plain_text():
    decision, mode = route("what is the date", MODE_ASSISTANT)
    assert decision.kind == "assistant"
    assert mode == MODE_ASSISTANT


def test_exit_assistant_returns_to_normal():
    decision, mode = route("exit assistant", MODE_ASSISTANT)
    assert decision.command.kind == "assistant_mode"
    assert mode == MODE_NORMAL


def test_motor_command_exits_assistant_mode():
    decision, mode = route("walk", MODE_ASSISTANT)
    assert decision.command.kind == "walk"
    assert mode == MODE_NORMAL


def test_stop_recognized_in_assistant_mode():
    decision, mode = route("stop", MODE_ASSISTANT)
    assert decision.command.kind == "stop"
    assert mode == MODE_NORMAL


def test_route_is_pure():
    for text in ("walk", "pick up a cup", "hello there", "home assistant"):
        for mode in (MODE_NORMAL, MODE_ASSISTANT):
            assert route(text, mode) == route(text, mode)


def test_longest_match_wins_over_substring():
    # "home assistant" must not be read as chat even with surrounding words
    decision, mode = route("please enter home assistant mode", MODE_NORMAL)
    assert decision.command.kind == "assistant_mode"
    assert mode == MODE_ASSISTANT
