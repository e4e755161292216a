"""Command-line entry points: train, chat, simulate, run, repl."""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from deskbot.body import default_body
from deskbot.gait.executor import execute
from deskbot.gait.generators import (
    generate_pickup,
    generate_run_cycle,
    generate_turn,
    generate_walk_cycle,
)
from deskbot.hal.bus import SimServoBus
from deskbot.hal.trace import export_trace
from deskbot.intent.backend import BACKEND
from deskbot.intent.corpus import bundled_corpus_path, load_corpus
from deskbot.intent.model import load_model, respond, save_model
from deskbot.intent.network import TrainingConfig
from deskbot.intent.training import train
from deskbot.overseer.config import RuntimeConfig, body_from_dict, gait_from_dict, load_config
from deskbot.overseer.session import build_session, run_session


def _cmd_train(args) -> int:
    corpus = load_corpus(args.intents)
    config = TrainingConfig(seed=args.seed, epochs=args.epochs, batch_size=args.batch)
    model, history = train(corpus, config)
    save_model(model, args.out)
    final = history.epochs[-1]
    print(
        f"trained {len(corpus.tags)} tags on {model.vocab.size} tokens "
        f"[{BACKEND} kernels]: loss {final.loss:.4f}, "
        f"accuracy {final.accuracy:.1%} after {len(history.epochs)} epochs"
    )
    print(f"model written to {args.out}")
    return 0 if final.accuracy >= 0.95 else 1


def _cmd_chat(args) -> int:
    corpus = load_corpus(args.intents)
    model = load_model(args.model)
    if args.threshold is not None:
        model.threshold = args.threshold
    rng = random.Random(args.seed)
    print("chat ready; ctrl-d to exit")
    while True:
        try:
            text = input("you> ")
        except EOFError:
            print()
            return 0
        if not text.strip():
            continue
        reply, tag = respond(model, corpus, text, rng)
        label = tag or "fallback"
        print(f"bot[{label}]> {reply}")


def _cmd_simulate(args) -> int:
    body = default_body()
    gait = None
    if args.config:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if "body" in doc:
            body = body_from_dict(doc["body"])
        gait = gait_from_dict(doc.get("gait", {}))
    else:
        gait = gait_from_dict({})

    generators = {
        "walk": lambda: generate_walk_cycle(gait, body),
        "run": lambda: generate_run_cycle(gait, body),
        "turn-left": lambda: generate_turn(gait, body, "left"),
        "turn-right": lambda: generate_turn(gait, body, "right"),
        "pickup": lambda: generate_pickup(args.object, body, gait),
    }
    seq = generators[args.gait]()
    bus = SimServoBus(body, seed=args.seed)
    outcome = execute(seq, body, bus, repeat=args.cycles if seq.cyclic else 1)
    print(
        f"{seq.name}: {outcome.status}, {outcome.frames_emitted} frames, "
        f"{outcome.elapsed:.2f}s simulated"
    )
    if args.trace:
        rows = export_trace(bus.trace, args.trace)
        print(f"trace with {rows} rows written to {args.trace}")
    return 0 if outcome.status == "completed" else 1


def _load_run_config(args) -> RuntimeConfig:
    config = load_config(args.config)
    if getattr(args, "script", None):
        config.transcript = f"script:{Path(args.script).resolve()}"
    if getattr(args, "serve", None):
        config.serve = args.serve
    return config


def _cmd_run(args) -> int:
    config = _load_run_config(args)
    if config.serve is not None:
        from deskbot.gateway.server import ConsoleHub, run_gateway_session

        host, _, port = config.serve.partition(":")
        hub = ConsoleHub(host or "127.0.0.1", int(port or 0))
        if config.transcript == "interactive":
            config.transcript = "gateway"
        session = build_session(config, threaded=True, hub=hub, echo=args.echo)
        hub.attach(session)
        print(f"serving console gateway on ws://{hub.address}")
        if config.script_path is not None:
            hub.start()
            with open(config.script_path, encoding="utf-8") as f:
                code = session.run_scripted(f)
            hub.stop()
            return code
        return run_gateway_session(session, hub)
    return run_session(config, echo=args.echo)


def _cmd_repl(args) -> int:
    config = load_config(args.config)
    config.transcript = "interactive"
    config.serve = None
    return run_session(config, echo=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deskbot",
        description="desk-scale humanoid assistant runtime",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train the intent model from a corpus")
    p.add_argument("--intents", default=str(bundled_corpus_path()))
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--batch", type=int, default=5)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("chat", help="interactive chat against a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--intents", default=str(bundled_corpus_path()))
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_chat)

    p = sub.add_parser("simulate", help="run one gait against the simulated bus")
    p.add_argument(
        "--gait",
        required=True,
        choices=("walk", "run", "turn-left", "turn-right", "pickup"),
    )
    p.add_argument("--cycles", type=int, default=1)
    p.add_argument("--trace", default=None)
    p.add_argument("--config", default=None, help="JSON file with gait/body sections")
    p.add_argument("--object", default="something", help="object name for pickup")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("run", help="run a full session from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--serve", default=None, help="host:port for the console gateway")
    p.add_argument("--script", default=None, help="override transcript with a script file")
    p.add_argument("--echo", action="store_true", help="print replies to stdout")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("repl", help="stdin-driven session")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_repl)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
