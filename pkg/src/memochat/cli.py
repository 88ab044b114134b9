"""Command line entry points: ``serve`` and ``init-demo``."""

from __future__ import annotations

import argparse
import logging
import sys

from .api import create_app
from .config import load_config
from .fixtures import seed_demo_store
from .store import MemoryStore


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memochat",
        description="Memory-grounded conversation suggestion service",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--store", required=True, help="path to the JSON store file")
    serve.add_argument("--vectors", default=None, help="word-vector table file (default: bundled toy table)")
    serve.add_argument("--stopwords", default=None, help="stopword list file (default: bundled en+zh lists)")
    serve.add_argument("--config", default=None, help="TOML or JSON config file")
    serve.add_argument("--port", type=int, default=8077)
    serve.add_argument("--host", default="127.0.0.1")

    demo = sub.add_parser("init-demo", help="seed a store with the demo fixture")
    demo.add_argument("--store", required=True, help="path to the JSON store file")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)

    if args.command == "init-demo":
        store = MemoryStore(args.store)
        seed_demo_store(store)
        print(f"seeded demo records and partners into {args.store}")
        return 0

    if args.command == "serve":
        try:
            app = create_app(
                store_path=args.store,
                vectors_path=args.vectors,
                stopwords_path=args.stopwords,
                config=load_config(args.config),
            )
        except Exception as exc:
            print(f"startup failed: {exc}", file=sys.stderr)
            return 1
        import uvicorn

        uvicorn.run(app, host=args.host, port=args.port, log_level="info")
        return 0

    return 2


if __name__ == "__main__":
    raise SystemExit(main())
