"""Sidecar entry points: serve a checkpoint, or fine-tune one.

Both commands read an optional `key = value` config file; flags override it.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, FinetuneConfig, ServingConfig
from .data import TrainingDataError
from .finetune import finetune
from .modeling import LabelOrderError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlikit-sidecar")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="serve a checkpoint over the classification protocol")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--model", help="checkpoint directory or hub id")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--device")
    p.add_argument("--max-seq-len", type=int, dest="max_seq_len")
    p.add_argument("--max-batch", type=int, dest="max_batch")

    p = sub.add_parser("finetune", help="fine-tune a checkpoint on canonical JSONL")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--train", required=True, help="labeled canonical JSONL")
    p.add_argument("--model", help="base checkpoint directory or hub id")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", type=int, dest="batch_size")
    p.add_argument("--learning-rate", type=float, dest="learning_rate")
    p.add_argument("--seed", type=int)

    return parser


def _overrides(args: argparse.Namespace, names: list[str]) -> dict:
    return {name: getattr(args, name) for name in names if getattr(args, name) is not None}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            names = ["model", "host", "port", "device", "max_seq_len", "max_batch"]
            if args.config:
                config = ServingConfig.from_file(args.config, **_overrides(args, names))
            else:
                config = ServingConfig(**_overrides(args, names))
            if not config.model:
                build_parser().error("--model (or a config file with model=) is required")
            from .server import serve  # deferred: pulls in fastapi/uvicorn

            serve(config)
            return 0
        names = ["model", "out_dir", "epochs", "batch_size", "learning_rate", "seed"]
        if args.config:
            config = FinetuneConfig.from_file(args.config, **_overrides(args, names))
        else:
            config = FinetuneConfig(**_overrides(args, names))
        if not config.model:
            build_parser().error("--model (or a config file with model=) is required")
        finetune(args.train, config)
        return 0
    except (ConfigError, LabelOrderError, TrainingDataError, OSError) as exc:
        print(f"nlikit-sidecar: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
