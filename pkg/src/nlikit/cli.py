"""Command-line pipeline: extract-lexicon, augment, predict, score, sweep-report.

Exit codes: 0 success, 1 data or backend error, 2 usage error. Every command
that writes an output file also writes "<output>.manifest.json" recording the
command line, seed, backend identity, cutoff, paths, toolkit version and
timestamp — enough to re-run the command. Data outputs from deterministic
backends are byte-identical across re-runs; manifests carry the timestamp.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .augment import AugConfig, gen_mixed, gen_numeric, gen_overlap
from .backend import ENV_BACKEND_URL, BackendError, make_backend
from .evaluate import (
    EvalError,
    emit_report,
    emit_sweep,
    read_predictions,
    read_sweep_points,
    score,
)
from .ingest import DatasetFormat, IngestError, read_dataset, write_dataset
from .lexicon import (
    LexiconError,
    builtin_lexicon,
    extract_lexicon,
    load_lexicon,
    load_tag_table,
    save_lexicon,
)
from .records import Prediction, argmax_label
from .split import SplitConfig, SplitGuardError, classify_split

logger = logging.getLogger(__name__)

_DATA_ERRORS = (
    BackendError,
    EvalError,
    IngestError,
    LexiconError,
    SplitGuardError,
    ValueError,
    OSError,
)


def _cutoff_arg(value: str) -> float:
    try:
        cutoff = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cutoff must be a number, got {value!r}") from None
    if not 0.0 < cutoff < 1.0:
        raise argparse.ArgumentTypeError(f"cutoff must be in (0, 1), got {value}")
    return cutoff


def _mix_arg(value: str) -> float:
    try:
        share = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"mix must be a number, got {value!r}") from None
    if not 0.0 <= share <= 1.0:
        raise argparse.ArgumentTypeError(f"mix must be in [0, 1], got {value}")
    return share


def _nonnegative_arg(value: str) -> int:
    try:
        count = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"count must be an integer, got {value!r}") from None
    if count < 0:
        raise argparse.ArgumentTypeError(f"count must be >= 0, got {value}")
    return count


def _write_manifest(out_path: Path, argv: list[str], **fields) -> None:
    manifest = {
        "command": ["nlikit", *argv],
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        **fields,
    }
    manifest_path = out_path.with_name(out_path.name + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def _resolve_lexicon(args: argparse.Namespace):
    if args.lexicon is None:
        return builtin_lexicon()
    lexicon_dir = Path(args.lexicon)
    return load_lexicon(lexicon_dir / "nouns.txt", lexicon_dir / "verbs.txt")


def _cmd_extract_lexicon(args: argparse.Namespace, argv: list[str]) -> int:
    examples, report = read_dataset(args.corpus, args.format, tsv_header=args.tsv_header)
    tags = load_tag_table(args.tags) if args.tags else None
    lexicon = extract_lexicon(examples, tags)
    save_lexicon(lexicon, args.out_nouns, args.out_verbs)
    _write_manifest(
        Path(args.out_nouns),
        argv,
        inputs=[str(args.corpus)],
        outputs=[str(args.out_nouns), str(args.out_verbs)],
        ingest={"read": report.read, "emitted": report.emitted},
    )
    print(
        f"extracted {len(lexicon.nouns)} nouns -> {args.out_nouns}, "
        f"{len(lexicon.verbs)} verbs -> {args.out_verbs}"
    )
    return 0


def _cmd_augment(args: argparse.Namespace, argv: list[str]) -> int:
    config = AugConfig(
        seed=args.seed,
        count=args.count,
        mix={"overlap": args.mix_overlap, "numeric": 1.0 - args.mix_overlap},
    )
    if args.kind == "numeric":
        examples = gen_numeric(config)
    elif args.kind == "overlap":
        examples = gen_overlap(_resolve_lexicon(args), config)
    else:
        examples = gen_mixed(_resolve_lexicon(args), config)
    written = write_dataset(examples, args.out)
    _write_manifest(
        Path(args.out),
        argv,
        seed=args.seed,
        kind=args.kind,
        count=args.count,
        outputs=[str(args.out)],
        examples_written=written,
    )
    print(f"wrote {written} examples -> {args.out}")
    return 0


def _cmd_predict(args: argparse.Namespace, argv: list[str]) -> int:
    backend_name = args.backend or os.environ.get(ENV_BACKEND_URL)
    if not backend_name:
        raise UsageError(f"--backend not given and {ENV_BACKEND_URL} is unset")
    backend = make_backend(
        backend_name,
        cache_path=args.cache,
        replay_only=args.replay_only,
        max_batch=args.max_batch,
    )
    examples, report = read_dataset(args.dataset, args.format, tsv_header=args.tsv_header)
    config = SplitConfig(cutoff=args.cutoff)

    out_path = Path(args.out)
    tmp_path = out_path.with_name(out_path.name + ".tmp")
    written = 0
    try:
        with tmp_path.open("w", encoding="utf-8", newline="\n") as handle:
            if args.technique == "split":
                predictions = (
                    Prediction(
                        id=example.id,
                        predicted=classify_split(backend, example.premise, example.hypothesis, config),
                        technique="split",
                    )
                    for example in examples
                )
            else:
                # one batch call: the backend chunks and parallelizes, order-preserving
                probs = backend.classify_batch([(e.premise, e.hypothesis) for e in examples])
                predictions = (
                    Prediction(id=e.id, predicted=argmax_label(p), probs=p, technique="plain")
                    for e, p in zip(examples, probs)
                )
            for prediction in predictions:
                handle.write(json.dumps(prediction.to_json_dict(), ensure_ascii=False))
                handle.write("\n")
                written += 1
    except Exception:
        tmp_path.unlink(missing_ok=True)  # no partial prediction files
        raise
    tmp_path.replace(out_path)
    _write_manifest(
        out_path,
        argv,
        backend=backend.identity,
        technique=args.technique,
        cutoff=args.cutoff,
        inputs=[str(args.dataset)],
        outputs=[str(args.out)],
        predictions_written=written,
        ingest={"read": report.read, "emitted": report.emitted},
    )
    print(f"wrote {written} predictions -> {args.out}")
    return 0


def _cmd_score(args: argparse.Namespace, argv: list[str]) -> int:
    gold, _ = read_dataset(args.gold, args.gold_format, tsv_header=args.tsv_header)
    predictions = read_predictions(args.preds)
    dataset_tag = args.dataset or Path(args.gold).stem
    report = score(
        gold,
        predictions,
        binary_collapse=args.binary_collapse,
        dataset=dataset_tag,
        trained_on=args.trained_on,
    )
    text = emit_report([report], args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        _write_manifest(
            Path(args.out),
            argv,
            inputs=[str(args.gold), str(args.preds)],
            outputs=[str(args.out)],
            accuracy=report.accuracy,
        )
    else:
        sys.stdout.write(text)
    logger.info(
        "scored %s: accuracy %.3f over %d pairs (%d skipped)",
        dataset_tag,
        report.accuracy,
        report.n,
        report.skipped,
    )
    return 0


def _cmd_sweep_report(args: argparse.Namespace, argv: list[str]) -> int:
    points = read_sweep_points(args.points)
    text = emit_sweep(points, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        _write_manifest(
            Path(args.out), argv, inputs=[str(args.points)], outputs=[str(args.out)]
        )
    else:
        sys.stdout.write(text)
    return 0


class UsageError(Exception):
    """Bad flag combinations detected after argparse."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlikit",
        description="Augmentation data generation, plain/split prediction, and accuracy reports for NLI classifiers.",
    )
    parser.add_argument("--version", action="version", version=f"nlikit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    formats = [f.value for f in DatasetFormat]

    p = sub.add_parser("extract-lexicon", help="collect nouns and verbs from a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--format", default="generic", choices=formats)
    p.add_argument("--tsv-header", action="store_true")
    p.add_argument("--tags", help="external token<TAB>tag table replacing the rule tagger")
    p.add_argument("--out-nouns", required=True)
    p.add_argument("--out-verbs", required=True)
    p.set_defaults(func=_cmd_extract_lexicon)

    p = sub.add_parser("augment", help="generate augmentation examples")
    p.add_argument("--kind", required=True, choices=["overlap", "numeric", "mixed"])
    p.add_argument("--count", type=_nonnegative_arg, default=1000,
                   help="template instantiations (overlap draws emit 3 examples each)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lexicon", help="directory with nouns.txt and verbs.txt; default: built-in word lists")
    p.add_argument("--mix-overlap", type=_mix_arg, default=0.5,
                   help="overlap share of --count for --kind mixed")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("predict", help="classify a dataset with a backend")
    p.add_argument("--dataset", required=True)
    p.add_argument("--format", default="generic", choices=formats)
    p.add_argument("--tsv-header", action="store_true")
    p.add_argument("--backend", help=f"heuristic-mock | oracle-mock | http(s) URL (default: ${ENV_BACKEND_URL})")
    p.add_argument("--technique", default="plain", choices=["plain", "split"])
    p.add_argument("--cutoff", type=_cutoff_arg, default=0.8)
    p.add_argument("--cache", help="record/replay cache JSONL path")
    p.add_argument("--replay-only", action="store_true")
    p.add_argument("--max-batch", type=int, default=32)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("score", help="score predictions against gold labels")
    p.add_argument("--gold", required=True)
    p.add_argument("--gold-format", default="generic", choices=formats)
    p.add_argument("--tsv-header", action="store_true")
    p.add_argument("--preds", required=True)
    p.add_argument("--binary-collapse", action="store_true",
                   help="score against binary entailment/non-entailment gold")
    p.add_argument("--dataset", help="dataset tag for the report (default: gold file stem)")
    p.add_argument("--trained-on", default="", help="row tag for the report table")
    p.add_argument("--format", default="markdown", choices=["markdown", "csv", "json"])
    p.add_argument("--out")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("sweep-report", help="emit sweep points for plotting")
    p.add_argument("--points", required=True, help="JSONL of sweep points")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
        return 2  # unreachable; keeps type checkers happy
    except _DATA_ERRORS as exc:
        print(f"nlikit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
