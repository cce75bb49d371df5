"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 invalid input or dataset,
4 I/O error, 5 generation endpoint failure or missing endpoint config.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from .dataset import DatasetError, EditRecord, load_jsonl, simulate_effort_dataset, write_jsonl, write_rows_csv
from .distance import compression_distance, compression_distance_with_context
from .evaluation import (
    CONDITIONS,
    METRICS,
    EvalConfig,
    compare_scenarios,
    evaluate,
    run_bench,
    scenario_distances,
    write_report,
    write_scenario_report,
)
from .lz import Literal, lz_factorize
from .stats import DegenerateInputError, InvalidConfigurationError
from .symbols import InvalidInputError, SymbolText

log = logging.getLogger("lzdist")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_IO = 4
EXIT_REMOTE = 5

_SIZE_RE = re.compile(r"^\s*(\d+)\s*([KMG]?)B?\s*$", re.IGNORECASE)
_UNITS = {"": 1, "K": 1024, "M": 1024**2, "G": 1024**3}


def parse_size(text: str) -> int:
    m = _SIZE_RE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"bad size {text!r} (use e.g. 4096, 1KB, 2MB)")
    return int(m.group(1)) * _UNITS[m.group(2).upper()]


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _read_text(path: str, nfc: bool) -> SymbolText:
    return SymbolText.from_str(Path(path).read_text(encoding="utf-8"), nfc=nfc)


def cmd_dist(args) -> int:
    source = _read_text(args.source, args.nfc)
    target = _read_text(args.target, args.nfc)
    if args.context:
        result = compression_distance_with_context(_read_text(args.context, args.nfc), source, target)
    else:
        result = compression_distance(source, target)
    line = f"distance={result.value} lz_source={result.lz_source} lz_concat={result.lz_concat}"
    if args.normalize == "target-len":
        line += f" normalized={result.value / max(len(target), 1):.6g}"
    print(line)
    return EXIT_OK


def cmd_factorize(args) -> int:
    text = _read_text(args.file, args.nfc)
    fact = lz_factorize(text)
    out = sys.stdout
    for phrase in fact.phrases:
        if isinstance(phrase, Literal):
            out.write(f"LIT {phrase.symbol}\n")
        else:
            out.write(f"CPY {phrase.source} {phrase.length}\n")
    out.write(f"COUNT {fact.count}\n")
    return EXIT_OK


def _conditions(flag: str) -> tuple[str, ...]:
    return CONDITIONS if flag == "both" else (flag,)


def cmd_eval(args) -> int:
    config = EvalConfig(
        dataset_path=Path(args.dataset),
        metrics=tuple(args.metrics),
        conditions=_conditions(args.condition),
        knn_k=args.knn_k,
        train_fraction=args.train_fraction,
        seed=args.seed,
        output_dir=Path(args.output_dir),
        jobs=args.jobs,
        nfc=args.nfc,
    )
    records = load_jsonl(config.dataset_path)
    report = evaluate(records, config)
    for path in write_report(report, config.output_dir):
        print(path)
    return EXIT_OK


def cmd_simulate(args) -> int:
    records = simulate_effort_dataset(args.n, args.sigma, args.seed)
    write_jsonl(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = run_bench(args.sizes, args.repetitions, args.seed)
    if args.out:
        write_rows_csv([{"size_bytes": s, "median_s": t} for s, t in rows], args.out, ("size_bytes", "median_s"))
    else:
        print("size_bytes,median_s")
        for size, median in rows:
            print(f"{size},{median:.6f}")
    return EXIT_OK


def cmd_scenario_compare(args) -> int:
    records = load_jsonl(args.dataset)
    condition = "plain" if args.condition == "both" else args.condition
    distances = scenario_distances(records, condition, args.nfc)
    fits, unmatched = compare_scenarios(distances)
    if unmatched:
        log.warning("%d question id(s) could not be paired: %s", len(unmatched), ", ".join(unmatched[:20]))
    write_scenario_report(distances, fits, unmatched, Path(args.output_dir))
    for f in fits:
        print(f"{f.baseline}-{f.other}: slope={f.slope} intercept={f.intercept} r2={f.r2} n={f.n}")
    return EXIT_OK


def cmd_synth(args) -> int:
    from .llm import ClientConfig, SyntheticJob, generate_initial_answer, run_scenario_suite

    config = ClientConfig.from_env(
        max_retries=args.max_retries, timeout_s=args.timeout, concurrency=args.concurrency
    )
    jobs = []
    with open(args.input, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                answer = obj.get("initial_answer") or generate_initial_answer(obj["question"], config)
                jobs.append(SyntheticJob(str(obj["id"]), obj["question"], answer, obj["knowledge"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DatasetError(f"{args.input} line {lineno}: {exc}") from exc
    result = run_scenario_suite(jobs, args.scenarios, config)
    write_jsonl(result.records, args.out)
    for job_id, scenario, err in result.failures:
        log.error("job %s / %s failed: %s", job_id, scenario, err)
    print(f"wrote {len(result.records)} records to {args.out} ({len(result.failures)} failed)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 42)")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes (default 1)")
    common.add_argument("--nfc", action="store_true", default=argparse.SUPPRESS,
                        help="NFC-normalize texts before measuring")

    parser = argparse.ArgumentParser(prog="lzdist", description="Compression-based edit distance toolkit")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--nfc", action="store_true")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", parents=[common], help="distance between two text files")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--context")
    p.add_argument("--normalize", choices=["none", "target-len"], default="none",
                   help="divide by target byte length (not part of the reference metric)")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("factorize", parents=[common], help="print the LZ77 phrases of a file")
    p.add_argument("file")
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("eval", parents=[common], help="correlate metrics with edit effort")
    p.add_argument("--dataset", required=True)
    p.add_argument("--metrics", type=_csv_list, default=list(METRICS),
                   help=f"comma-separated subset of {','.join(METRICS)}")
    p.add_argument("--condition", choices=["plain", "with_context", "both"], default="plain")
    p.add_argument("--knn-k", type=int, default=5)
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--output-dir", default="reports")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", parents=[common], help="generate scenario edits through an LLM endpoint")
    p.add_argument("--input", required=True, help="JSONL with id, question, knowledge[, initial_answer]")
    p.add_argument("--out", required=True)
    p.add_argument("--scenarios", type=_csv_list, default=["normal", "similar", "fast"])
    p.add_argument("--concurrency", type=int, default=4)
    p.add_argument("--max-retries", type=int, default=3)
    p.add_argument("--timeout", type=float, default=60.0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simulate", parents=[common], help="write a synthetic edit-effort dataset")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", parents=[common], help="time compression_distance against input size")
    p.add_argument("--sizes", type=lambda s: [parse_size(x) for x in _csv_list(s)], default=[1024**2, 2 * 1024**2])
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("scenario-compare", parents=[common], help="slopes between scenario distances")
    p.add_argument("--dataset", required=True)
    p.add_argument("--condition", choices=["plain", "with_context"], default="plain")
    p.add_argument("--output-dir", default="reports")
    p.set_defaults(func=cmd_scenario_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InvalidInputError, DatasetError, DegenerateInputError, InvalidConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RuntimeError as exc:
        from .llm import ConfigError, TransportError

        if isinstance(exc, (ConfigError, TransportError)):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_REMOTE
        raise


if __name__ == "__main__":
    sys.exit(main())
