"""Time compression_distance over doubling input sizes and report per-byte cost.

Each size is the length of both the source and the target text, so the
factorized concatenation is about twice as long.

    python scripts/bench_scaling.py --min 64KB --max 4MB
"""
import argparse

from lzdist.cli import parse_size
from lzdist.evaluation import run_bench


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--min", type=parse_size, default=parse_size("64KB"))
    parser.add_argument("--max", type=parse_size, default=parse_size("4MB"))
    parser.add_argument("--repetitions", type=int, default=5)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    sizes = []
    size = args.min
    while size <= args.max:
        sizes.append(size)
        size *= 2
    rows = run_bench(sizes, args.repetitions, args.seed)
    print(f"{'size_bytes':>11} {'median_s':>9} {'ns/byte':>8} {'ratio':>6}")
    previous = None
    for size, median in rows:
        ratio = f"{median / previous:6.2f}" if previous else "     -"
        print(f"{size:11d} {median:9.4f} {median / size * 1e9:8.1f} {ratio}")
        previous = median


if __name__ == "__main__":
    main()
