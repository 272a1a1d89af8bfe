#!/usr/bin/env python3
"""Summarize bench JSON-lines output: approximation ratios and congestion.

Example:
    arborpack bench corpus/ --seed 1 > bench.jsonl
    python scripts/bench_summary.py bench.jsonl
"""
import argparse
import json
import sys
from collections import Counter


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("records", help="bench .jsonl file, or - for stdin")
    args = parser.parse_args()

    stream = sys.stdin if args.records == "-" else open(args.records)
    ratios = []
    congestions = []
    outcomes = Counter()
    count = 0
    with stream:
        for line in stream:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            count += 1
            ratios.append(rec["ratio"])
            outcomes[rec["pack_result"] or "skipped"] += 1
            if rec["congestion"] is not None:
                congestions.append(rec["congestion"])
    if not count:
        print("no records")
        return 1
    ratios.sort()
    print(f"instances:        {count}")
    print(f"mincut ratio:     mean {sum(ratios) / count:.3f}  "
          f"median {ratios[count // 2]:.3f}  max {ratios[-1]:.3f}")
    exact_hits = sum(1 for r in ratios if r <= 1.0)
    print(f"exact matches:    {exact_hits}/{count}")
    print(f"pack outcomes:    {dict(outcomes)}")
    if congestions:
        print(f"tree congestion:  mean {sum(congestions) / len(congestions):.2f}  "
              f"max {max(congestions)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
