#!/usr/bin/env python3
"""Summarize metrics.jsonl files written by the train command.

Takes any mix of metrics.jsonl paths, seed_* directories, and run output
directories (the ones holding seed_*/metrics.jsonl). Prints one trajectory
table per run and, when several runs are given, a final comparison block.

Only the standard library is used, so this works wherever python3 exists.
"""

import argparse
import json
import math
import sys
from pathlib import Path


def find_metrics(path):
    """Yield (label, metrics_path) pairs under path."""
    p = Path(path)
    if p.is_file():
        yield p.parent.name or str(p), p
        return
    if (p / "metrics.jsonl").is_file():
        yield p.name, p / "metrics.jsonl"
        return
    hits = sorted(p.glob("seed_*/metrics.jsonl"))
    if not hits:
        sys.exit(f"error: no metrics.jsonl under {path}")
    for h in hits:
        yield f"{p.name}/{h.parent.name}", h


def load_rows(path):
    rows = []
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as e:
                sys.exit(f"error: {path}:{lineno}: {e}")
    return rows


def fmt(x, width=9, prec=4):
    if x is None:
        return " " * (width - 1) + "-"
    return f"{x:{width}.{prec}f}"


def print_table(label, rows, every):
    aborted = [r for r in rows if "error" in r]
    rows = [r for r in rows if "error" not in r]
    print(f"== {label} ({len(rows)} snapshots)")
    if aborted:
        print(f"   run aborted at iteration {aborted[0].get('iteration', '?')}: "
              f"{aborted[0]['error']}")
    if not rows:
        return None
    header = ["iter", "lambda", "eta", "label", "domain", "tgt_acc", "src_acc"]
    has_adist = any("a_distance" in r for r in rows)
    if has_adist:
        header.append("a_dist")
    print("   " + "".join(f"{h:>10}" for h in header))
    shown = rows[::every]
    if shown[-1] is not rows[-1]:
        shown.append(rows[-1])
    for r in shown:
        cells = [f"{r['iteration']:>10}",
                 fmt(r.get("lambda")), fmt(r.get("eta"), prec=5),
                 fmt(r.get("label_loss")), fmt(r.get("domain_loss")),
                 fmt(r.get("target_accuracy")), fmt(r.get("source_accuracy"))]
        if has_adist:
            cells.append(fmt(r.get("a_distance")))
        print("   " + " ".join(cells))
    return rows[-1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("paths", nargs="+",
                    help="metrics.jsonl file, seed directory, or run directory")
    ap.add_argument("--every", type=int, default=1, metavar="N",
                    help="show every Nth snapshot (the last one always shows)")
    args = ap.parse_args()
    if args.every < 1:
        sys.exit("error: --every must be >= 1")

    finals = []
    for path in args.paths:
        for label, mpath in find_metrics(path):
            last = print_table(label, load_rows(mpath), args.every)
            if last is not None:
                finals.append((label, last.get("target_accuracy")))
            print()

    if len(finals) > 1:
        print("== final target accuracy")
        for label, acc in finals:
            print(f"   {label:<40} {fmt(acc)}")
        accs = [a for _, a in finals if a is not None]
        if len(accs) > 1:
            mean = sum(accs) / len(accs)
            var = sum((a - mean) ** 2 for a in accs) / (len(accs) - 1)
            print(f"   {'mean +/- stderr':<40} {fmt(mean)} +/- "
                  f"{math.sqrt(var / len(accs)):.4f}")


if __name__ == "__main__":
    main()
