"""Enumerate the families up to a bound and print counts, timing and the slowest degrees."""

import argparse
import json
import time
from collections import Counter

from fanolinks.families import enumerate_families, reid_sum


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--bound", type=int, default=168)
    p.add_argument("--workers", type=int, default=0)
    p.add_argument("--out", help="write the records as JSON")
    args = p.parse_args()

    t0 = time.perf_counter()
    records = enumerate_families(args.bound, args.workers)
    elapsed = time.perf_counter() - t0

    by_index = Counter(r.index for r in records)
    print(f"bound {args.bound}: {len(records)} families in {elapsed:.1f}s")
    for iota in sorted(by_index):
        print(f"  index {iota}: {by_index[iota]}")
    worst = max(records, key=lambda r: reid_sum(r.basket))
    print(f"largest basket sum {reid_sum(worst.basket)} at X_{worst.d} in P{worst.weights}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump([r.to_json() for r in records], fh, indent=1)


if __name__ == "__main__":
    main()
