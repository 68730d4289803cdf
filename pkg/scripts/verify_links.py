"""Build and verify the five links over a range of seeds and print a field-level summary."""

import argparse
from collections import Counter

from fanolinks.links import FAMILIES, build_hat_link, verify_link


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seeds", type=int, default=12)
    p.add_argument("--family", type=int, choices=FAMILIES, action="append")
    args = p.parse_args()

    status = 0
    for fam in args.family or FAMILIES:
        failures: Counter[str] = Counter()
        for seed in range(args.seeds):
            res = verify_link(build_hat_link(fam, seed=seed))
            failures.update(e.field for e in res.failures())
        r = build_hat_link(fam)
        verdict = "ok" if not failures else "FAIL " + ", ".join(f"{k} x{v}" for k, v in failures.items())
        print(f"{fam}: P{tuple(sorted(r.target.weights))} degree {r.target_degree} "
              f"(-K)^3 {r.target_minusK3} {r.label} basket {r.target_basket} [{verdict}]")
        status |= bool(failures)
    raise SystemExit(status)


if __name__ == "__main__":
    main()
