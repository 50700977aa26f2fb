"""Run every verification sweep and print a one-line summary per relation."""

import argparse
import json

from multiop.sweep import RELATIONS, SweepConfig, run_sweep


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 4, 8])
    ap.add_argument("--Ms", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--json", action="store_true", help="print full reports")
    args = ap.parse_args()
    total = 0
    for relation in RELATIONS:
        for M in args.Ms:
            for dim in args.dims:
                report = run_sweep(SweepConfig(relation, M, dim, args.trials, args.seed))
                total += report["violations"]
                if args.json:
                    print(json.dumps(report))
                else:
                    print(f"{relation:16s} M={M} dim={dim:2d}  violations={report['violations']:4d}"
                          f"  min rel slack={report['min_relative_slack']:.3e}")
    raise SystemExit(1 if total else 0)


if __name__ == "__main__":
    main()
