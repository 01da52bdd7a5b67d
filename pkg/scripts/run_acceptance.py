"""Run the acceptance grids and write a JSON summary.

    python scripts/run_acceptance.py --only 1,2,7 --jobs 4 --json results.json
"""

import argparse
import json
import sys

from qdyson.acceptance import AcceptanceConfig, default_jobs, run_all


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--only", default="", help="comma list of criterion numbers")
    ap.add_argument("--jobs", type=int, default=default_jobs())
    ap.add_argument("--json", dest="json_path")
    args = ap.parse_args()
    only = [int(x) for x in args.only.split(",") if x.strip()] or None
    results = []
    for res in run_all(AcceptanceConfig(jobs=args.jobs), only):
        print(res.line(), flush=True)
        results.append(res)
    if args.json_path:
        with open(args.json_path, "w") as fh:
            json.dump([r.to_json() for r in results], fh, indent=2)
    sys.exit(0 if all(r.passed and r.within_budget for r in results) else 1)


if __name__ == "__main__":
    main()
