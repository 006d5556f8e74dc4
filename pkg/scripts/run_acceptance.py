"""Run the acceptance criteria and print one line per criterion.

With --out DIR, each criterion's JSON report is written to DIR/criterion_<k>.json.
"""

import argparse
import pathlib
import sys

from ncchoquet.acceptance import report_json, run_all


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="directory for JSON reports")
    args = ap.parse_args()
    reports, lines = run_all()
    if args.out:
        d = pathlib.Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        for k, (_, rep, _) in reports.items():
            (d / f"criterion_{k}.json").write_text(report_json(rep) + "\n")
    print("\n".join(lines))
    return 0 if all(ok for ok, _, _ in reports.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
