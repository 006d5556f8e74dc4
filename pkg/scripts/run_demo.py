"""Print a demo report (interval, cuntz or semicircular) as JSON."""

import argparse

from ncchoquet import io as nio
from ncchoquet.demos import DEMOS, demo


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("name", choices=DEMOS)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(nio.dumps(nio.to_jsonable(demo(args.name, seed=args.seed))))


if __name__ == "__main__":
    main()
