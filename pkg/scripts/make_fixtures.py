"""Write the JSON fixture corpus used by the CLI examples and tests."""

import argparse
import pathlib

import numpy as np

from ncchoquet import FreePoly, NcPoint, UcpRep, cuntz_truncation, interval_set, opsys_set, row_ball_set
from ncchoquet import io as nio


def fixtures() -> dict:
    x = FreePoly.letter(1, 0)
    h = 1 / np.sqrt(2)
    parent = NcPoint([np.array([[0.0, 1.0], [1.0, 0.0]])])
    return {
        "interval.json": nio.set_to_json(interval_set(-1, 1)),
        "row_ball.json": nio.set_to_json(row_ball_set(2)),
        "cuntz_opsys.json": nio.set_to_json(opsys_set(cuntz_truncation(2)[0])),
        "hull_pm1.json": {"kind": "hull", "generators": [nio.point_to_json(NcPoint.scalar(-1.0)),
                                                         nio.point_to_json(NcPoint.scalar(1.0))]},
        "endpoint.json": nio.point_to_json(NcPoint.scalar(1.0)),
        "zero.json": nio.point_to_json(NcPoint.scalar(0.0)),
        "outside.json": nio.point_to_json(NcPoint.scalar(1.5)),
        "diag.json": nio.point_to_json(NcPoint([np.diag([-1.0, 1.0])])),
        "row_point.json": nio.point_to_json(NcPoint.scalar(h, h)),
        "x2.json": nio.poly_to_json(x ** 2),
        "x3.json": nio.poly_to_json(x ** 3),
        "x4.json": nio.poly_to_json(x ** 4),
        "neg_x2.json": nio.poly_to_json(-(x ** 2)),
        "h_half.json": {"kind": "h_t", "t": 0.5},
        "delta0.json": nio.ucp_to_json(UcpRep.delta(NcPoint.scalar(0.0))),
        "mu_offdiag.json": nio.ucp_to_json(UcpRep(parent, np.array([[1.0], [0.0]]))),
        "candidates_pm1.json": [nio.point_to_json(NcPoint.scalar(-1.0)), nio.point_to_json(NcPoint.scalar(1.0))],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", default=str(pathlib.Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args()
    out = pathlib.Path(args.dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, doc in fixtures().items():
        (out / name).write_text(nio.dumps(doc) + "\n")
    print(f"wrote {len(fixtures())} fixtures to {out}")


if __name__ == "__main__":
    main()
