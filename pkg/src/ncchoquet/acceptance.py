"""Seeded acceptance runs.  Each criterion returns (passed, report); reports carry no timing."""

from __future__ import annotations

import time

import numpy as np

from .demos import semicircular_demo
from .dilation import classify_point, dilate_to_maximal, krein_milman_check, random_dilation
from .envelope import (DOMINATES, VIOLATED, choquet_order_check, convex_envelope, dilation_order_check,
                       jensen_check)
from .linalg import DEFAULT_TOL, random_unitary
from .moments import UcpRep
from .ncfunctions import FreePoly, h_t, midpoint_gap, test_nc_convexity
from .ncset import (cuntz_truncation, hull_set, interval_set, is_member, opsys_set, row_ball_set,
                    sample_member)
from .point import NcPoint
from .separation import NotOutsideError, separate, verify_certificate

X1 = FreePoly.letter(1, 0)


def _r(v, digits=10):
    return float(round(float(v), digits))


# 1 ---------------------------------------------------------------------------

def criterion_1(seed: int = 1):
    K = interval_set(-1.0, 1.0)
    rng = np.random.default_rng(seed)
    pts = [NcPoint.scalar(-1.0), NcPoint.scalar(1.0)]
    while len(pts) < 50:
        n = int(rng.integers(1, 4))
        kind = rng.integers(0, 3)
        if kind == 0:
            pts.append(sample_member(K, n, rng, boundary_prob=0.5))
        elif kind == 1 and n > 1:
            # spectrum inside {-1, 1}: maximal but reducible
            u = random_unitary(n, rng)
            d = rng.choice([-1.0, 1.0], n)
            pts.append(NcPoint([u @ np.diag(d) @ u.conj().T]))
        else:
            pts.append(NcPoint.scalar(float(rng.uniform(-1, 1))))
    rows, ok = [], True
    for x in pts:
        rep = classify_point(K, x)
        endpoint = x.level == 1 and abs(abs(x.mats[0][0, 0]) - 1) < 1e-12
        ok &= rep.nc_extreme == endpoint
        rows.append({"level": x.level, "nc_extreme": bool(rep.nc_extreme), "expected": bool(endpoint)})
    return ok, {"points": len(pts), "extreme_count": sum(r["nc_extreme"] for r in rows), "rows": rows}


# 2 ---------------------------------------------------------------------------

def criterion_2(seed: int = 0):
    K = interval_set(-1.0, 1.0)
    zero = NcPoint.scalar(0.0)
    cases = {"x^3": (X1 ** 3, -0.251, -0.249), "-x^2": (-(X1 ** 2), -1.001, -0.999),
             "x^2": (X1 ** 2, -1e-4, 1e-4)}
    ok, out = True, {}
    for name, (f, lo, hi) in cases.items():
        res = convex_envelope(K, f, zero, relaxation_level=3, seed=seed)
        a, b = res.lower_scalar, res.upper_scalar
        good = lo <= a <= hi and lo <= b <= hi and a <= b + 1e-7
        ok &= good
        out[name] = {"lower": _r(a), "upper": _r(b), "pass": bool(good)}
    return ok, out


# 3 ---------------------------------------------------------------------------

def order_pairs(K, count: int, rng):
    """Pairs of representing maps with a common barycenter, in four shapes."""
    out = []
    for i in range(count):
        kind = i % 4
        n = int(rng.integers(1, 3))
        x = sample_member(K, n, rng)
        y, v = random_dilation(K, x, rng, steps=int(rng.integers(1, 3)))
        m1 = UcpRep(y, v)
        if kind == 0:
            out.append((kind, UcpRep.delta(x), m1))
        elif kind in (1, 2):
            y2, v2 = random_dilation(K, y, rng, steps=int(rng.integers(1, 3)))
            m2 = UcpRep(y2, v2 @ v)
            out.append((kind, m1, m2) if kind == 1 else (kind, m2, m1))
        else:
            y2, v2 = random_dilation(K, x, rng, steps=int(rng.integers(1, 3)))
            out.append((kind, m1, UcpRep(y2, v2)))
    return out


def criterion_3(seed: int = 3, pairs: int = 100):
    rng = np.random.default_rng(seed)
    rows = []
    for K in (interval_set(-1.0, 1.0), row_ball_set(2)):
        for kind, a, b in order_pairs(K, pairs // 2, rng):
            dv = dilation_order_check(K, a, b).relation
            cv = choquet_order_check(K, a, b).relation
            rows.append({"set": K.name, "kind": kind, "dilation": dv, "choquet": cv})
    bad = sum(r["dilation"] == DOMINATES and r["choquet"] == VIOLATED for r in rows)
    viol = [r for r in rows if r["dilation"] == VIOLATED]
    found = sum(r["choquet"] == VIOLATED for r in viol)
    rate = found / len(viol) if viol else 1.0
    ok = bad == 0 and rate >= 0.9
    return ok, {"pairs": len(rows), "dominates_with_violation": bad, "dilation_violated": len(viol),
                "witnessed": found, "witness_rate": _r(rate), "rows": rows}


# 4 ---------------------------------------------------------------------------

def jensen_functions(radius: float = 1.0, tol=DEFAULT_TOL):
    fs = [X1 ** 2]
    for t in (-0.5, -0.25, 0.25, 0.5):
        g = h_t(t)
        fs.append(g.truncation(g.safe_degree(radius, tol.eps_psd / 4)))
    return fs


def criterion_4(seed: int = 4):
    K = interval_set(-1.0, 1.0)
    rep = jensen_check(K, jensen_functions(), samples=100, seed=seed)
    return rep.violations == 0, {"instances": rep.instances, "violations": rep.violations,
                                 "max_violation_below_eps": bool(rep.max_violation <= DEFAULT_TOL.eps_psd)}


# 5 ---------------------------------------------------------------------------

def criterion_5(seed: int = 5):
    K = interval_set(-1.0, 1.0)
    rng = np.random.default_rng(seed)
    cands = [NcPoint.scalar(-1.0), NcPoint.scalar(1.0)]
    rows, ok = [], True
    for i in range(25):
        n = 1 + i % 3
        x = sample_member(K, n, rng)
        res = krein_milman_check(K, x, cands)
        if not res.represented:
            ok = False
            rows.append({"level": n, "represented": False})
            continue
        B = sum((a.conj().T @ a for k, a in res.weights if k == 1), np.zeros((n, n), dtype=complex))
        err = float(np.max(np.abs(B - (x.mats[0] + np.eye(n)) / 2)))
        good = err <= 1e-6 and res.residual <= 1e-6
        ok &= good
        rows.append({"level": n, "represented": True, "closed_form_ok": bool(good)})
    return ok, {"members": 25, "rows": rows}


# 6 ---------------------------------------------------------------------------

def criterion_6(seed: int = 6, max_steps: int = 6):
    K = row_ball_set(2)
    rng = np.random.default_rng(seed)
    rows, ok = [], True
    for i in range(20):
        n = 1 + i % 3
        x = sample_member(K, n, rng, boundary_prob=1.0)
        rep = classify_point(K, x)
        capped = dilate_to_maximal(K, x, max_steps).capped
        ok &= (not rep.nc_extreme) and capped
        rows.append({"level": n, "nc_extreme": bool(rep.nc_extreme), "capped": bool(capped)})
    return ok, {"points": 20, "max_steps": max_steps, "rows": rows}


# 7 ---------------------------------------------------------------------------

def criterion_7(seed: int = 0):
    rep = semicircular_demo(N=8)
    c = rep["cases"]
    ok = all(c[k]["identity_residual"] <= 1e-8 for k in ("i", "exp(i pi/3)"))
    ok &= all(c[k]["defect_norm"] <= 1e-8 for k in ("+1", "-1"))
    ok &= abs(c["exp(i pi/3)"]["defect_norm"] - 0.75) <= 1e-8
    return ok, rep


# 8 ---------------------------------------------------------------------------

def criterion_8(seed: int = 0, t_grid=(-1.0, -0.5, 0.0, 0.5, 1.0)):
    K = interval_set(-0.5, 0.5)
    out, ok = {}, True
    for t in t_grid:
        g = h_t(t)
        D = g.safe_degree(0.5, DEFAULT_TOL.eps_psd / 2)
        v = test_nc_convexity(g.truncation(D), K, max_level=4, seed=seed)
        ok &= v.convex
        out[f"t={t:g}"] = {"degree": D + 2, "status": v.status, "tests": v.tests}
    v = test_nc_convexity(X1 ** 4, interval_set(-2.0, 2.0), max_level=3, seed=seed)
    cert = False
    if not v.convex and v.level == 2 and v.witness["form"] == "midpoint":
        w = v.witness
        # recompute the gap from the stored matrices
        g = midpoint_gap(X1 ** 4, w["x"], w["y"], w["lambda"])
        cert = g < -DEFAULT_TOL.eps_psd and w["x"].level == 2
    ok &= cert
    out["x^4"] = {"status": v.status, "level": v.level, "certified": bool(cert)}
    return ok, out


# 9 ---------------------------------------------------------------------------

def _separation_sets():
    tri = hull_set([NcPoint.scalar(0.0, 0.0), NcPoint.scalar(1.0, 0.0), NcPoint.scalar(0.0, 1.0)])
    return [("pencil", interval_set(-1.0, 1.0)), ("pencil", row_ball_set(2)),
            ("hull", hull_set([NcPoint.scalar(-1.0), NcPoint.scalar(1.0),
                               NcPoint([np.array([[0.0, 2.0], [2.0, 0.0]])])])),
            ("hull", tri), ("opsys", opsys_set(cuntz_truncation(1)[0])),
            ("opsys", opsys_set([np.diag([1.0, -1.0, 0.5])]))]


def _outside_point(K, n, rng):
    for _ in range(200):
        base = sample_member(K, n, rng, boundary_prob=1.0)
        c = [m[0, 0] * np.eye(n) for m in K.center.mats]
        f = float(rng.uniform(1.1, 2.0))
        y = NcPoint([cm + f * (b - cm) for cm, b in zip(c, base.mats)])
        if K.hermitian:
            y = NcPoint([(m + m.conj().T) / 2 for m in y.mats])
        if not is_member(K, y):
            return y
    raise RuntimeError("could not generate an outside point")


def criterion_9(seed: int = 9):
    rng = np.random.default_rng(seed)
    sets = _separation_sets()
    rows = []
    good_out = 0
    for i in range(50):
        kind, K = sets[i % len(sets)]
        n = 1 + (i // len(sets)) % 2
        y = _outside_point(K, n, rng)
        cert = separate(K, y)
        v = verify_certificate(K, y, cert, seed=i)
        good_out += v
        rows.append({"presentation": kind, "level": n, "verified": bool(v)})
    false_certs = 0
    for i in range(50):
        kind, K = sets[i % len(sets)]
        y = sample_member(K, 1 + i % 2, rng)
        try:
            separate(K, y)
            false_certs += 1
        except NotOutsideError:
            pass
    ok = good_out == 50 and false_certs == 0
    return ok, {"outside": 50, "verified": good_out, "inside": 50, "false_certificates": false_certs,
                "rows": rows}


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}

TITLES = {1: "interval extreme points", 2: "convex envelope fixtures", 3: "order equivalence",
          4: "Jensen suite", 5: "Krein-Milman reconstruction", 6: "Cuntz: no finite extremes",
          7: "free semicircular identity", 8: "operator convexity", 9: "separation round-trip",
          10: "determinism"}

LIMITS = {1: 30.0, 2: 60.0, 3: 300.0, 7: 60.0}


def run_criterion(k: int):
    """(passed, report, seconds) with the runtime limit folded into passed."""
    t0 = time.perf_counter()
    ok, rep = CRITERIA[k]()
    dt = time.perf_counter() - t0
    if k in LIMITS and dt >= LIMITS[k]:
        ok = False
    return bool(ok), rep, dt


def report_json(rep) -> str:
    from .io import dumps, to_jsonable
    return dumps(to_jsonable(rep))


def criterion_10(first: dict | None = None):
    """Rerun 1-9 and compare serialized reports with a first run (computed here if absent)."""
    if first is None:
        first = {k: report_json(CRITERIA[k]()[1]) for k in CRITERIA}
    diffs = [k for k in CRITERIA if report_json(CRITERIA[k]()[1]) != first[k]]
    return not diffs, {"compared": sorted(first), "differing": diffs}


def run_all(out=None):
    """Run every criterion once, reusing the first pass for the determinism check."""
    lines, reports, first = [], {}, {}
    for k in CRITERIA:
        ok, rep, dt = run_criterion(k)
        first[k] = report_json(rep)
        reports[k] = (ok, rep, dt)
    t0 = time.perf_counter()
    reports[10] = (*criterion_10(first), time.perf_counter() - t0)
    for k, (ok, _, dt) in reports.items():
        lines.append(f"CRITERION {k}: {'PASS' if ok else 'FAIL'} ({TITLES[k]}, {dt:.1f} s)")
    return reports, lines
