"""Batch command-line interface.

Each command reads JSON inputs, runs one computation and writes a JSON report
(stdout or --out).  Exit codes: 0 for any computed verdict, 2 for bad input,
3 for a numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from . import io as nio
from .linalg import DEFAULT_TOL, NumericalFailure, Tolerances

COMMANDS = ("membership", "separate", "classify", "dilate", "envelope", "order", "decompose",
            "hull-check", "convexity", "demo")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


@dataclass
class JobSpec:
    command: str
    set: str | None = None
    point: str | None = None
    poly: str | None = None
    mu: str | None = None
    nu: str | None = None
    candidates: str | None = None
    name: str | None = None
    seed: int = 0
    tol_psd: float | None = None
    tol_rank: float | None = None
    relaxation_level: int | None = None
    max_steps: int = 8
    max_level: int = 3
    out: str | None = None
    extra: dict = field(default_factory=dict)

    def tolerances(self) -> Tolerances:
        return DEFAULT_TOL.with_overrides(eps_psd=self.tol_psd, eps_rank=self.tol_rank)


class InputError(ValueError):
    pass


def _need(job: JobSpec, *names):
    missing = [n for n in names if getattr(job, n) is None]
    if missing:
        raise InputError(f"{job.command} needs " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _load_set(job):
    return nio.set_from_json(nio.load(job.set))


def _load_point(path):
    return nio.point_from_json(nio.load(path))


def _load_ucp(path):
    doc = nio.load(path)
    if "isometry" in doc:
        return nio.ucp_from_json(doc)
    from .moments import UcpRep
    return UcpRep.delta(nio.point_from_json(doc))


def _default_candidates(K):
    from .point import NcPoint
    if K.kind in ("hull", "opsys"):
        return list(K.hull_generators)
    if "interval" in K.meta:
        c, d = K.meta["interval"]
        return [NcPoint.scalar(c), NcPoint.scalar(d)]
    raise InputError("hull-check on a general pencil set needs --candidates")


# --- commands ---------------------------------------------------------------


def _membership(job, tol):
    from .ncset import membership
    _need(job, "set", "point")
    K, x = _load_set(job), _load_point(job.point)
    res = membership(K, x, tol)
    doc = {"inside": bool(res.inside), "margin": float(res.margin)}
    if not res.inside and res.certificate is not None:
        doc["certificate"] = res.certificate.to_dict()
    return doc


def _separate(job, tol):
    from .separation import NotOutsideError, separate, verify_certificate
    _need(job, "set", "point")
    K, x = _load_set(job), _load_point(job.point)
    try:
        cert = separate(K, x, tol)
    except NotOutsideError as exc:
        raise InputError(f"point is not outside the set: {exc}") from exc
    return {"certificate": cert.to_dict(), "verified": bool(verify_certificate(K, x, cert, tol=tol, seed=job.seed))}


def _classify(job, tol):
    from .dilation import classify_point
    _need(job, "set", "point")
    return classify_point(_load_set(job), _load_point(job.point), tol).to_dict()


def _dilate(job, tol):
    from .dilation import dilate_to_maximal
    _need(job, "set", "point")
    res = dilate_to_maximal(_load_set(job), _load_point(job.point), job.max_steps, tol)
    pt = res.best if res.capped else res.point
    return {"status": "Capped" if res.capped else "Maximal", "steps": res.steps,
            "point": nio.point_to_json(pt), "embedding": nio.mat_to_json(res.embedding)}


def _envelope(job, tol):
    from .envelope import convex_envelope
    _need(job, "set", "poly", "point")
    K, f, x = _load_set(job), nio.poly_from_json(nio.load(job.poly)), _load_point(job.point)
    lvl = 3 if job.relaxation_level is None else job.relaxation_level
    return convex_envelope(K, f, x, lvl, seed=job.seed, tol=tol).to_dict()


def _order(job, tol):
    from .envelope import choquet_order_check, dilation_order_check
    _need(job, "set", "mu", "nu")
    K, mu, nu = _load_set(job), _load_ucp(job.mu), _load_ucp(job.nu)
    tests = [nio.poly_from_json(nio.load(job.poly))] if job.poly else []
    ch = choquet_order_check(K, mu, nu, tests, tol)
    dl = dilation_order_check(K, mu, nu, job.relaxation_level, tol)
    return {"choquet": ch.to_dict(), "dilation": dl.to_dict()}


def _decompose(job, tol):
    from .representation import represent_on_extreme
    if job.mu is None and job.point is None:
        raise InputError("decompose needs --mu or --point")
    K = _load_set(job) if job.set else None
    if K is None:
        raise InputError("decompose needs --set")
    mu = _load_ucp(job.mu or job.point)
    res = represent_on_extreme(K, mu, job.max_steps, tol, seed=job.seed)
    if res.capped:
        return {"status": "Capped", "steps": res.steps, "point": nio.point_to_json(res.best)}
    return {"status": "Decomposed", **res.to_dict()}


def _hull_check(job, tol):
    from .dilation import krein_milman_check
    _need(job, "set", "point")
    K, x = _load_set(job), _load_point(job.point)
    if job.candidates:
        doc = nio.load(job.candidates)
        if not isinstance(doc, list):
            raise InputError("--candidates must hold a JSON list of points")
        cands = [nio.point_from_json(p) for p in doc]
    else:
        cands = _default_candidates(K)
    res = krein_milman_check(K, x, cands, tol)
    if not res.represented:
        return {"represented": False, "gap": res.gap}
    return {"represented": True, "residual": res.residual,
            "weights": [{"candidate": i, "alpha": nio.mat_to_json(a)} for i, a in res.weights]}


def _convexity(job, tol):
    from .ncfunctions import test_nc_convexity
    _need(job, "set", "poly")
    K, f = _load_set(job), nio.poly_from_json(nio.load(job.poly))
    return test_nc_convexity(f, K, job.max_level, seed=job.seed, tol=tol).to_dict()


def _demo(job, tol):
    from .demos import DEMOS, demo
    if job.name not in DEMOS:
        raise InputError(f"demo needs a name from {', '.join(DEMOS)}")
    kw = {"max_steps": job.max_steps} if job.name == "cuntz" else {}
    if job.name == "interval" and job.relaxation_level is not None:
        kw["relaxation_level"] = job.relaxation_level
    return demo(job.name, tol, job.seed, **kw)


HANDLERS = {"membership": _membership, "separate": _separate, "classify": _classify, "dilate": _dilate,
            "envelope": _envelope, "order": _order, "decompose": _decompose, "hull-check": _hull_check,
            "convexity": _convexity, "demo": _demo}


def run(job: JobSpec):
    """Run one job; returns (exit code, report dict)."""
    t0 = time.perf_counter()
    report = {"command": job.command, "version": __version__, "seed": job.seed}
    code = EXIT_OK
    try:
        tol = job.tolerances()
        report["tolerances"] = asdict(tol)
        if job.command not in HANDLERS:
            raise InputError(f"unknown command {job.command!r}")
        np.random.seed(job.seed)
        report["result"] = nio.to_jsonable(HANDLERS[job.command](job, tol))
    except NumericalFailure as exc:
        code = EXIT_NUMERIC
        report["error"] = {"type": "NumericalFailure", "message": str(exc)}
    except (ValueError, KeyError, TypeError) as exc:
        code = EXIT_INPUT
        report["error"] = {"type": "InputError", "message": str(exc)}
    report["exit_code"] = code
    report["wall_time_s"] = round(time.perf_counter() - t0, 6)
    return code, report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncc", description="Finite-level nc Choquet computations.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("name", nargs="?", help="demo name (interval, cuntz, semicircular)")
    ap.add_argument("--set")
    ap.add_argument("--point")
    ap.add_argument("--poly")
    ap.add_argument("--mu")
    ap.add_argument("--nu")
    ap.add_argument("--candidates", help="JSON list of points for hull-check")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol-psd", type=float)
    ap.add_argument("--tol-rank", type=float)
    ap.add_argument("--relaxation-level", type=int)
    ap.add_argument("--max-steps", type=int, default=8)
    ap.add_argument("--max-level", type=int, default=3)
    ap.add_argument("--out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = JobSpec(command=args.command, set=args.set, point=args.point, poly=args.poly, mu=args.mu,
                  nu=args.nu, candidates=args.candidates, name=args.name, seed=args.seed,
                  tol_psd=args.tol_psd, tol_rank=args.tol_rank, relaxation_level=args.relaxation_level,
                  max_steps=args.max_steps, max_level=args.max_level, out=args.out)
    code, report = run(job)
    text = nio.dumps(report) + "\n"
    if job.out:
        with open(job.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if "error" in report:
        sys.stderr.write(f"ncc: {report['error']['message']}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
