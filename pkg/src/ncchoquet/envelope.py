"""Convex envelopes, the nc Choquet and dilation orders, and nc Jensen checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dilation import dilate_to_maximal, random_dilation
from .linalg import DEFAULT_TOL, NumericalFailure, Tolerances, herm_part, lambda_max, lambda_min
from .moments import (MomentRelaxation, UcpRep, _adj, _canon, apply, barycenter, minimal_rep,
                      moment_data, standard_form, truncated_gns)
from .ncfunctions import FreePoly, HT, word_to_str, words_up_to
from .ncset import is_member, pencil_margin, sample_member
from .point import NcPoint
from .sdp import FAILURE, INFEASIBLE, OPT

DOMINATES = "Dominates"
VIOLATED = "Violated"
INCONCLUSIVE = "Inconclusive"

T_GRID = (0.0, -0.3, 0.3, -0.6, 0.6, -0.9, 0.9)


def probe_frame(n: int):
    """Vectors whose quadratic values determine a Hermitian n x n matrix."""
    eye = np.eye(n, dtype=complex)
    out = [eye[a] for a in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            out.append((eye[a] + eye[b]) / np.sqrt(2))
            out.append((eye[a] + 1j * eye[b]) / np.sqrt(2))
    return out


def frame_reconstruct(values, n: int) -> np.ndarray:
    B = np.zeros((n, n), dtype=complex)
    it = iter(values)
    for a in range(n):
        B[a, a] = next(it)
    for a in range(n):
        for b in range(a + 1, n):
            qr, qi = next(it), next(it)
            mid = (B[a, a] + B[b, b]).real / 2
            B[a, b] = (qr - mid) + 1j * (mid - qi)
            B[b, a] = np.conj(B[a, b])
    return B


@dataclass
class EnvelopeResult:
    point: NcPoint
    lower_bound: np.ndarray
    upper_bound: np.ndarray
    relaxation_level: int
    dilation_size: int
    probe_lower: list = field(default_factory=list)
    probe_upper: list = field(default_factory=list)
    representing_map: UcpRep | None = None
    moments: dict = field(default_factory=dict)
    candidates: int = 0

    @property
    def lower_scalar(self) -> float:
        return float(min(self.probe_lower))

    @property
    def upper_scalar(self) -> float:
        return float(min(self.probe_upper))

    def to_dict(self):
        from .io import mat_to_json, point_to_json, ucp_to_json
        return {
            "point": point_to_json(self.point),
            "lower_bound": mat_to_json(self.lower_bound),
            "upper_bound": mat_to_json(self.upper_bound),
            "relaxation_level": self.relaxation_level,
            "dilation_size": self.dilation_size,
            "probe_lower": [float(v) for v in self.probe_lower],
            "probe_upper": [float(v) for v in self.probe_upper],
            "representing_map": None if self.representing_map is None else ucp_to_json(self.representing_map),
            "moments": {k: mat_to_json(v) for k, v in sorted(self.moments.items())},
            "candidates": self.candidates,
        }


def _check_selfadjoint(f, K):
    if isinstance(f, FreePoly):
        if f.d != K.d:
            raise ValueError("polynomial and set have different letter counts")
        if not f.is_selfadjoint(hermitian=K.hermitian):
            raise ValueError("envelope needs a self-adjoint function")


def _valid_rep(K, mu: UcpRep, x: NcPoint, tol: Tolerances) -> bool:
    if K.kind == "pencil" and pencil_margin(K, mu.point) < -10 * tol.eps_psd:
        return False
    b = barycenter(mu)
    return all(np.max(np.abs(a - c)) <= 1e-7 for a, c in zip(b.mats, x.mats))


def _dilation_candidates(K, x: NcPoint, budget: int, rng, tol: Tolerances):
    out = [UcpRep.delta(x)]
    path = x
    emb = np.eye(x.level, dtype=complex)
    # the dilate-to-maximal path, one step at a time
    from .dilation import find_one_step_dilation
    for _ in range(budget):
        w = find_one_step_dilation(K, path, tol)
        if w is None:
            break
        emb = w.embedding @ emb
        path = w.parent
        out.append(UcpRep(path, emb))
    if K.kind == "pencil":
        for _ in range(budget):
            y, v = random_dilation(K, x, rng, steps=int(rng.integers(1, 4)), tol=tol)
            out.append(UcpRep(y, v))
    return out


def convex_envelope(K, f, x: NcPoint, relaxation_level: int = 3, dilation_budget: int = 8,
                    seed: int = 0, tol: Tolerances = DEFAULT_TOL) -> EnvelopeResult:
    """Lower bound by moment relaxation, upper bound by explicit representing maps."""
    _check_selfadjoint(f, K)
    K.check_point(x, tol)
    if not is_member(K, x, tol):
        raise ValueError("point is not in the set")
    n = x.level
    frame = probe_frame(n)
    mr = MomentRelaxation(K, n, relaxation_level)
    mr.fix_barycenter(x)
    mr.add_cones()
    fval = mr.value_of(f)
    lower, sols = [], []
    for xi in frame:
        mr.model.minimize((xi.conj()[None] @ fval @ xi[:, None]).real)
        r = mr.solve()
        if r.status == INFEASIBLE:
            raise ValueError("moment relaxation is infeasible: the point is not in the set")
        if not r.ok:
            raise NumericalFailure(f"moment relaxation failed ({r.status})")
        lower.append(float(r.value))
        sols.append(mr.values(r))
    rng = np.random.default_rng(seed)
    cands = _dilation_candidates(K, x, dilation_budget, rng, tol)
    for tau in sols:
        try:
            g = minimal_rep(truncated_gns(K, tau, relaxation_level, K.d, K.hermitian, n))
        except (ValueError, np.linalg.LinAlgError):
            continue
        if _valid_rep(K, g, x, tol):
            cands.append(g)
    vals = [herm_part(apply(mu, f)) for mu in cands]
    upper = [min(float(np.real(xi.conj() @ v @ xi)) for v in vals) for xi in frame]
    best = int(np.argmin([np.trace(v).real for v in vals]))
    low = frame_reconstruct(lower, n)
    moments = {word_to_str(w, K.d) or "1": v for w, v in sols[0].items()}
    return EnvelopeResult(x, low, vals[best], relaxation_level, cands[best].point.level,
                          lower, upper, cands[best], moments, len(cands))


# --- orders ----------------------------------------------------------------


@dataclass
class OrderVerdict:
    relation: str
    witness: dict | None = None
    tests: int = 0

    def to_dict(self):
        from .io import to_jsonable
        return {"relation": self.relation, "tests": self.tests, "witness": to_jsonable(self.witness)}


def _interval_of(K):
    if K.d == 1 and K.hermitian:
        return float(K.bounds[0, 0]), float(K.bounds[0, 1])
    return None


def barycenter_gap(mu: UcpRep, nu: UcpRep) -> float:
    bm, bn = barycenter(mu), barycenter(nu)
    return max(float(np.max(np.abs(a - b))) for a, b in zip(bm.mats, bn.mats))


def _affine_witness(mu, nu):
    bm, bn = barycenter(mu), barycenter(nu)
    j = int(np.argmax([np.max(np.abs(a - b)) for a, b in zip(bm.mats, bn.mats)]))
    diff = herm_part(bm.mats[j] - bn.mats[j])
    if np.max(np.abs(diff)) < 1e-14:
        diff = herm_part(1j * (bm.mats[j] - bn.mats[j]))
        kind = "affine: Im x_%d" % (j + 1)
    else:
        kind = "affine: Re x_%d" % (j + 1)
    return {"function": kind, "difference": diff, "gap": float(np.max(np.abs(bm.mats[j] - bn.mats[j])))}


def _gram(mu: UcpRep, left, right, middle=None) -> np.ndarray:
    """Block matrix [V* a(y)* M b(y) V] over lists of evaluated factors a, b."""
    v = mu.isometry
    rows = []
    for a in left:
        av = a @ v
        row = []
        for b in right:
            m = b @ v if middle is None else middle @ b @ v
            row.append(av.conj().T @ m)
        rows.append(row)
    return np.block(rows)


def affine_square_gram(mu: UcpRep) -> np.ndarray:
    """[mu(u* v)] over words of length <= 1: the quadratic form behind every a* a."""
    y = mu.point
    facs = [np.eye(y.level)] + [m for mat in y.mats for m in (mat, mat.conj().T)]
    return herm_part(_gram(mu, facs, facs))


def resolvent_gram(mu: UcpRep, t: float, c: float, d: float) -> np.ndarray:
    """Gram form of (C0 + C1 x)* (1 - t s(x))^{-1} (C0 + C1 x), s mapping [c,d] to [-1,1]."""
    X = mu.point.mats[0]
    p = X.shape[0]
    s = (2 * X - (c + d) * np.eye(p)) / (d - c)
    R = np.linalg.inv(np.eye(p) - t * s)
    facs = [np.eye(p), X]
    return herm_part(_gram(mu, facs, facs, R))


def _ht_interval(mu: UcpRep, t: float, c: float, d: float) -> np.ndarray:
    X = mu.point.mats[0]
    p = X.shape[0]
    s = (2 * X - (c + d) * np.eye(p)) / (d - c)
    val = s @ s @ np.linalg.inv(np.eye(p) - t * s)
    v = mu.isometry
    return herm_part(v.conj().T @ val @ v)


def choquet_order_check(K, mu: UcpRep, nu: UcpRep, test_functions=(), tol: Tolerances = DEFAULT_TOL,
                        t_grid=T_GRID) -> OrderVerdict:
    """Necessary tests of mu <=_c nu: a violation is certified, otherwise Inconclusive."""
    if mu.target_level != nu.target_level:
        return OrderVerdict(VIOLATED, {"function": "unit", "reason": "different target levels"})
    scale = max(1.0, max(float(np.max(np.abs(m))) for m in barycenter(mu).mats))
    if barycenter_gap(mu, nu) > tol.eps_eq * scale:
        return OrderVerdict(VIOLATED, _affine_witness(mu, nu), 1)
    count = 0

    def check(name, a, b, extra=None):
        nonlocal count
        count += 1
        D = herm_part(a - b)
        sc = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
        w, v = np.linalg.eigh(D)
        if w[-1] > tol.eps_psd * sc:
            wit = {"function": name, "gap": float(w[-1]), "vector": v[:, -1]}
            if extra:
                wit.update(extra)
            return wit
        return None

    for i, f in enumerate(test_functions):
        wit = check(f"supplied[{i}]", apply(mu, f), apply(nu, f))
        if wit:
            return OrderVerdict(VIOLATED, wit, count)
    iv = _interval_of(K)
    if iv is not None:
        c, d = iv
        for t in t_grid:
            wit = check("h_t", _ht_interval(mu, t, c, d), _ht_interval(nu, t, c, d), {"t": t})
            if wit:
                return OrderVerdict(VIOLATED, wit, count)
        for t in t_grid:
            wit = check("resolvent square", resolvent_gram(mu, t, c, d), resolvent_gram(nu, t, c, d),
                        {"t": t})
            if wit:
                return OrderVerdict(VIOLATED, wit, count)
    wit = check("affine square", affine_square_gram(mu), affine_square_gram(nu))
    if wit:
        return OrderVerdict(VIOLATED, wit, count)
    return OrderVerdict(INCONCLUSIVE, None, count)


def default_order(K) -> int:
    if K.d == 1 and K.hermitian:
        return 3
    return 2 if K.hermitian else 1


def _distinct_eigs(m: np.ndarray, tol: float = 1e-7) -> int:
    w = np.linalg.eigvalsh(herm_part(m))
    return 1 + int(np.sum(np.diff(w) > tol * max(1.0, float(np.max(np.abs(w))))))


def dilation_order_check(K, mu: UcpRep, nu: UcpRep, relaxation_level: int | None = None,
                         tol: Tolerances = DEFAULT_TOL) -> OrderVerdict:
    """Moment-relaxation test of mu <=_d nu (infeasibility is conclusive)."""
    if mu.target_level != nu.target_level:
        return OrderVerdict(VIOLATED, {"reason": "different target levels"})
    scale = max(1.0, max(float(np.max(np.abs(m))) for m in barycenter(mu).mats))
    if barycenter_gap(mu, nu) > tol.eps_eq * scale:
        return OrderVerdict(VIOLATED, _affine_witness(mu, nu), 1)
    r = default_order(K) if relaxation_level is None else int(relaxation_level)
    if K.d == 1 and K.hermitian:
        # on an interval, order >= the atom count of nu makes the relaxation exact
        r = max(r, _distinct_eigs(minimal_rep(nu, tol).point.mats[0]))
    base = standard_form(minimal_rep(mu, tol))
    y, n = base.point, mu.target_level
    p = y.level
    mr = MomentRelaxation(K, p, r)
    mr.fix_barycenter(y)
    words = [w for w in words_up_to(K.d, 2 * r, K.hermitian) if len(w) >= 2]
    seen = set()
    keep = []
    for w in words:
        cw = _canon(w, K.hermitian)
        ca = _canon(_adj(cw), K.hermitian)
        if cw in seen or ca in seen:
            continue
        seen.add(cw)
        keep.append(cw)
    target = moment_data(nu, keep)
    for w in keep:
        mr.fix_block(w, target[w])
    mr.add_cones()
    res = mr.solve()
    if res.ok:
        tau = {word_to_str(w, K.d) or "1": v for w, v in mr.values(res).items()}
        return OrderVerdict(DOMINATES, {"order": r, "level": p, "tau": tau, "representation": base}, 1)
    if res.status == INFEASIBLE:
        return OrderVerdict(VIOLATED, {"order": r, "reason": "moment relaxation infeasible"}, 1)
    return OrderVerdict(INCONCLUSIVE, {"order": r, "solver": res.status}, 1)


# --- Jensen ------------------------------------------------------------------


@dataclass
class JensenReport:
    instances: int
    violations: int
    max_violation: float
    records: list = field(default_factory=list)

    def to_dict(self):
        return {"instances": self.instances, "violations": self.violations,
                "max_violation": float(self.max_violation), "records": self.records}


def random_rep(K, x: NcPoint, rng, max_steps: int = 3, tol: Tolerances = DEFAULT_TOL) -> UcpRep:
    y, v = random_dilation(K, x, rng, steps=int(rng.integers(1, max_steps + 1)), tol=tol)
    return UcpRep(y, v)


def jensen_check(K, f, samples: int = 100, seed: int = 0, max_level: int = 3,
                 tol: Tolerances = DEFAULT_TOL) -> JensenReport:
    """f(x) <= mu(f) over seeded points x and representing maps mu with barycenter x."""
    _check_selfadjoint(f, K)
    rng = np.random.default_rng(seed)
    worst = 0.0
    bad = 0
    recs = []
    fs = f if isinstance(f, (list, tuple)) else [f]
    for i in range(samples):
        g = fs[i % len(fs)]
        n = int(rng.integers(1, max_level + 1))
        x = sample_member(K, n, rng)
        mu = random_rep(K, x, rng, tol=tol)
        fx = g.eval(x)
        mf = apply(mu, g)
        sc = max(1.0, float(np.max(np.abs(fx))), float(np.max(np.abs(mf))))
        gap = -lambda_min(herm_part(mf - fx))
        worst = max(worst, gap)
        if gap > tol.eps_psd * sc:
            bad += 1
        recs.append({"level": n, "dilation_level": mu.point.level, "gap": float(gap)})
    return JensenReport(samples, bad, worst, recs)
