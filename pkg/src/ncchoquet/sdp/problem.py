"""Block SDPs in standard form over complex Hermitian (or real symmetric) blocks.

    minimize   sum_k Re tr(C_k X_k)
    subject to sum_k tr(A_ik X_k) = rhs_i    (complex rhs allowed)
               X_k >= 0

A constraint with non-Hermitian coefficients is split into its Hermitian and
anti-Hermitian parts, i.e. one real row for each of Re and Im.  Dual
certificates use the convention S(y) = sum_i herm(y_i A_i), so that an
infeasibility certificate is a y with S(y) <= 0 and Re(y . rhs) > 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..linalg import DEFAULT_TOL, Tolerances, as_cmat, herm_part, lambda_min
from .ipm import (DUAL_INFEASIBLE, OPTIMAL, PRIMAL_INFEASIBLE, ConeProblem, ConeResult,
                  IpmSettings, ipm_solve)
from .lmi import FAILURE, INFEASIBLE, OPT, UNBOUNDED, _realify, _unrealify


@dataclass
class SdpProblem:
    blocks: list                      # [(name, dim)] or [(name, dim, "real")]
    constraints: list = field(default_factory=list)   # [({name: A}, rhs)]
    objective: dict | None = None     # {name: C} for minimize sum Re tr(C X)

    def __post_init__(self):
        seen = {}
        for b in self.blocks:
            name, dim = b[0], int(b[1])
            if name in seen:
                raise ValueError(f"duplicate block name {name!r}")
            if dim <= 0:
                raise ValueError(f"block {name!r} has non-positive size")
            field_ = b[2] if len(b) > 2 else "complex"
            if field_ not in ("complex", "real"):
                raise ValueError("block field must be 'complex' or 'real'")
            seen[name] = (dim, field_)
        self._info = seen
        cons = []
        for terms, rhs in self.constraints:
            cons.append((self._check_terms(terms), complex(rhs)))
        self.constraints = cons
        if self.objective is not None:
            obj = self._check_terms(self.objective)
            for name, c in obj.items():
                if np.max(np.abs(c - c.conj().T), initial=0.0) > 1e-10 * max(1.0, np.max(np.abs(c))):
                    raise ValueError(f"objective coefficient on {name!r} must be Hermitian")
                obj[name] = herm_part(c)
            self.objective = obj

    def _check_terms(self, terms):
        out = {}
        for name, a in terms.items():
            if name not in self._info:
                raise ValueError(f"constraint references unknown block {name!r}")
            a = as_cmat(a)
            dim, _ = self._info[name]
            if a.shape != (dim, dim):
                raise ValueError(f"coefficient for {name!r} has shape {a.shape}, expected {(dim, dim)}")
            out[name] = a
        return out

    @property
    def names(self):
        return list(self._info)

    def dim(self, name):
        return self._info[name][0]

    def is_real(self, name):
        return self._info[name][1] == "real"

    def to_json(self) -> str:
        def mat(a):
            a = np.asarray(a, dtype=complex)
            return {"rows": a.shape[0], "cols": a.shape[1],
                    "data": [[float(z.real), float(z.imag)] for z in a.reshape(-1)]}
        doc = {
            "format": "block-sdp-v1",
            "sense": "minimize",
            "blocks": [{"name": n, "dim": d, "field": f} for n, (d, f) in self._info.items()],
            "constraints": [{"terms": {k: mat(v) for k, v in t.items()},
                             "rhs": [rhs.real, rhs.imag]} for t, rhs in self.constraints],
            "objective": None if self.objective is None else {k: mat(v) for k, v in self.objective.items()},
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SdpProblem":
        doc = json.loads(text)

        def mat(m):
            data = np.array([complex(a, b) for a, b in m["data"]])
            return data.reshape(m["rows"], m["cols"])
        blocks = [(b["name"], b["dim"], b.get("field", "complex")) for b in doc["blocks"]]
        cons = [({k: mat(v) for k, v in c["terms"].items()}, complex(*c["rhs"])) for c in doc["constraints"]]
        obj = doc.get("objective")
        return cls(blocks, cons, None if obj is None else {k: mat(v) for k, v in obj.items()})


@dataclass
class SdpSolution:
    status: str
    primal: dict = field(default_factory=dict)       # name -> X (Optimal) or ray (Unbounded)
    dual: np.ndarray | None = None                    # y (Optimal) or certificate (Infeasible)
    slack: dict = field(default_factory=dict)         # name -> Z = C - S(y)
    gap: float = float("nan")
    objective: float = float("nan")
    iterations: int = 0
    info: dict = field(default_factory=dict)


def _rows(p: SdpProblem):
    """Real rows (terms, rhs, origin index, part) from the complex constraints."""
    rows = []
    for i, (terms, rhs) in enumerate(p.constraints):
        re = {k: herm_part(a) for k, a in terms.items()}
        im = {k: (a - a.conj().T) / 2j for k, a in terms.items()}
        rows.append((re, rhs.real, i, "re"))
        if any(np.max(np.abs(v), initial=0.0) > 0 for v in im.values()) or rhs.imag != 0:
            rows.append((im, rhs.imag, i, "im"))
    return rows


Backend = Callable[[ConeProblem], ConeResult]


def solve(p: SdpProblem, tol: Tolerances = DEFAULT_TOL, backend: Backend | None = None) -> SdpSolution:
    """Solve with the in-tree interior point method (or a supplied cone backend)."""
    rows = _rows(p)
    m = len(rows)
    kinds, dims, A, C = [], [], [], []
    for name in p.names:
        n = p.dim(name)
        real = p.is_real(name)
        size = n if real else 2 * n
        a = np.zeros((m, size, size))
        for r, (terms, _, _, _) in enumerate(rows):
            if name in terms:
                t = terms[name]
                # tr(t X) for Hermitian t equals <R(t), R(X)>/2 = <R(t)/2, X_real>
                a[r] = t.real if real else _realify(t) / 2
        c = np.zeros((size, size))
        if p.objective is not None and name in p.objective:
            c = p.objective[name].real if real else _realify(p.objective[name]) / 2
        kinds.append("s")
        dims.append(size)
        A.append(a)
        C.append(c)
    b = np.array([r[1] for r in rows], dtype=float)
    settings = IpmSettings(gap_tol=min(1e-9, tol.eps_sdp), feas_tol=min(1e-9, tol.eps_eq))
    cone = ConeProblem(kinds, dims, A, C, b)
    res = (backend or (lambda cp: ipm_solve(cp, settings)))(cone)

    def to_complex(xs, scale=1.0):
        out = {}
        for name, x in zip(p.names, xs):
            out[name] = x.astype(complex) if p.is_real(name) else _unrealify(x) * scale
        return out

    def y_complex(yr):
        y = np.zeros(len(p.constraints), dtype=complex)
        for val, (_, _, i, part) in zip(yr, rows):
            # herm(y A) = Re(y) H1 - Im(y) H2 with A = H1 + i H2
            y[i] += val if part == "re" else -1j * val
        return y

    info = dict(res.info, core_status=res.status)
    if res.status == OPTIMAL:
        X = to_complex(res.X, 0.5)
        y = y_complex(res.y)
        Z = _slack(p, y)
        return SdpSolution(OPT, X, y, Z, res.gap, res.primal_objective, res.iterations, info)
    if res.status == PRIMAL_INFEASIBLE:
        return SdpSolution(INFEASIBLE, {}, y_complex(res.y), {}, float("nan"), float("nan"), res.iterations, info)
    if res.status == DUAL_INFEASIBLE:
        return SdpSolution(UNBOUNDED, to_complex(res.X, 0.5), None, {}, float("nan"), float("-inf"),
                           res.iterations, info)
    return SdpSolution(FAILURE, {}, None, {}, res.gap, float("nan"), res.iterations, info)


def _combination(p: SdpProblem, y):
    s = {name: np.zeros((p.dim(name),) * 2, dtype=complex) for name in p.names}
    for yi, (terms, _) in zip(y, p.constraints):
        for name, a in terms.items():
            s[name] += herm_part(yi * a)
    return s


def _slack(p: SdpProblem, y):
    s = _combination(p, y)
    out = {}
    for name in p.names:
        c = p.objective.get(name) if p.objective else None
        c = np.zeros_like(s[name]) if c is None else c
        out[name] = c - s[name]
    return out


def verify_solution(p: SdpProblem, s: SdpSolution, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Recheck residuals and certificates from scratch."""
    rhs = np.array([r for _, r in p.constraints], dtype=complex)
    rscale = max(1.0, float(np.linalg.norm(rhs)))

    def A_of(X):
        return np.array([sum(np.trace(a @ X[n]) for n, a in terms.items()) for terms, _ in p.constraints],
                        dtype=complex)

    def obj_of(X):
        if p.objective is None:
            return 0.0
        return float(sum(np.trace(c @ X[n]).real for n, c in p.objective.items()))

    if s.status == OPT:
        X = s.primal
        if set(X) != set(p.names):
            return False
        for n in p.names:
            x = np.asarray(X[n])
            if np.max(np.abs(x - x.conj().T), initial=0.0) > tol.eps_eq * max(1.0, np.max(np.abs(x))):
                return False
            if lambda_min(x) < -tol.eps_psd * max(1.0, np.max(np.abs(x))):
                return False
        if p.constraints and np.max(np.abs(A_of(X) - rhs)) > tol.eps_eq * rscale:
            return False
        if s.dual is None:
            return False
        Z = _slack(p, s.dual)
        zmax = max(1.0, max(float(np.max(np.abs(z))) for z in Z.values()))
        if any(lambda_min(z) < -tol.eps_psd * zmax for z in Z.values()):
            return False
        pobj = obj_of(X)
        dobj = float(np.real(np.dot(s.dual, rhs)))
        gap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        return gap <= tol.eps_sdp
    if s.status == INFEASIBLE:
        y = s.dual
        if y is None:
            return False
        margin = float(np.real(np.dot(y, rhs)))
        if margin <= tol.eps_sdp:
            return False
        comb = _combination(p, y)
        # S(y) <= 0 up to a tolerance relative to the certificate margin
        return all(lambda_min(-c) >= -tol.eps_psd * margin for c in comb.values())
    if s.status == UNBOUNDED:
        X = s.primal
        if set(X) != set(p.names):
            return False
        cx = obj_of(X)
        if cx >= -tol.eps_sdp:
            return False
        xmax = max(1.0, max(float(np.max(np.abs(X[n]))) for n in p.names))
        if any(lambda_min(np.asarray(X[n])) < -tol.eps_psd * xmax for n in p.names):
            return False
        return (not p.constraints) or float(np.max(np.abs(A_of(X)))) <= tol.eps_eq * max(1.0, abs(cx)) * 10
    return False


def problem_from_cone(cone: ConeProblem) -> SdpProblem:
    """View a real cone problem (PSD blocks only) as an SdpProblem; used for dumps."""
    blocks = [(f"X{k}", n, "real") for k, n in enumerate(cone.dims)]
    cons = []
    for i in range(cone.m):
        cons.append(({f"X{k}": a[i] for k, a in enumerate(cone.A)}, cone.b[i]))
    return SdpProblem(blocks, cons, {f"X{k}": c for k, c in enumerate(cone.C)})
