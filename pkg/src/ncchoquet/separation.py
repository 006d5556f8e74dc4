"""Separating affine functionals for points outside an nc convex set.

A certificate for y in M_n^d consists of B_1..B_d, gamma in M_n (gamma
Hermitian) such that for every member x at every level p

    Re phi_p(x) <= gamma (x) I_p,     phi_p(x) = sum_j B_j (x) x_j,

while Re phi_n(y) - gamma (x) I_n has a positive eigenvalue (the violation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, NumericalFailure, Tolerances, herm_part, lambda_max
from .ncset import NcSet, pencil_margin, sample_member
from .point import NcPoint
from .sdp import Affine, Lmi, bmat, kron


@dataclass
class AffineFunctional:
    coeffs: tuple          # B_j, each n x n
    gamma: np.ndarray      # n x n Hermitian

    @property
    def n(self) -> int:
        return self.gamma.shape[0]

    def phi(self, x: NcPoint) -> np.ndarray:
        p = x.level
        out = np.zeros((self.n * p, self.n * p), dtype=complex)
        for b, m in zip(self.coeffs, x.mats):
            out += np.kron(b, m)
        return out

    def excess(self, x: NcPoint) -> np.ndarray:
        """Re phi_p(x) - gamma (x) I_p."""
        return herm_part(self.phi(x)) - np.kron(self.gamma, np.eye(x.level))

    def scaled(self, t: float) -> "AffineFunctional":
        return AffineFunctional(tuple(t * b for b in self.coeffs), t * self.gamma)


@dataclass
class SeparationCertificate:
    functional: AffineFunctional
    violation: float
    witness_vector: np.ndarray
    route: str = ""

    def to_dict(self):
        from .io import mat_to_json
        return {
            "coeffs": [mat_to_json(b) for b in self.functional.coeffs],
            "gamma": mat_to_json(self.functional.gamma),
            "violation": float(self.violation),
            "witness_vector": mat_to_json(self.witness_vector.reshape(-1, 1)),
            "route": self.route,
        }


class NotOutsideError(ValueError):
    """Raised when a separating functional is requested for a member."""


def _finish(f: AffineFunctional, y: NcPoint, route: str) -> SeparationCertificate:
    w, v = np.linalg.eigh(f.excess(y))
    return SeparationCertificate(f, float(w[-1]), v[:, -1], route)


def _separate_pencil(K: NcSet, y: NcPoint, tol: Tolerances) -> SeparationCertificate:
    p = K.pencil
    L = p.value(y.mats)
    w, v = np.linalg.eigh(L)
    if w[0] >= -tol.eps_psd:
        raise NotOutsideError("point is inside the pencil set")
    n = y.level
    # eigenvector xi in C^k (x) C^n, reshaped to V in M_{k,n}; compress by V (x) I
    V = v[:, 0].reshape(p.size, n)
    coeffs = tuple(-(V.conj().T @ a @ V) for a in p.coeffs)
    gamma = herm_part(V.conj().T @ p.a0 @ V)
    if K.hermitian:
        coeffs = tuple(herm_part(b) for b in coeffs)
    f = AffineFunctional(coeffs, gamma)
    # same normalization as the SDP route: sum_j ||B_j||_1 = d
    tn = sum(float(np.sum(np.linalg.svd(b, compute_uv=False))) for b in coeffs)
    if tn > 0:
        f = f.scaled(K.d / tn)
    return _finish(f, y, "pencil-eigenvector")


def _separate_hull(K: NcSet, y: NcPoint, tol: Tolerances) -> SeparationCertificate:
    gens = K.hull_generators
    n = y.level
    d = K.d
    m = Lmi()
    if K.hermitian:
        B = [m.hermitian(n) for _ in range(d)]
    else:
        B = [m.complex((n, n)) for _ in range(d)]
    gamma = m.hermitian(n)
    for g in gens:
        phi = None
        for b, gm in zip(B, g.mats):
            term = kron(b, np.asarray(gm))
            phi = term if phi is None else phi + term
        m.add_psd(kron(gamma, np.eye(g.level)) - phi.herm())
    # trace-norm normalization sum_j ||B_j||_1 <= d
    budget = None
    for b in B:
        P = m.hermitian(n)
        Q = m.hermitian(n)
        m.add_psd(bmat([[P, b], [b.H, Q]]))
        tr = (P.trace() + Q.trace()) * 0.5
        budget = tr if budget is None else budget + tr
    m.add_ge(d - budget.real)
    # objective: the excess along the maximally entangled vector sum_s e_s (x) e_s
    obj = None
    for b, ym in zip(B, y.mats):
        term = (b.map(lambda T: T * np.asarray(ym)[None])).sum()
        obj = term if obj is None else obj + term
    m.maximize(obj.real - gamma.trace().real)
    r = m.solve()
    if not r.ok:
        raise NumericalFailure(f"separation SDP failed: {r.status}")
    if r.value <= tol.eps_psd:
        raise NotOutsideError("no separating functional: point lies in the hull")
    f = AffineFunctional(tuple(r(b) for b in B), herm_part(r(gamma)))
    if K.hermitian:
        f = AffineFunctional(tuple(herm_part(b) for b in f.coeffs), f.gamma)
    # absorb solver slack so that the inequality holds exactly at each generator
    worst = max(lambda_max(f.excess(g)) for g in gens)
    if worst > 0:
        f = AffineFunctional(f.coeffs, f.gamma + (worst * (1 + 1e-9) + 1e-14) * np.eye(n))
    return _finish(f, y, "hull-sdp")


def separate(K: NcSet, y: NcPoint, tol: Tolerances = DEFAULT_TOL) -> SeparationCertificate:
    K.check_point(y, tol)
    if K.kind == "pencil":
        cert = _separate_pencil(K, y, tol)
    else:
        cert = _separate_hull(K, y, tol)
    if cert.violation < tol.eps_psd:
        raise NotOutsideError("separating functional has no positive violation")
    return cert


def verify_certificate(K: NcSet, y: NcPoint, cert: SeparationCertificate, probe_levels: int = 2,
                       tol: Tolerances = DEFAULT_TOL, samples: int = 200, seed: int = 0) -> bool:
    """Independent check of both certificate inequalities.

    Hull and operator-system sets are checked exactly at their generators
    (which suffices, since the inequality survives nc combinations).  Pencil
    sets are probed at seeded random members up to probe_levels.
    """
    f = cert.functional
    if len(f.coeffs) != K.d or f.gamma.shape != (y.level, y.level):
        return False
    if np.max(np.abs(f.gamma - f.gamma.conj().T)) > tol.eps_eq:
        return False
    if cert.violation < tol.eps_psd:
        return False
    if lambda_max(f.excess(y)) < cert.violation - tol.eps_eq:
        return False
    scale = max(1.0, float(np.max(np.abs(f.gamma))), max(float(np.max(np.abs(b))) for b in f.coeffs))
    if K.kind == "pencil":
        rng = np.random.default_rng(seed)
        for p in range(1, probe_levels + 1):
            for _ in range(samples):
                x = sample_member(K, p, rng, boundary_prob=0.5)
                if lambda_max(f.excess(x)) > tol.eps_psd * scale:
                    return False
        return True
    return all(lambda_max(f.excess(g)) <= tol.eps_psd * scale for g in K.hull_generators)
