"""Dilations, maximality, extremality and Krein-Milman reconstruction.

Pencil sets are handled by exact facial reduction.  Write a one-row border
of x as Y = [[x_j, b_j], [r_j, c_j]].  After reordering,

    L(Y) = [[L(x), B(b, r)], [B(b, r)*, L(c)]],
    B = sum_j (A_j (x) b_j + A_j* (x) r_j*) / 2.

Such a block matrix can be PSD only if Q* B = 0 for Q spanning ker L(x).
Conversely, when that holds and the level-1 set has interior, a small enough
coupling with a strictly interior corner c is PSD.  So a nontrivial one-step
dilation exists iff the real-linear map (b, r) -> Q* B(b, r) has a nonzero
kernel, and the search is a kernel computation plus a tiny SDP that tunes
(c, |coupling|).  Any nontrivial dilation compresses to a one-row one, so
this one-step test decides maximality.

Hull and operator-system sets fall back to an SDP scan over the border
coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_TOL, Tolerances, commutant_basis, herm_part, lambda_min
from .ncset import (NcSet, _level1_vars, add_member, coords_to_point, hull_membership_lmi,
                    hull_threshold, is_member, membership, weights_from_gram)
from .point import NcPoint, compress
from .sdp import Affine, Lmi, bmat, kron

GENERIC_THRESHOLD = 1e-6
MAX_DIRECTIONS = 8


@dataclass
class DilationWitness:
    parent: NcPoint
    embedding: np.ndarray
    nontrivial: bool
    coupling_norm: float

    def to_dict(self):
        from .io import mat_to_json, point_to_json
        return {"parent": point_to_json(self.parent), "embedding": mat_to_json(self.embedding),
                "nontrivial": bool(self.nontrivial), "coupling_norm": float(self.coupling_norm)}


def coupling_norm(parent: NcPoint, embedding: np.ndarray) -> float:
    """Largest off-diagonal block norm of the parent relative to the embedding's range."""
    v = embedding
    proj = v @ v.conj().T
    comp = np.eye(parent.level) - proj
    best = 0.0
    for m in parent.mats:
        best = max(best, np.linalg.norm(comp @ m @ proj, 2), np.linalg.norm(proj @ m @ comp, 2))
    return float(best)


def _kernel_of_psd(h: np.ndarray, tol: Tolerances):
    w, v = np.linalg.eigh(herm_part(h))
    thr = 10 * max(tol.eps_psd, tol.eps_rank) * max(1.0, float(np.max(np.abs(w))))
    return v[:, w <= thr], v[:, w > thr], w[w > thr]


def _real_kernel(columns: list, eps_rank: float) -> np.ndarray:
    """Kernel of a real-linear map given by its images of the basis (complex arrays)."""
    if not columns:
        return np.zeros((0, 0))
    mat = np.array([np.concatenate([c.reshape(-1).real, c.reshape(-1).imag]) for c in columns]).T
    if mat.size == 0 or not np.any(mat):
        return np.eye(len(columns))
    _, s, vt = np.linalg.svd(mat, full_matrices=True)
    cut = max(eps_rank * s[0], eps_rank)
    r = int(np.sum(s > cut))
    return vt[r:].T


# --- border parametrization ----------------------------------------------------


def _border_basis(K: NcSet, n: int):
    """Real basis of border data; each element is a list of (b_j, r_j) per coordinate."""
    basis = []
    for j in range(K.d):
        for s in range(n):
            for phase in (1.0, 1j):
                b = [np.zeros(n, dtype=complex) for _ in range(K.d)]
                r = [np.zeros(n, dtype=complex) for _ in range(K.d)]
                b[j][s] = phase
                if K.hermitian:
                    r[j][s] = np.conj(phase)
                basis.append((b, r))
                if not K.hermitian:
                    b2 = [np.zeros(n, dtype=complex) for _ in range(K.d)]
                    r2 = [np.zeros(n, dtype=complex) for _ in range(K.d)]
                    r2[j][s] = phase
                    basis.append((b2, r2))
    return basis


def _combine(basis, theta):
    n = basis[0][0][0].size
    d = len(basis[0][0])
    b = [np.zeros(n, dtype=complex) for _ in range(d)]
    r = [np.zeros(n, dtype=complex) for _ in range(d)]
    for t, (bb, rr) in zip(theta, basis):
        if t == 0:
            continue
        for j in range(d):
            b[j] += t * bb[j]
            r[j] += t * rr[j]
    return b, r


def _coupling_block(K: NcSet, b, r):
    p = K.pencil
    out = np.zeros((p.size * b[0].size, p.size), dtype=complex)
    for a, bj, rj in zip(p.coeffs, b, r):
        out += np.kron(a, bj.reshape(-1, 1)) + np.kron(a.conj().T, rj.conj().reshape(-1, 1))
    return out / 2


def _bordered(x: NcPoint, b, r, c, s) -> NcPoint:
    mats = []
    for j, m in enumerate(x.mats):
        top = np.hstack([m, s * b[j].reshape(-1, 1)])
        bot = np.hstack([s * r[j].reshape(1, -1), np.array([[c[j]]])])
        mats.append(np.vstack([top, bot]))
    return NcPoint(mats)


def _corner_and_coupling(K: NcSet, Mth: np.ndarray):
    """max t s.t. L(c) - t M >= 0 over level-1 corners c."""
    m = Lmi()
    theta, xs = _level1_vars(m, K.d, K.hermitian)
    t = m.scalar()
    m.add_psd(K.pencil.expr(xs) - kron(t, Mth))
    m.maximize(t)
    r = m.solve()
    if not r.ok:
        return None, 0.0
    return coords_to_point(r(theta).real, K.d, K.hermitian), float(r.value)


def _pencil_one_step(K: NcSet, x: NcPoint, tol: Tolerances, rng: np.random.Generator | None = None):
    n = x.level
    L = K.pencil.value(x.mats)
    Q, R, wr = _kernel_of_psd(L, tol)
    basis = _border_basis(K, n)
    images = [Q.conj().T @ _coupling_block(K, b, r) for b, r in basis]
    if Q.shape[1] == 0:
        ker = np.eye(len(basis))
    else:
        ker = _real_kernel(images, tol.eps_rank)
    if ker.shape[1] == 0:
        return None
    if not K.center_margin > 0:
        raise ValueError("pencil dilation search needs a level-1 interior point")
    Lpinv = (R / wr) @ R.conj().T
    cols = ker.shape[1]
    if rng is not None:
        u = ker @ rng.standard_normal(cols)
        dirs = [u / np.linalg.norm(u)]
    elif cols <= MAX_DIRECTIONS:
        dirs = [ker[:, i] for i in range(cols)]
    else:
        rng = np.random.default_rng(cols * 7919 + n)
        dirs = [ker[:, i] for i in range(MAX_DIRECTIONS // 2)]
        for _ in range(MAX_DIRECTIONS - len(dirs)):
            u = ker @ rng.standard_normal(cols)
            dirs.append(u / np.linalg.norm(u))
    best = None
    for th in dirs:
        b, r = _combine(basis, th)
        Bm = _coupling_block(K, b, r)
        Mth = herm_part(Bm.conj().T @ Lpinv @ Bm)
        if np.max(np.abs(Mth)) <= 0:
            # the coupling is invisible to the pencil: any size works; use the center corner
            corner, t = K.center, 1.0
        else:
            corner, t = _corner_and_coupling(K, Mth)
        if corner is None or t <= 0:
            continue
        if best is None or t > best[0]:
            best = (t, b, r, corner)
    if best is None:
        return None
    t, b, r, corner = best
    c = [m[0, 0] for m in corner.mats]
    s = np.sqrt(t)
    if rng is not None:
        s *= float(rng.uniform(0.2, 1.0))
    for _ in range(60):
        parent = _bordered(x, b, r, c, s)
        if lambda_min(K.pencil.value(parent.mats)) >= -tol.eps_psd:
            break
        s *= 0.9
    else:
        return None
    emb = np.vstack([np.eye(n), np.zeros((1, n))]).astype(complex)
    cn = coupling_norm(parent, emb)
    return DilationWitness(parent, emb, cn > tol.eps_rank, cn)


def _generic_one_step(K: NcSet, x: NcPoint, tol: Tolerances):
    n = x.level
    best = None
    basis_len = (2 if K.hermitian else 4) * K.d * n
    for k in range(basis_len):
        m = Lmi()
        if K.hermitian:
            bs = [m.complex((n, 1)) for _ in range(K.d)]
            rs = [b.H for b in bs]
            cs = [m.real((1, 1)) for _ in range(K.d)]
        else:
            bs = [m.complex((n, 1)) for _ in range(K.d)]
            rs = [m.complex((1, n)) for _ in range(K.d)]
            cs = [m.complex((1, 1)) for _ in range(K.d)]
        ys = [bmat([[np.asarray(xm), b], [r, c]]) for xm, b, r, c in zip(x.mats, bs, rs, cs)]
        add_member(m, K, ys)
        # coordinate k of the border: (coordinate j, entry s, part)
        per = 2 if K.hermitian else 4
        j, rem = divmod(k, per * n)
        s, part = divmod(rem, per)
        src = bs[j][s, 0] if part < 2 else rs[j][0, s]
        m.maximize(src.real if part % 2 == 0 else src.imag)
        r = m.solve()
        if not r.ok:
            continue
        if best is None or r.value > best[0]:
            best = (r.value, [r(y) for y in ys])
    if best is None or best[0] <= GENERIC_THRESHOLD:
        return None
    parent = NcPoint(best[1])
    if K.hermitian:
        parent = NcPoint([herm_part(mm) for mm in parent.mats])
    emb = np.vstack([np.eye(n), np.zeros((1, n))]).astype(complex)
    cn = coupling_norm(parent, emb)
    return DilationWitness(parent, emb, cn > tol.eps_rank, cn)


def find_one_step_dilation(K: NcSet, x: NcPoint, tol: Tolerances = DEFAULT_TOL):
    """A nontrivial dilation of x at level n+1, or None when x is maximal."""
    K.check_point(x, tol)
    if not is_member(K, x, tol):
        raise ValueError("point is not in the set")
    if K.kind == "pencil":
        w = _pencil_one_step(K, x, tol)
    else:
        w = _generic_one_step(K, x, tol)
    if w is None or not w.nontrivial:
        return None
    return w


def random_dilation(K: NcSet, x: NcPoint, rng: np.random.Generator, steps: int = 1,
                    tol: Tolerances = DEFAULT_TOL):
    """A seeded random dilation (y, V) of x inside a pencil set, V* y V = x.

    Each step borders the current point along a random admissible direction
    with a random fraction of the largest feasible coupling.  Steps that find
    no admissible direction (maximal points) leave the point unchanged.
    """
    if K.kind != "pencil":
        raise ValueError("random dilations are built for pencil sets")
    y = x
    emb = np.eye(x.level, dtype=complex)
    for _ in range(steps):
        w = _pencil_one_step(K, y, tol, rng)
        if w is None or not w.nontrivial:
            break
        emb = w.embedding @ emb
        y = w.parent
    return y, emb


def is_maximal(K: NcSet, x: NcPoint, tol: Tolerances = DEFAULT_TOL):
    w = find_one_step_dilation(K, x, tol)
    return w is None, w


def is_irreducible(x: NcPoint, tol: Tolerances = DEFAULT_TOL) -> bool:
    return commutant_basis(x.mats, tol).shape[0] == 1


def _perturb_basis(K: NcSet, n: int):
    out = []
    for j in range(K.d):
        for a in range(n):
            for b in range(n):
                if K.hermitian:
                    if a > b:
                        continue
                    e = np.zeros((n, n), dtype=complex)
                    if a == b:
                        e[a, a] = 1.0
                        out.append((j, e))
                    else:
                        e[a, b] = e[b, a] = 1.0
                        out.append((j, e))
                        f = np.zeros((n, n), dtype=complex)
                        f[a, b], f[b, a] = 1j, -1j
                        out.append((j, f))
                else:
                    for ph in (1.0, 1j):
                        e = np.zeros((n, n), dtype=complex)
                        e[a, b] = ph
                        out.append((j, e))
    return out


def _scaled_into(K: NcSet, L: np.ndarray, h):
    # L1(h) vanishes on ker L(x), so |s| <= (smallest positive eigenvalue of L) / ||L1(h)|| keeps x +- s h inside
    w = np.linalg.eigvalsh(herm_part(L))
    pos = w[w > 10 * max(1e-12, 1e-9 * float(np.max(np.abs(w))))]
    lin = np.linalg.norm(K.pencil.linear(h), 2)
    s = 0.5 * float(pos[0]) / lin if pos.size and lin > 0 else 1.0
    return [s * m for m in h]


def euclidean_extreme(K: NcSet, x: NcPoint, tol: Tolerances = DEFAULT_TOL):
    """(flag, perturbation) for classical extremality of x in the level-n set."""
    n = x.level
    basis = _perturb_basis(K, n)
    if K.kind == "pencil":
        L = K.pencil.value(x.mats)
        Q, _, _ = _kernel_of_psd(L, tol)
        if Q.shape[1] == 0:
            h = [np.zeros((n, n), dtype=complex) for _ in range(K.d)]
            j, e = basis[0]
            h[j] = e
            return False, _scaled_into(K, L, h)
        imgs = []
        for j, e in basis:
            h = [np.zeros((n, n), dtype=complex) for _ in range(K.d)]
            h[j] = e
            imgs.append(K.pencil.linear(h) @ Q)
        ker = _real_kernel(imgs, tol.eps_rank)
        if ker.shape[1] == 0:
            return True, None
        th = ker[:, 0]
        h = [np.zeros((n, n), dtype=complex) for _ in range(K.d)]
        for t, (j, e) in zip(th, basis):
            h[j] = h[j] + t * e
        return False, _scaled_into(K, L, h)
    best = None
    for k in range(len(basis)):
        m = Lmi()
        hs = [m.hermitian(n) if K.hermitian else m.complex((n, n)) for _ in range(K.d)]
        add_member(m, K, [Affine(np.asarray(xm)) + h for xm, h in zip(x.mats, hs)])
        add_member(m, K, [Affine(np.asarray(xm)) - h for xm, h in zip(x.mats, hs)])
        j, e = basis[k]
        m.maximize((hs[j].map(lambda T: T * e.conj()[None])).sum().real)
        r = m.solve()
        if r.ok and (best is None or r.value > best[0]):
            best = (r.value, [r(h) for h in hs])
    if best is None or best[0] <= GENERIC_THRESHOLD:
        return True, None
    return False, best[1]


@dataclass
class ClassifyReport:
    euclidean_extreme_at_level: bool
    irreducible: bool
    maximal: bool
    nc_extreme: bool
    dilation: DilationWitness | None = None
    commutant_element: np.ndarray | None = None
    perturbation: list | None = None

    def to_dict(self):
        from .io import mat_to_json
        return {
            "euclidean_extreme_at_level": bool(self.euclidean_extreme_at_level),
            "irreducible": bool(self.irreducible),
            "maximal": bool(self.maximal),
            "nc_extreme": bool(self.nc_extreme),
            "dilation": None if self.dilation is None else self.dilation.to_dict(),
            "commutant_element": None if self.commutant_element is None else mat_to_json(self.commutant_element),
            "perturbation": None if self.perturbation is None else [mat_to_json(h) for h in self.perturbation],
        }


def classify_point(K: NcSet, x: NcPoint, tol: Tolerances = DEFAULT_TOL) -> ClassifyReport:
    K.check_point(x, tol)
    if not is_member(K, x, tol):
        raise ValueError("point is not in the set")
    maximal, wit = is_maximal(K, x, tol)
    comm = commutant_basis(x.mats, tol)
    irreducible = comm.shape[0] == 1
    celem = None
    if not irreducible:
        # a non-scalar commutant element, orthogonal to the identity
        eye = np.eye(x.level) / np.sqrt(x.level)
        for c in comm:
            c2 = c - np.vdot(eye, c) * eye
            if np.linalg.norm(c2) > 1e-6:
                celem = herm_part(c2) if np.linalg.norm(herm_part(c2)) > 1e-6 else herm_part(1j * c2)
                break
    euc, h = euclidean_extreme(K, x, tol)
    ncx = irreducible and maximal
    return ClassifyReport(euc or ncx, irreducible, maximal, ncx, wit, celem, h)


@dataclass
class Maximal:
    point: NcPoint
    embedding: np.ndarray
    steps: int

    capped = False


@dataclass
class Capped:
    best: NcPoint
    embedding: np.ndarray
    steps: int

    capped = True


def dilate_to_maximal(K: NcSet, x: NcPoint, max_steps: int = 8, tol: Tolerances = DEFAULT_TOL):
    """Absorb one-step dilations until none exists or the step cap is hit."""
    y = x
    emb = np.eye(x.level, dtype=complex)
    for step in range(max_steps + 1):
        w = find_one_step_dilation(K, y, tol)
        if w is None:
            return Maximal(y, emb, step)
        if step == max_steps:
            return Capped(y, emb, step)
        emb = w.embedding @ emb
        y = w.parent
    return Capped(y, emb, max_steps)


@dataclass
class Representable:
    weights: list                  # [(candidate index, alpha)] with alpha in M_{n_i, n}
    stacked: list                  # per candidate: (index, copies, stacked alpha) or None
    residual: float

    represented = True


@dataclass
class NotRepresented:
    gap: float

    represented = False


def krein_milman_check(K: NcSet | None, x: NcPoint, candidates, tol: Tolerances = DEFAULT_TOL):
    """Is x an nc convex combination of the candidate points?"""
    cands = list(candidates)
    if not cands:
        return NotRepresented(float("inf"))
    r, W, _ = hull_membership_lmi(cands, x)
    if not r.ok:
        return NotRepresented(float("inf"))
    if r.value < -hull_threshold(tol):
        return NotRepresented(float(-r.value))
    weights = weights_from_gram([r(w) for w in W], cands, x.level)
    recon = [np.zeros((x.level, x.level), dtype=complex) for _ in range(x.d)]
    for i, a in weights:
        for j in range(x.d):
            recon[j] += a.conj().T @ cands[i].mats[j] @ a
    resid = max(float(np.max(np.abs(rm - xm))) for rm, xm in zip(recon, x.mats))
    stacked = []
    for i in range(len(cands)):
        parts = [a for k, a in weights if k == i]
        stacked.append(None if not parts else (i, len(parts), np.vstack(parts)))
    return Representable(weights, stacked, resid)
