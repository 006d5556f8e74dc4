"""UCP maps as Stinespring pairs, and matrix-valued moment relaxations.

A moment functional of level p and order r assigns tau(w) in M_p to every
word w of length <= 2r.  The relaxation asks for

    tau(1) = I,  tau(w*) = tau(w)*,
    moment matrix  [tau(u* v)]_{|u|,|v| <= r}  >= 0,
    localizing matrix  [tau(u* L v)]_{|u|,|v| <= r-1}  >= 0

for the defining pencil L of the set.  Every UCP map restricted to words
satisfies these, so infeasibility is conclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .linalg import DEFAULT_TOL, Tolerances, herm_part, is_isometry, orthonormal_columns, psd_sqrt
from .ncfunctions import FreePoly, words_up_to
from .point import NcPoint, compress
from .sdp import Affine, Lmi, bmat, kron


@dataclass(frozen=True)
class UcpRep:
    """mu(f) = V* f(y) V for a point y of level p and an isometry V (p x n)."""

    point: NcPoint
    isometry: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.isometry, dtype=complex)
        if v.ndim != 2 or v.shape[0] != self.point.level:
            raise ValueError("isometry rows must equal the Stinespring point level")
        if not is_isometry(v, Tolerances(eps_eq=1e-7)):
            raise ValueError("isometry is not an isometry")
        object.__setattr__(self, "isometry", v)

    @classmethod
    def delta(cls, x: NcPoint) -> "UcpRep":
        return cls(x, np.eye(x.level, dtype=complex))

    @property
    def target_level(self) -> int:
        return self.isometry.shape[1]

    @property
    def d(self) -> int:
        return self.point.d

    def minimal(self, tol: Tolerances = DEFAULT_TOL) -> "UcpRep":
        return minimal_rep(self, tol)

    def is_minimal(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return saturated_subspace(self, tol).shape[1] == self.point.level

    def rotated(self, u: np.ndarray) -> "UcpRep":
        """The pair (u* y u, u* V) for a unitary u."""
        return UcpRep(self.point.conj_by(u.conj().T), u.conj().T @ self.isometry)


def barycenter(mu: UcpRep) -> NcPoint:
    return compress(mu.point, mu.isometry)


def apply(mu: UcpRep, f) -> np.ndarray:
    v = mu.isometry
    return v.conj().T @ f.eval(mu.point) @ v


def saturated_subspace(mu: UcpRep, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the smallest subspace containing V H_n and invariant under y_j, y_j*."""
    y = mu.point
    letters = []
    for m in y.mats:
        letters += [m, m.conj().T]
    basis = orthonormal_columns(mu.isometry, tol.eps_rank)
    # degree cap p^2 on the words generating the orbit; the span stabilizes within p rounds
    for _ in range(max(1, y.level ** 2)):
        cand = np.hstack([basis] + [a @ basis for a in letters])
        new = orthonormal_columns(cand, tol.eps_rank)
        if new.shape[1] == basis.shape[1]:
            return new
        basis = new
    return basis


def minimal_rep(mu: UcpRep, tol: Tolerances = DEFAULT_TOL) -> UcpRep:
    V = saturated_subspace(mu, tol)
    if V.shape[1] == mu.point.level:
        return mu
    return UcpRep(compress(mu.point, V), V.conj().T @ mu.isometry)


def standard_form(mu: UcpRep) -> UcpRep:
    """Rotate the Stinespring pair so that the isometry is [I; 0]."""
    v = mu.isometry
    p, n = v.shape
    if p == n:
        return UcpRep(mu.point.conj_by(v.conj().T), np.eye(n, dtype=complex))
    comp = sla.null_space(v.conj().T)
    u = np.hstack([v, comp])
    return mu.rotated(u)


# --- words and moment data ----------------------------------------------------


def _adj(w):
    return tuple(l ^ 1 for l in reversed(w))


def _canon(w, hermitian):
    return tuple(l & ~1 for l in w) if hermitian else tuple(w)


def word_value(x: NcPoint, w) -> np.ndarray:
    letters = []
    for m in x.mats:
        letters += [m, m.conj().T]
    out = np.eye(x.level, dtype=complex)
    for l in w:
        out = out @ letters[l]
    return out


def moment_data(mu: UcpRep, words) -> dict:
    """mu(w) for each word (with prefix sharing)."""
    y = mu.point
    letters = []
    for m in y.mats:
        letters += [m, m.conj().T]
    v = mu.isometry
    cache = {(): v}
    out = {}
    for w in sorted(set(words), key=len):
        if w not in cache:
            # words are built right to left so that w(y) V reuses the suffix
            cache[w] = letters[w[0]] @ cache[w[1:]] if w[1:] in cache else word_value(y, w) @ v
        out[w] = v.conj().T @ cache[w]
    return out


@dataclass
class MomentRelaxation:
    """Model of a level-p moment functional of order r for a pencil set."""

    K: object
    p: int
    order: int
    model: Lmi = field(default_factory=Lmi)
    tau: dict = field(default_factory=dict)

    def __post_init__(self):
        K = self.K
        if K.kind != "pencil":
            raise ValueError("moment relaxations need a pencil presentation")
        self.hermitian = K.hermitian
        r = self.order
        self.basis = words_up_to(K.d, r, self.hermitian)
        self.loc_basis = words_up_to(K.d, r - 1, self.hermitian) if r >= 1 else []
        m, p = self.model, self.p
        for w in words_up_to(K.d, 2 * r, self.hermitian):
            w = _canon(w, self.hermitian)
            if w in self.tau:
                continue
            wa = _canon(_adj(w), self.hermitian)
            if w == ():
                self.tau[w] = Affine(np.eye(p, dtype=complex))
            elif wa == w:
                self.tau[w] = m.hermitian(p)
            else:
                v = m.complex((p, p))
                self.tau[w] = v
                self.tau[wa] = v.H

    def get(self, w) -> Affine:
        return self.tau[_canon(w, self.hermitian)]

    def fix(self, w, value):
        self.model.add_eq(self.get(w), np.asarray(value, dtype=complex))

    def fix_block(self, w, value):
        n = value.shape[0]
        self.model.add_eq(self.get(w)[:n, :n], np.asarray(value, dtype=complex))

    def fix_barycenter(self, x: NcPoint):
        for j, mm in enumerate(x.mats):
            self.fix((2 * j,), mm)
            if not self.hermitian:
                self.fix((2 * j + 1,), mm.conj().T)

    def value_of(self, f: FreePoly) -> Affine:
        out = Affine(np.zeros((self.p, self.p), dtype=complex))
        for w, c in f.terms.items():
            w = _canon(w, self.hermitian)
            if len(w) > 2 * self.order:
                raise ValueError(f"word of length {len(w)} exceeds the relaxation order {self.order}")
            out = out + self.tau[w] * c
        return out

    def moment_matrix(self) -> Affine:
        B = self.basis
        return bmat([[self.get(_adj(u) + v) for v in B] for u in B])

    def localizing_matrix(self) -> Affine:
        P = self.K.pencil
        blocks = []
        for u in self.loc_basis:
            row = []
            for v in self.loc_basis:
                e = kron(P.a0, self.get(_adj(u) + v))
                for j, a in enumerate(P.coeffs):
                    e = e + kron(a * 0.5, self.get(_adj(u) + (2 * j,) + v))
                    e = e + kron(a.conj().T * 0.5, self.get(_adj(u) + (2 * j + 1,) + v))
                row.append(e)
            blocks.append(row)
        # reorder from (word, pencil, level) to a plain block matrix
        return bmat(blocks)

    def add_cones(self):
        self.model.add_psd(self.moment_matrix())
        if self.loc_basis:
            self.model.add_psd(self.localizing_matrix())

    def solve(self):
        return self.model.solve()

    def values(self, result) -> dict:
        return {w: result(e) for w, e in self.tau.items()}


def truncated_gns(K, tau: dict, order: int, d: int, hermitian: bool, n: int, cutoff: float = 1e-7):
    """Point and isometry built from solved moments on words of length <= order - 1.

    Returns a UcpRep whose barycenter matches tau on degree-one words; its
    values approximate tau on longer words and agree with them when the
    moment matrix is flat.
    """
    B = words_up_to(d, order - 1, hermitian)
    get = lambda w: tau[_canon(w, hermitian)]
    G = np.block([[get(_adj(u) + v) for v in B] for u in B])
    G = herm_part(G)
    lam, vec = np.linalg.eigh(G)
    keep = lam > cutoff * max(1.0, float(lam[-1]))
    vk, lk = vec[:, keep], lam[keep]
    isq = vk / np.sqrt(lk)
    mats = []
    for j in range(d):
        M = np.block([[get(_adj(u) + (2 * j,) + v) for v in B] for u in B])
        mats.append(isq.conj().T @ M @ isq)
    if hermitian:
        mats = [herm_part(m) for m in mats]
    # the empty word block: V = G^{1/2} restricted to the kept range
    E = np.zeros((G.shape[0], n), dtype=complex)
    E[:n, :n] = np.eye(n)
    V = (vk * np.sqrt(lk)).conj().T @ E
    # polar correction keeps V an isometry when small eigenvalues were cut
    u, _, vh = np.linalg.svd(V, full_matrices=False)
    V = u @ vh
    return UcpRep(NcPoint(mats), V)
