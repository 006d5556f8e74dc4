"""Compact nc convex sets from three finite presentations, and membership.

* ``pencil``: {X : L(X) >= 0} with L(X) = A_0 (x) I + sum_j Re(A_j (x) X_j),
  where Re(T) = (T + T*)/2.  Monic pencils I - sum A_j (x) X_j are a special case.
* ``hull``: the closed nc convex hull of finitely many generator points.
* ``opsys``: the nc state space of span{1, S_j, S_j*} inside M_k.  A level-n
  point is the tuple (phi(S_1), ..., phi(S_d)) for a UCP map phi on M_k
  (Arveson extension), which by Stinespring is exactly the nc hull of the
  single tautological point (S_1, ..., S_d).  Membership therefore runs
  through the hull machinery with that one generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import (DEFAULT_TOL, NumericalFailure, Tolerances, as_cmat, herm_part, is_hermitian,
                     lambda_min, psd_sqrt, random_complex, random_hermitian, rank)
from .point import NcPoint
from .sdp import Affine, Lmi, kron
from .sdp.lmi import OPT, UNBOUNDED, INFEASIBLE

BOUND_CUTOFF = 1e6


# --------------------------------------------------------------------------
# pencils


@dataclass(frozen=True, eq=False)
class Pencil:
    a0: np.ndarray
    coeffs: tuple

    def __init__(self, a0, coeffs):
        a0 = as_cmat(a0)
        if a0.shape[0] != a0.shape[1] or not is_hermitian(a0):
            raise ValueError("pencil constant term must be a square Hermitian matrix")
        cs = tuple(as_cmat(c) for c in coeffs)
        if not cs:
            raise ValueError("pencil needs at least one coefficient")
        for c in cs:
            if c.shape != a0.shape:
                raise ValueError("pencil coefficients must share the size of the constant term")
        a0 = herm_part(a0)
        a0.setflags(write=False)
        for c in cs:
            c.setflags(write=False)
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def monic(cls, coeffs) -> "Pencil":
        """I - sum_j A_j (x) X_j for Hermitian A_j."""
        cs = [as_cmat(c) for c in coeffs]
        for c in cs:
            if not is_hermitian(c):
                raise ValueError("monic pencil coefficients must be Hermitian")
        return cls(np.eye(cs[0].shape[0]), [-herm_part(c) for c in cs])

    @property
    def d(self) -> int:
        return len(self.coeffs)

    @property
    def size(self) -> int:
        return self.a0.shape[0]

    def linear(self, mats) -> np.ndarray:
        n = np.asarray(mats[0]).shape[0]
        out = np.zeros((self.size * n, self.size * n), dtype=complex)
        for a, x in zip(self.coeffs, mats):
            out += np.kron(a, x)
        return herm_part(out)

    def value(self, mats) -> np.ndarray:
        n = np.asarray(mats[0]).shape[0]
        return np.kron(self.a0, np.eye(n)) + self.linear(mats)

    def expr(self, ys: Sequence[Affine]) -> Affine:
        """L as an affine expression in a tuple of affine matrices."""
        n = ys[0].shape[0]
        total = Affine(np.kron(self.a0, np.eye(n)))
        for a, y in zip(self.coeffs, ys):
            total = total + kron(a, y)
        return total.herm()


# --------------------------------------------------------------------------
# membership results


@dataclass
class Inside:
    margin: float
    weights: list | None = None     # hull route: [(generator index, alpha)]

    inside = True


@dataclass
class Outside:
    margin: float
    certificate: object = None

    inside = False


# --------------------------------------------------------------------------
# the set


@dataclass(frozen=True, eq=False)
class NcSet:
    kind: str
    d: int
    hermitian: bool
    pencil: Pencil | None = None
    generators: tuple = ()
    gens: tuple = ()                 # opsys matrices S_j
    bounds: np.ndarray | None = None  # (ncoords, 2) level-1 coordinate ranges
    center: NcPoint | None = None
    center_margin: float = float("nan")
    name: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def hull_generators(self) -> tuple:
        if self.kind == "hull":
            return self.generators
        if self.kind == "opsys":
            return (NcPoint(self.gens),)
        raise ValueError("pencil sets have no generator list")

    def check_point(self, x: NcPoint, tol: Tolerances = DEFAULT_TOL) -> None:
        if x.d != self.d:
            raise ValueError(f"point has {x.d} coordinates, set expects {self.d}")
        if self.hermitian and not x.is_hermitian(max(tol.eps_eq, 1e-8)):
            raise ValueError("this set has self-adjoint coordinates; point is not Hermitian")

    def __repr__(self):
        label = self.name or self.kind
        return f"NcSet({label}, d={self.d})"


def _coord_count(d: int, hermitian: bool) -> int:
    return d if hermitian else 2 * d


def _level1_vars(m: Lmi, d: int, hermitian: bool):
    theta = m.real((_coord_count(d, hermitian), 1))
    if hermitian:
        xs = [theta[j, 0] for j in range(d)]
    else:
        xs = [theta[j, 0] + 1j * theta[d + j, 0] for j in range(d)]
    return theta, xs


def coords_to_point(theta, d: int, hermitian: bool) -> NcPoint:
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if hermitian:
        return NcPoint.scalar(*theta[:d])
    return NcPoint.scalar(*(theta[:d] + 1j * theta[d:2 * d]))


def _pencil_level1(p: Pencil, hermitian: bool):
    """Coordinate bounds and a most-interior level-1 point, both by SDP."""
    nc = _coord_count(p.d, hermitian)
    bounds = np.zeros((nc, 2))
    for i in range(nc):
        for side, sign in ((0, -1.0), (1, 1.0)):
            m = Lmi()
            theta, xs = _level1_vars(m, p.d, hermitian)
            m.add_psd(p.expr(xs))
            m.maximize(sign * theta[i, 0])
            r = m.solve()
            if r.status == INFEASIBLE:
                raise ValueError("pencil set is empty at level 1")
            if r.status == UNBOUNDED or (r.ok and abs(r.value) > BOUND_CUTOFF):
                raise ValueError("pencil set is unbounded at level 1 (coordinate sup exceeds 1e6)")
            if not r.ok:
                raise NumericalFailure(f"boundedness check failed numerically ({r.status})")
            bounds[i, side] = sign * r.value
    m = Lmi()
    theta, xs = _level1_vars(m, p.d, hermitian)
    t = m.scalar()
    m.add_psd(p.expr(xs) - kron(t, np.eye(p.size)))
    m.maximize(t)
    r = m.solve()
    if not r.ok:
        raise NumericalFailure(f"could not locate an interior point ({r.status})")
    center = coords_to_point(r(theta).real, p.d, hermitian)
    margin = lambda_min(p.value(center.mats))
    return bounds, center, margin


def pencil_set(a0, coeffs, hermitian: bool = True, name: str = "") -> NcSet:
    """General pencil set; boundedness is verified by level-1 SDPs."""
    p = Pencil(a0, coeffs)
    if hermitian:
        for c in p.coeffs:
            if not is_hermitian(c):
                raise ValueError("self-adjoint pencil sets need Hermitian coefficients")
    bounds, center, margin = _pencil_level1(p, hermitian)
    return NcSet("pencil", p.d, hermitian, pencil=p, bounds=bounds, center=center,
                 center_margin=margin, name=name or "pencil")


def interval_set(c: float, d: float) -> NcSet:
    """Operator interval {X = X* : cI <= X <= dI} as diag(X - c, d - X) >= 0."""
    c, d = float(c), float(d)
    if not c < d:
        raise ValueError("interval needs c < d")
    p = Pencil(np.diag([-c, d]), [np.diag([1.0, -1.0])])
    return NcSet("pencil", 1, True, pencil=p, bounds=np.array([[c, d]]),
                 center=NcPoint.scalar((c + d) / 2), center_margin=(d - c) / 2,
                 name=f"interval[{c:g},{d:g}]", meta={"interval": (c, d)})


def row_ball_set(d: int) -> NcSet:
    """Row contractions sum_j X_j X_j* <= I via [[I, R], [R*, I]] >= 0, R = [X_1 ... X_d]."""
    d = int(d)
    if d < 1:
        raise ValueError("row ball needs d >= 1")
    k = d + 1
    coeffs = []
    for j in range(d):
        a = np.zeros((k, k))
        a[0, j + 1] = 2.0
        coeffs.append(a)
    p = Pencil(np.eye(k), coeffs)
    bounds = np.tile([-1.0, 1.0], (2 * d, 1))
    return NcSet("pencil", d, False, pencil=p, bounds=bounds, center=NcPoint.scalar(*([0.0] * d)),
                 center_margin=1.0, name=f"row_ball({d})", meta={"row_ball": d})


def hull_set(generators: Sequence[NcPoint], name: str = "") -> NcSet:
    gens = tuple(generators)
    if not gens:
        raise ValueError("hull needs at least one generator")
    d = gens[0].d
    if any(g.d != d for g in gens):
        raise ValueError("hull generators must share the coordinate count")
    herm = all(g.is_hermitian() for g in gens)
    bounds = _hull_bounds(gens, herm)
    g0 = gens[0]
    center = NcPoint.scalar(*[np.trace(m) / g0.level for m in g0.mats])
    return NcSet("hull", d, herm, generators=gens, bounds=bounds, center=center, name=name or "hull")


def opsys_set(gens: Sequence, name: str = "") -> NcSet:
    mats = tuple(as_cmat(s) for s in gens)
    if not mats:
        raise ValueError("operator system needs at least one generator")
    k = mats[0].shape[0]
    for s in mats:
        if s.shape != (k, k):
            raise ValueError("operator system generators must be square of a common size")
    herm = all(is_hermitian(s) for s in mats)
    span = [np.eye(k).reshape(-1)]
    for s in mats:
        span.append(s.reshape(-1))
        if not herm:
            span.append(s.conj().T.reshape(-1))
    if rank(np.array(span).T, 1e-10) < len(span):
        raise ValueError("{1, S_j, S_j*} must be linearly independent")
    for s in mats:
        s.setflags(write=False)
    pt = NcPoint(mats)
    bounds = _hull_bounds((pt,), herm)
    center = NcPoint.scalar(*[np.trace(s) / k for s in mats])
    return NcSet("opsys", len(mats), herm, gens=mats, bounds=bounds, center=center,
                 name=name or "opsys")


def _hull_bounds(gens, herm):
    d = gens[0].d
    nc = _coord_count(d, herm)
    b = np.zeros((nc, 2))
    for i in range(nc):
        j = i % d
        lo, hi = np.inf, -np.inf
        for g in gens:
            m = g.mats[j] if i < d else -1j * g.mats[j]
            h = herm_part(m)
            w = np.linalg.eigvalsh(h)
            lo, hi = min(lo, w[0]), max(hi, w[-1])
        b[i] = lo, hi
    return b


def cuntz_truncation(depth: int = 2):
    """Left creation operators S_1, S_2 on words of length <= depth over {1, 2}.

    Words pushed past the depth are dropped; depth 2 gives 7 basis vectors.
    """
    words = [()]
    for L in range(1, depth + 1):
        words += [w + (a,) for w in words if len(w) == L - 1 for a in (1, 2)]
    words = sorted(set(words), key=lambda w: (len(w), w))
    pos = {w: i for i, w in enumerate(words)}
    k = len(words)
    gens = []
    for a in (1, 2):
        s = np.zeros((k, k))
        for w in words:
            if len(w) < depth:
                s[pos[(a,) + w], pos[w]] = 1.0
        gens.append(s)
    return gens, words


# --------------------------------------------------------------------------
# membership


def hull_gram_map(g: np.ndarray, n: int):
    """Linear map W -> phi(g) for W in M_{n_g n} the Choi-type Gram matrix.

    With W = sum_r w_r w_r*, w_r[(p, a)] = alpha_r[p, a], this is
    phi(g) = sum_r alpha_r* g alpha_r.
    """
    ng = g.shape[0]

    def fn(T):
        T4 = T.reshape(T.shape[0], ng, n, ng, n)
        return np.einsum("pq,kqbpa->kab", g, T4)
    return fn


def add_hull_member(m: Lmi, gens: Sequence[NcPoint], ys: Sequence[Affine], slack: Affine | None = None):
    """Constrain the affine tuple ys to the nc hull of gens; returns the Gram blocks."""
    n = ys[0].shape[0]
    W = []
    unit = None
    images = [None] * len(ys)
    for g in gens:
        ng = g.level
        w = m.hermitian(ng * n)
        m.add_psd(w if slack is None else w - kron(slack, np.eye(ng * n)))
        W.append(w)
        u = w.map(hull_gram_map(np.eye(ng), n))
        unit = u if unit is None else unit + u
        for j, gm in enumerate(g.mats):
            im = w.map(hull_gram_map(np.asarray(gm), n))
            images[j] = im if images[j] is None else images[j] + im
    m.add_eq(unit, np.eye(n))
    for j, y in enumerate(ys):
        m.add_eq(images[j], y)
    return W


def add_member(m: Lmi, K: NcSet, ys: Sequence[Affine], slack: Affine | None = None):
    """Add constraints forcing the affine tuple ys into K at its level."""
    if K.kind == "pencil":
        n = ys[0].shape[0]
        expr = K.pencil.expr(ys)
        if slack is not None:
            expr = expr - kron(slack, np.eye(K.pencil.size * n))
        m.add_psd(expr)
        return None
    return add_hull_member(m, K.hull_generators, ys, slack)


def weights_from_gram(W, gens, n, cutoff=1e-12):
    """Recover nc weights [(generator index, alpha)] from Gram blocks."""
    out = []
    for i, (w, g) in enumerate(zip(W, gens)):
        lam, vec = np.linalg.eigh(herm_part(w))
        top = max(float(lam[-1]), 0.0) if lam.size else 0.0
        for l in range(lam.size):
            if lam[l] > cutoff * max(top, 1.0):
                out.append((i, np.sqrt(lam[l]) * vec[:, l].reshape(g.level, n)))
    if out:
        s = sum(a.conj().T @ a for _, a in out)
        fix = np.linalg.inv(psd_sqrt(s))
        out = [(i, a @ fix) for i, a in out]
    return out


def pencil_margin(K: NcSet, x: NcPoint) -> float:
    return lambda_min(K.pencil.value(x.mats))


def hull_membership_lmi(gens, x: NcPoint):
    """max t such that the Gram blocks satisfy W_i >= t I and reproduce x."""
    m = Lmi()
    t = m.scalar()
    ys = [Affine(mm) for mm in x.mats]
    W = add_hull_member(m, gens, ys, slack=t)
    m.maximize(t)
    r = m.solve()
    return r, W, t


def membership(K: NcSet, x: NcPoint, tol: Tolerances = DEFAULT_TOL, certify: bool = True):
    """Inside(margin) or Outside(certificate) for x at its own level."""
    K.check_point(x, tol)
    if K.kind == "pencil":
        mg = pencil_margin(K, x)
        if mg >= -tol.eps_psd:
            return Inside(mg)
        cert = None
        if certify:
            from .separation import separate
            cert = separate(K, x, tol)
        return Outside(mg, cert)
    gens = K.hull_generators
    r, W, t = hull_membership_lmi(gens, x)
    if r.ok:
        margin = float(r.value)
        if margin >= -hull_threshold(tol):
            weights = weights_from_gram([r(w) for w in W], gens, x.level)
            return Inside(margin, weights)
    elif r.status != INFEASIBLE:
        raise NumericalFailure(f"hull membership SDP failed: {r.status}")
    else:
        margin = float("-inf")
    cert = None
    if certify:
        from .separation import separate
        cert = separate(K, x, tol)
    return Outside(margin, cert)


def hull_threshold(tol: Tolerances) -> float:
    # the Gram slack reaches zero exactly on the relative boundary; the solver
    # leaves it a few orders of magnitude below its duality-gap tolerance
    return max(10 * tol.eps_sdp, tol.eps_psd)


def is_member(K: NcSet, x: NcPoint, tol: Tolerances = DEFAULT_TOL) -> bool:
    return membership(K, x, tol, certify=False).inside


# --------------------------------------------------------------------------
# sampling


def random_direction(K: NcSet, n: int, rng: np.random.Generator):
    if K.hermitian:
        return [random_hermitian(n, rng) for _ in range(K.d)]
    return [random_complex(n, n, rng) for _ in range(K.d)]


def boundary_step(K: NcSet, base: Sequence[np.ndarray], direction: Sequence[np.ndarray]) -> float:
    """Largest s with base + s * direction in the pencil set (base strictly inside)."""
    p = K.pencil
    g = p.value(base)
    dl = p.linear(direction)
    w, v = np.linalg.eigh(herm_part(g))
    if w[0] <= 0:
        raise ValueError("base point is not strictly inside")
    isq = (v / np.sqrt(w)) @ v.conj().T
    top = float(np.linalg.eigvalsh(herm_part(isq @ (-dl) @ isq))[-1])
    return np.inf if top <= 0 else 1.0 / top


def sample_member(K: NcSet, n: int, rng: np.random.Generator, boundary_prob: float = 0.3) -> NcPoint:
    """A seeded random member of K_n.

    Pencils: a random direction from the level-1 center ampliated, pushed to
    the boundary by an exact eigenvalue line search, then mixed toward the
    center.  Hulls: a random nc combination of (copies of) the generators.
    """
    if K.kind == "pencil":
        if not K.center_margin > 0:
            raise ValueError("sampling needs a pencil with interior")
        base = [c[0, 0] * np.eye(n) for c in K.center.mats]
        dirs = random_direction(K, n, rng)
        s = boundary_step(K, base, dirs)
        u = 1.0 if rng.random() < boundary_prob else float(rng.random())
        pt = NcPoint([b + u * s * h for b, h in zip(base, dirs)])
        if K.hermitian:
            pt = NcPoint([herm_part(mm) for mm in pt.mats])
        return pt
    gens = K.hull_generators
    alphas = []
    for i, g in enumerate(gens):
        copies = int(rng.integers(0, 3))
        for _ in range(copies):
            alphas.append((i, random_complex(g.level, n, rng)))
    # sum a* a must be invertible, so the copies need at least n rows in total
    while sum(gens[i].level for i, _ in alphas) < n:
        i = int(rng.integers(0, len(gens)))
        alphas.append((i, random_complex(gens[i].level, n, rng)))
    s = sum(a.conj().T @ a for _, a in alphas)
    fix = np.linalg.inv(psd_sqrt(s))
    mats = []
    for j in range(K.d):
        mats.append(sum((a @ fix).conj().T @ gens[i].mats[j] @ (a @ fix) for i, a in alphas))
    pt = NcPoint(mats)
    if K.hermitian:
        pt = NcPoint([herm_part(mm) for mm in pt.mats])
    return pt
