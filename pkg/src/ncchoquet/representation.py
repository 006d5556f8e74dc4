"""Irreducible decompositions and finitely supported nc measures."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_TOL, Tolerances, commutant_basis, herm_part, kernel
from .point import NcPoint, compress


@dataclass
class Component:
    """One unitary-equivalence class: point z and one embedding per copy (V_i* x V_i = z)."""

    point: NcPoint
    embeddings: list
    multiplicity: int


def _split(x: NcPoint, V: np.ndarray, rng, tol: Tolerances, out: list, retries: int = 5):
    basis = commutant_basis(x.mats, tol)
    if basis.shape[0] <= 1:
        out.append((x, V))
        return
    n = x.level
    for attempt in range(retries + 1):
        c = rng.standard_normal(basis.shape[0])
        H = herm_part(np.tensordot(c, basis, axes=1))
        w, U = np.linalg.eigh(H)
        spread = max(float(w[-1] - w[0]), 1e-300)
        gaps = np.diff(w) > max(tol.eps_rank, 1e-6) * spread
        groups = np.split(np.arange(n), np.nonzero(gaps)[0] + 1)
        # accept when the spectrum is well separated
        small = np.diff(w)[gaps].min() if gaps.any() else 0.0
        if len(groups) > 1 and (small > 1e-3 * spread or attempt == retries):
            if attempt == retries and small <= 1e-3 * spread:
                warnings.warn("commutant spectrum clustered; accepting a coarse split", RuntimeWarning)
            break
    else:
        out.append((x, V))
        return
    if len(groups) == 1:
        warnings.warn("could not split a reducible point", RuntimeWarning)
        out.append((x, V))
        return
    for g in groups:
        W = U[:, g]
        _split(compress(x, W), V @ W, rng, tol, out, retries)


def intertwiner(a: NcPoint, b: NcPoint, tol: Tolerances = DEFAULT_TOL):
    """A unitary T with T a_j T* = b_j for all j, or None."""
    if a.level != b.level or a.d != b.d:
        return None
    n = a.level
    eye = np.eye(n)
    rows = []
    # vec(T A - B T) = (I kron A^T - B kron I) vec(T), row-major
    for am, bm in zip(a.mats, b.mats):
        for A, B in ((am, bm), (am.conj().T, bm.conj().T)):
            rows.append(np.kron(eye, A.T) - np.kron(B, eye))
    sysm = np.vstack(rows)
    scale = max(1.0, max(float(np.max(np.abs(m))) for m in a.mats + b.mats))
    null = kernel(sysm, tol.eps_rank, atol=1e3 * tol.eps_rank * scale)
    if null.shape[1] == 0:
        return None
    # a generic intertwiner is invertible when a and b are equivalent; its
    # polar factor is then a unitary intertwiner (T*T commutes with a)
    c = np.random.default_rng(0).standard_normal(null.shape[1])
    T = (null @ c).reshape(n, n)
    u, sv, vh = np.linalg.svd(T)
    if sv[-1] <= 1e-8 * max(sv[0], 1e-300):
        return None
    T = u @ vh
    if max(np.max(np.abs(T @ am @ T.conj().T - bm)) for am, bm in zip(a.mats, b.mats)) > 1e-6 * scale:
        return None
    return T


def decompose_irreducible(x: NcPoint, tol: Tolerances = DEFAULT_TOL, seed: int = 0) -> list:
    """Irreducible summands of x grouped by unitary equivalence.

    Returns Components; every embedding V satisfies V* x V = component point,
    and the embeddings of all components together form a unitary.
    """
    rng = np.random.default_rng(seed)
    leaves = []
    _split(x, np.eye(x.level, dtype=complex), rng, tol, leaves)
    comps: list[Component] = []
    for z, V in leaves:
        for comp in comps:
            T = intertwiner(z, comp.point, tol)
            if T is not None:
                # V T* carries the class representative exactly
                comp.embeddings.append(V @ T.conj().T)
                comp.multiplicity += 1
                break
        else:
            comps.append(Component(z, [V], 1))
    return comps


@dataclass
class NcMeasure:
    atoms: list                 # [(NcPoint, weight)] with weight of shape (level, n)
    target_level: int
    flags: list = field(default_factory=list)

    def __post_init__(self):
        for pt, w in self.atoms:
            if w.shape != (pt.level, self.target_level):
                raise ValueError("atom weight must be (atom level) x (target level)")

    def weight_sum(self) -> np.ndarray:
        return sum(w.conj().T @ w for _, w in self.atoms)

    def check(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return np.max(np.abs(self.weight_sum() - np.eye(self.target_level))) <= tol.eps_eq * 10

    def to_dict(self):
        from .io import mat_to_json, point_to_json
        return {
            "target_level": self.target_level,
            "atoms": [{"point": point_to_json(p), "weight": mat_to_json(w),
                       **({"flags": self.flags[i]} if i < len(self.flags) else {})}
                      for i, (p, w) in enumerate(self.atoms)],
        }


def integrate(m: NcMeasure, f, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    if not m.check(tol):
        raise ValueError("atom weights do not resolve the identity")
    n = m.target_level
    out = np.zeros((n, n), dtype=complex)
    for pt, w in m.atoms:
        out += w.conj().T @ f.eval(pt) @ w
    return out


@dataclass
class DecompositionReport:
    measure: NcMeasure
    all_atoms_irreducible: bool
    all_atoms_maximal: bool
    reproduces_input: bool
    dilation_steps: int = 0

    capped = False

    @property
    def supported_on_extreme(self) -> bool:
        return self.all_atoms_irreducible and self.all_atoms_maximal

    def to_dict(self):
        return {
            "measure": self.measure.to_dict(),
            "all_atoms_irreducible": bool(self.all_atoms_irreducible),
            "all_atoms_maximal": bool(self.all_atoms_maximal),
            "supported_on_extreme": bool(self.supported_on_extreme),
            "reproduces_input": bool(self.reproduces_input),
            "dilation_steps": self.dilation_steps,
        }


def _agrees(measure: NcMeasure, mu, degree: int, tol: Tolerances) -> bool:
    """Does the measure reproduce mu on every word of length <= degree?"""
    from .moments import moment_data, word_value
    from .ncfunctions import words_up_to
    words = words_up_to(mu.d, degree)
    target = moment_data(mu, words)
    n = measure.target_level
    for word in words:
        acc = np.zeros((n, n), dtype=complex)
        for pt, w in measure.atoms:
            acc += w.conj().T @ word_value(pt, word) @ w
        if np.max(np.abs(acc - target[word])) > 1e3 * tol.eps_eq:
            return False
    return True


def represent_on_extreme(K, mu, max_steps: int = 8, tol: Tolerances = DEFAULT_TOL, seed: int = 0):
    """Nc measure on irreducible maximal atoms representing the barycenter of mu.

    The Stinespring point of mu is dilated to a maximal point and split into
    irreducible summands.  The measure integrates affine functions exactly as
    mu does; it reproduces mu on every word when mu's point is already maximal.
    """
    from .dilation import Capped, classify_point, dilate_to_maximal
    from .moments import minimal_rep

    base = minimal_rep(mu, tol)
    res = dilate_to_maximal(K, base.point, max_steps, tol)
    if isinstance(res, Capped):
        return res
    z, E = res.point, res.embedding
    lift = E @ base.isometry
    atoms, flags = [], []
    irr, mx = True, True
    for comp in decompose_irreducible(z, tol, seed):
        rep = classify_point(K, comp.point, tol)
        for V in comp.embeddings:
            w = V.conj().T @ lift
            if np.linalg.norm(w) <= 1e-12:
                continue
            atoms.append((comp.point, w))
            flags.append({"irreducible": rep.irreducible, "maximal": rep.maximal, "nc_extreme": rep.nc_extreme})
        irr = irr and rep.irreducible
        mx = mx and rep.maximal
    measure = NcMeasure(atoms, mu.target_level, flags)
    return DecompositionReport(measure, irr, mx, _agrees(measure, mu, 4, tol), res.steps)
