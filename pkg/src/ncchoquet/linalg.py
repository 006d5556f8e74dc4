"""Dense complex matrix kernel.

Every decision here is spectral and tolerance based; nothing compares floats
bitwise.  Rank and kernel cutoffs are relative to the largest singular value.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

EPS_SYM = 1e-8


@dataclass(frozen=True)
class Tolerances:
    eps_psd: float = 1e-8
    eps_rank: float = 1e-8
    eps_eq: float = 1e-8
    eps_sdp: float = 1e-7

    def __post_init__(self):
        for name in ("eps_psd", "eps_rank", "eps_eq", "eps_sdp"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be a finite number >= 0, got {value}")

    def with_overrides(self, **kw) -> "Tolerances":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


DEFAULT_TOL = Tolerances()


class NumericalFailure(ArithmeticError):
    """An SDP or factorization did not reach a usable answer."""


def as_cmat(a) -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def hermitian(m, eps_sym: float = EPS_SYM) -> np.ndarray:
    """Return (m + m*)/2, rejecting inputs further than eps_sym from Hermitian."""
    m = as_cmat(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"Hermitian matrix must be square, got {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if np.max(np.abs(m - m.conj().T), initial=0.0) > eps_sym * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return (m + m.conj().T) / 2


def herm_part(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def is_hermitian(m, eps: float = EPS_SYM) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= eps * scale)


def kron(a, b) -> np.ndarray:
    return np.kron(as_cmat(a), as_cmat(b))


def lambda_min(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(herm_part(np.asarray(m, dtype=complex)))[0])


def lambda_max(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(herm_part(np.asarray(m, dtype=complex)))[-1])


def is_psd(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    h = hermitian(m)
    return lambda_min(h) >= -tol.eps_psd


def is_isometry(v, tol: Tolerances = DEFAULT_TOL) -> bool:
    v = as_cmat(v)
    if v.shape[0] < v.shape[1]:
        return False
    gram = v.conj().T @ v
    return bool(np.max(np.abs(gram - np.eye(v.shape[1])), initial=0.0) <= tol.eps_eq)


def kernel(m: np.ndarray, eps_rank: float, atol: float = 0.0) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical kernel of m.

    Singular values at most eps_rank * sigma_max (or atol, whichever is larger)
    count as zero.
    """
    m = np.asarray(m, dtype=complex)
    ncols = m.shape[1]
    if m.shape[0] == 0 or ncols == 0:
        return np.eye(ncols, dtype=complex)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    smax = s[0] if s.size else 0.0
    cut = max(eps_rank * smax, atol)
    rank = int(np.sum(s > cut)) if smax > 0 else 0
    return vh[rank:].conj().T


def rank(m: np.ndarray, eps_rank: float, atol: float = 0.0) -> int:
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > max(eps_rank * s[0], atol)))


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(herm_part(m))
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def commutant_basis(mats, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Basis of {T : T X = X T and T X* = X* T for every X in mats}.

    Returned as an array of shape (k, n, n).  The stacked linear system acts on
    row-major vec(T): vec(XT - TX) = (X kron I - I kron X^T) vec(T).
    """
    mats = [as_cmat(x) for x in mats]
    if not mats:
        raise ValueError("need at least one matrix")
    n = mats[0].shape[0]
    for x in mats:
        if x.shape != (n, n):
            raise ValueError("commutant needs square matrices of a common size")
    eye = np.eye(n)
    rows = []
    for x in mats:
        for y in (x, x.conj().T):
            rows.append(np.kron(y, eye) - np.kron(eye, y.T))
    system = np.vstack(rows)
    # relative cutoff, floored so that an all-scalar family still has M_n as commutant
    scale = max(1.0, max(float(np.max(np.abs(x), initial=0.0)) for x in mats))
    null = kernel(system, tol.eps_rank, atol=tol.eps_rank * scale)
    return null.T.reshape(-1, n, n)


def commutant_dim(mats, tol: Tolerances = DEFAULT_TOL) -> int:
    return commutant_basis(mats, tol).shape[0]


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    if rows < cols:
        raise ValueError("isometry needs rows >= cols")
    return random_unitary(rows, rng)[:, :cols]


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (z + z.conj().T) / 2


def random_complex(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def orthonormal_columns(v: np.ndarray, eps_rank: float = 1e-10) -> np.ndarray:
    """Orthonormal basis for the column span of v."""
    v = np.asarray(v, dtype=complex)
    if v.size == 0:
        return np.zeros((v.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(v, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((v.shape[0], 0), dtype=complex)
    return u[:, s > eps_rank * s[0]]
