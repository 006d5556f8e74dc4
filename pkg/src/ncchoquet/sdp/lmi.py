"""A small modeling layer: complex affine matrix expressions in real scalars.

Every decision variable is a real scalar.  Complex and Hermitian matrix
variables are built from several of them.  A model collects Hermitian
PSD constraints, linear equalities, and componentwise nonnegativity, then
solves

    maximize  c . v + c0   subject to   F_k(v) >= 0,  E v = e,  g(v) >= 0.

Equalities are eliminated through an SVD null space.  The remaining LMI is
handed to the interior point core as the dual of a standard-form SDP, with
complex blocks embedded as real symmetric blocks of twice the size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sps

from .ipm import (DUAL_INFEASIBLE, NUMERICAL_FAILURE, OPTIMAL, PRIMAL_INFEASIBLE,
                  ConeProblem, IpmSettings, ipm_solve)

OPT = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"
FAILURE = "NumericalFailure"


def _as2d(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return a.reshape(1, 1)
    if a.ndim == 1:
        return a.reshape(-1, 1)
    return a


class Affine:
    """const + sum_k v[idx[k]] * coef[k], a (rows, cols) complex matrix."""

    __array_priority__ = 100

    def __init__(self, const, idx=None, coef=None):
        self.const = _as2d(const)
        r, c = self.const.shape
        if idx is None:
            self.idx = np.zeros(0, dtype=np.int64)
            self.coef = np.zeros((0, r, c), dtype=complex)
        else:
            self.idx = np.asarray(idx, dtype=np.int64)
            self.coef = np.asarray(coef, dtype=complex).reshape(len(self.idx), r, c)

    @property
    def shape(self):
        return self.const.shape

    @staticmethod
    def lift(x) -> "Affine":
        return x if isinstance(x, Affine) else Affine(x)

    # --- arithmetic -------------------------------------------------------
    def _combine(self, other: "Affine", sign: float) -> "Affine":
        other = Affine.lift(other)
        const = self.const + sign * other.const
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        if other.idx.size == 0:
            return Affine(const, self.idx, self.coef)
        if self.idx.size == 0:
            return Affine(const, other.idx, sign * other.coef)
        idx = np.union1d(self.idx, other.idx)
        coef = np.zeros((idx.size,) + const.shape, dtype=complex)
        coef[np.searchsorted(idx, self.idx)] += self.coef
        coef[np.searchsorted(idx, other.idx)] += sign * other.coef
        return Affine(const, idx, coef)

    def __add__(self, other):
        other = _broadcast(other, self.shape)
        return self._combine(other, 1.0)

    __radd__ = __add__

    def __sub__(self, other):
        other = _broadcast(other, self.shape)
        return self._combine(other, -1.0)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Affine(-self.const, self.idx, -self.coef)

    def __mul__(self, s):
        if isinstance(s, Affine) or np.ndim(s) != 0:
            raise TypeError("Affine supports only scalar multiplication; use @ for products")
        return Affine(self.const * s, self.idx, self.coef * s)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (1.0 / s)

    def __matmul__(self, m):
        if isinstance(m, Affine):
            raise TypeError("product of two affine expressions is not affine")
        m = _as2d(m)
        return Affine(self.const @ m, self.idx, self.coef @ m)

    def __rmatmul__(self, m):
        m = _as2d(m)
        return Affine(m @ self.const, self.idx, np.einsum("ab,kbc->kac", m, self.coef))

    @property
    def H(self):
        return Affine(self.const.conj().T, self.idx, self.coef.conj().transpose(0, 2, 1))

    @property
    def T(self):
        return Affine(self.const.T, self.idx, self.coef.transpose(0, 2, 1))

    def conj(self):
        return Affine(self.const.conj(), self.idx, self.coef.conj())

    @property
    def real(self):
        return Affine(self.const.real, self.idx, self.coef.real)

    @property
    def imag(self):
        return Affine(self.const.imag, self.idx, self.coef.imag)

    def herm(self):
        return (self + self.H) * 0.5

    def __getitem__(self, key):
        if not isinstance(key, tuple):
            key = (key, slice(None))
        r = np.atleast_1d(np.arange(self.shape[0])[key[0]])
        c = np.atleast_1d(np.arange(self.shape[1])[key[1]])
        return Affine(self.const[np.ix_(r, c)], self.idx, self.coef[:, r][:, :, c])

    def map(self, fn, shape=None) -> "Affine":
        """Apply a linear map fn (acting on arrays with a leading batch axis)."""
        const = fn(self.const[None])[0]
        coef = fn(self.coef) if self.idx.size else np.zeros((0,) + const.shape, dtype=complex)
        return Affine(const, self.idx, coef)

    def trace(self):
        return Affine(np.trace(self.const), self.idx,
                      np.trace(self.coef, axis1=1, axis2=2).reshape(-1, 1, 1))

    def sum(self):
        return Affine(self.const.sum(), self.idx, self.coef.sum(axis=(1, 2)).reshape(-1, 1, 1))

    def reshape(self, r, c):
        return Affine(self.const.reshape(r, c), self.idx, self.coef.reshape(-1, r, c))

    def vec(self):
        r, c = self.shape
        return self.reshape(r * c, 1)

    def value(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if self.idx.size == 0:
            return self.const.copy()
        return self.const + np.tensordot(v[self.idx], self.coef, axes=1)

    def __repr__(self):
        return f"Affine(shape={self.shape}, nvars={self.idx.size})"


def _broadcast(other, shape):
    if isinstance(other, Affine):
        return other
    a = np.asarray(other, dtype=complex)
    if a.ndim == 0:
        return Affine(np.full(shape, complex(a)))
    return Affine(a)


def kron(a, b) -> Affine:
    """Kronecker product with one constant factor."""
    if isinstance(a, Affine) and isinstance(b, Affine):
        raise TypeError("kron of two affine expressions is not affine")
    if isinstance(b, Affine):
        a = _as2d(a)
        p, q = a.shape
        r, c = b.shape
        coef = np.einsum("ab,kij->kaibj", a, b.coef).reshape(-1, p * r, q * c)
        return Affine(np.kron(a, b.const), b.idx, coef)
    if isinstance(a, Affine):
        b = _as2d(b)
        p, q = a.shape
        r, c = b.shape
        coef = np.einsum("kab,ij->kaibj", a.coef, b).reshape(-1, p * r, q * c)
        return Affine(np.kron(a.const, b), a.idx, coef)
    return Affine(np.kron(_as2d(a), _as2d(b)))


def bmat(blocks) -> Affine:
    """Block matrix; entries may be Affine, arrays, or None (zero)."""
    nr, nc = len(blocks), len(blocks[0])
    heights = [None] * nr
    widths = [None] * nc
    for i, row in enumerate(blocks):
        if len(row) != nc:
            raise ValueError("ragged block matrix")
        for j, blk in enumerate(row):
            if blk is None:
                continue
            shp = blk.shape if isinstance(blk, Affine) else _as2d(blk).shape
            if heights[i] is None:
                heights[i] = shp[0]
            if widths[j] is None:
                widths[j] = shp[1]
            if heights[i] != shp[0] or widths[j] != shp[1]:
                raise ValueError("inconsistent block sizes")
    if any(h is None for h in heights) or any(w is None for w in widths):
        raise ValueError("cannot infer the size of an all-zero block row or column")
    R, C = sum(heights), sum(widths)
    ro = np.concatenate([[0], np.cumsum(heights)])
    co = np.concatenate([[0], np.cumsum(widths)])
    parts = [b for row in blocks for b in row if isinstance(b, Affine)]
    idx = np.unique(np.concatenate([p.idx for p in parts])) if parts else np.zeros(0, dtype=np.int64)
    const = np.zeros((R, C), dtype=complex)
    coef = np.zeros((idx.size, R, C), dtype=complex)
    for i, row in enumerate(blocks):
        for j, blk in enumerate(row):
            if blk is None:
                continue
            sl = (slice(ro[i], ro[i + 1]), slice(co[j], co[j + 1]))
            if isinstance(blk, Affine):
                const[sl] = blk.const
                if blk.idx.size:
                    coef[(np.searchsorted(idx, blk.idx),) + sl] = blk.coef
            else:
                const[sl] = _as2d(blk)
    return Affine(const, idx, coef)


def asum(exprs, shape=None) -> Affine:
    exprs = list(exprs)
    if not exprs:
        if shape is None:
            raise ValueError("empty sum needs a shape")
        return Affine(np.zeros(shape))
    idx = np.unique(np.concatenate([Affine.lift(e).idx for e in exprs]))
    out_const = np.zeros(Affine.lift(exprs[0]).shape, dtype=complex)
    coef = np.zeros((idx.size,) + out_const.shape, dtype=complex)
    for e in exprs:
        e = Affine.lift(e)
        out_const = out_const + e.const
        if e.idx.size:
            np.add.at(coef, np.searchsorted(idx, e.idx), e.coef)
    return Affine(out_const, idx, coef)


@dataclass
class LmiResult:
    status: str
    value: float = float("nan")
    v: np.ndarray | None = None
    duals: list = field(default_factory=list)       # one Hermitian multiplier per PSD constraint
    lp_duals: np.ndarray | None = None
    iterations: int = 0
    gap: float = float("nan")
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == OPT

    def __call__(self, expr) -> np.ndarray:
        if self.v is None:
            raise ValueError(f"no primal values available (status {self.status})")
        return Affine.lift(expr).value(self.v)


def _realify(h: np.ndarray) -> np.ndarray:
    """Real symmetric embedding of Hermitian matrices along the last two axes."""
    p, q = h.real, h.imag
    top = np.concatenate([p, -q], axis=-1)
    bot = np.concatenate([q, p], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def _unrealify(x: np.ndarray) -> np.ndarray:
    n = x.shape[0] // 2
    return (x[:n, :n] + x[n:, n:]) + 1j * (x[n:, :n] - x[:n, n:])


class Lmi:
    """Model builder.  All variables are real scalars indexed 0..nvars-1."""

    def __init__(self):
        self.nvars = 0
        self._psd: list[Affine] = []
        self._eq: list[Affine] = []
        self._ge: list[Affine] = []
        self._obj: Affine | None = None
        self._sense = 1.0

    # --- variables --------------------------------------------------------
    def _new(self, k: int) -> np.ndarray:
        idx = np.arange(self.nvars, self.nvars + k)
        self.nvars += k
        return idx

    def real(self, shape=(1, 1)) -> Affine:
        if np.ndim(shape) == 0:
            shape = (int(shape), 1)
        r, c = shape
        idx = self._new(r * c)
        coef = np.zeros((r * c, r, c), dtype=complex)
        coef[np.arange(r * c), np.repeat(np.arange(r), c), np.tile(np.arange(c), r)] = 1.0
        return Affine(np.zeros((r, c)), idx, coef)

    def scalar(self) -> Affine:
        return self.real((1, 1))

    def complex(self, shape) -> Affine:
        re = self.real(shape)
        im = self.real(shape)
        return re + 1j * im

    def symmetric(self, n: int) -> Affine:
        iu = np.triu_indices(n)
        k = len(iu[0])
        idx = self._new(k)
        coef = np.zeros((k, n, n), dtype=complex)
        coef[np.arange(k), iu[0], iu[1]] = 1.0
        coef[np.arange(k), iu[1], iu[0]] = 1.0
        return Affine(np.zeros((n, n)), idx, coef)

    def hermitian(self, n: int) -> Affine:
        iu = np.triu_indices(n, 1)
        k = len(iu[0])
        idx = self._new(n + 2 * k)
        coef = np.zeros((n + 2 * k, n, n), dtype=complex)
        coef[np.arange(n), np.arange(n), np.arange(n)] = 1.0
        a = np.arange(n, n + k)
        coef[a, iu[0], iu[1]] = 1.0
        coef[a, iu[1], iu[0]] = 1.0
        b = np.arange(n + k, n + 2 * k)
        coef[b, iu[0], iu[1]] = 1j
        coef[b, iu[1], iu[0]] = -1j
        return Affine(np.zeros((n, n)), idx, coef)

    # --- constraints --------------------------------------------------------
    def add_psd(self, expr: Affine, check: float = 1e-10):
        expr = Affine.lift(expr)
        r, c = expr.shape
        if r != c:
            raise ValueError("PSD constraint needs a square expression")
        err = np.max(np.abs(expr.const - expr.const.conj().T), initial=0.0)
        if expr.idx.size:
            err = max(err, np.max(np.abs(expr.coef - expr.coef.conj().transpose(0, 2, 1)), initial=0.0))
        if err > check * max(1.0, np.max(np.abs(expr.coef), initial=0.0), np.max(np.abs(expr.const), initial=0.0)):
            raise ValueError("PSD constraint expression is not Hermitian")
        self._psd.append(expr.herm())
        return len(self._psd) - 1

    def add_eq(self, lhs, rhs=0.0):
        """Entrywise lhs == rhs (real and imaginary parts)."""
        lhs = Affine.lift(lhs)
        self._eq.append(lhs - _broadcast(rhs, lhs.shape))

    def add_ge(self, lhs, rhs=0.0):
        """Entrywise real inequality lhs >= rhs."""
        lhs = Affine.lift(lhs)
        e = lhs - _broadcast(rhs, lhs.shape)
        if np.max(np.abs(e.const.imag), initial=0.0) > 0 or np.max(np.abs(e.coef.imag), initial=0.0) > 0:
            raise ValueError("inequalities need real expressions")
        self._ge.append(e)

    def maximize(self, expr):
        expr = Affine.lift(expr)
        if expr.shape != (1, 1):
            raise ValueError("objective must be scalar")
        self._obj, self._sense = expr.real, 1.0

    def minimize(self, expr):
        expr = Affine.lift(expr)
        if expr.shape != (1, 1):
            raise ValueError("objective must be scalar")
        self._obj, self._sense = expr.real, -1.0

    # --- solve --------------------------------------------------------------
    def _rows(self, exprs):
        """Sparse (entries, nvars) coefficient matrix and offsets of stacked expressions."""
        data, ri, ci = [], [], []
        offs = []
        at = 0
        for e in exprs:
            r, c = e.shape
            k = r * c
            offs.append(e.const.reshape(-1))
            if e.idx.size:
                flat = e.coef.reshape(e.idx.size, k)
                nz_l, nz_e = np.nonzero(flat)
                data.append(flat[nz_l, nz_e])
                ri.append(at + nz_e)
                ci.append(e.idx[nz_l])
            at += k
        if data:
            a = sps.csr_matrix((np.concatenate(data), (np.concatenate(ri), np.concatenate(ci))),
                               shape=(at, self.nvars))
        else:
            a = sps.csr_matrix((at, self.nvars), dtype=complex)
        off = np.concatenate(offs) if offs else np.zeros(0, dtype=complex)
        return a, off

    def _eliminate(self):
        """Parametrize {v : equalities} as v = v0 + N z with N sparse.

        Rows touching a single unfixed variable are applied by substitution
        (repeatedly); the rest are resolved by a dense SVD on just the
        variables they touch.  Returns (v0, N) or None if inconsistent.
        """
        nv = self.nvars
        if not self._eq:
            return np.zeros(nv), sps.identity(nv, format="csr")
        a, off = self._rows(self._eq)
        E = sps.vstack([a.real, a.imag]).tocsr()
        e = -np.concatenate([off.real, off.imag])
        E.eliminate_zeros()
        scale = max(1.0, float(np.max(np.abs(e), initial=0.0)))
        fixed = np.zeros(nv, dtype=bool)
        v0 = np.zeros(nv)
        rhs = e.copy()
        alive = np.ones(E.shape[0], dtype=bool)
        Ec = E.tocsc()
        counts = np.diff(E.indptr).astype(np.int64)
        queue = list(np.nonzero(counts == 1)[0])
        while queue:
            r = queue.pop()
            if not alive[r] or counts[r] != 1:
                continue
            cols = E.indices[E.indptr[r]:E.indptr[r + 1]]
            vals = E.data[E.indptr[r]:E.indptr[r + 1]]
            live = ~fixed[cols]
            j, coef = cols[live][0], vals[live][0]
            alive[r] = False
            val = rhs[r] / coef
            fixed[j] = True
            v0[j] = val
            # substitute into every other row containing j
            rows_j = Ec.indices[Ec.indptr[j]:Ec.indptr[j + 1]]
            vals_j = Ec.data[Ec.indptr[j]:Ec.indptr[j + 1]]
            for rr, vv in zip(rows_j, vals_j):
                if rr == r or not alive[rr]:
                    continue
                rhs[rr] -= vv * val
                counts[rr] -= 1
                if counts[rr] == 1:
                    queue.append(rr)
                elif counts[rr] == 0:
                    alive[rr] = False
                    if abs(rhs[rr]) > 1e-9 * scale:
                        return None
        for r in np.nonzero(alive & (counts == 0))[0]:
            if abs(rhs[r]) > 1e-9 * scale:
                return None
        rest = np.nonzero(alive & (counts > 0))[0]
        free = ~fixed
        if rest.size:
            sub = E[rest][:, np.nonzero(free)[0]]
            touched_local = np.unique(sub.indices)
            S = np.nonzero(free)[0][touched_local]
            dense = E[rest][:, S].toarray()
            u, sv, vt = np.linalg.svd(dense, full_matrices=True)
            smax = sv[0] if sv.size else 0.0
            rk = int(np.sum(sv > 1e-11 * max(smax, 1e-300))) if smax > 0 else 0
            part = vt[:rk].T @ ((u[:, :rk].T @ rhs[rest]) / sv[:rk])
            if np.linalg.norm(dense @ part - rhs[rest]) > 1e-9 * scale:
                return None
            v0[S] = part
            NS = vt[rk:].T
        else:
            S = np.zeros(0, dtype=np.int64)
            NS = np.zeros((0, 0))
        plain = np.nonzero(free)[0]
        plain = np.setdiff1d(plain, S)
        nz = plain.size + NS.shape[1]
        rows = [plain]
        cols = [np.arange(plain.size)]
        vals = [np.ones(plain.size)]
        if NS.size:
            rr, cc = np.nonzero(NS)
            rows.append(S[rr])
            cols.append(plain.size + cc)
            vals.append(NS[rr, cc])
        N = sps.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                           shape=(nv, nz))
        return v0, N

    def solve(self, settings: IpmSettings | None = None) -> LmiResult:
        nv = self.nvars
        obj = np.zeros(nv)
        obj0 = 0.0
        if self._obj is not None:
            obj0 = float(self._obj.const.real[0, 0])
            if self._obj.idx.size:
                np.add.at(obj, self._obj.idx, self._obj.coef.real.reshape(-1))
            obj = obj * self._sense
            obj0 *= self._sense

        elim = self._eliminate()
        if elim is None:
            return LmiResult(INFEASIBLE, info={"reason": "inconsistent equalities"})
        v0, N = elim
        nz = N.shape[1]
        Nt = N.T.tocsr()

        # conic blocks as (kind, dim, F0, G) with G sparse (nz, dim*dim) or (nz, dim)
        blocks = []
        for ex in self._psd:
            n = ex.shape[0]
            a, off = self._rows([ex])
            F0 = (off + a @ v0).reshape(n, n)
            G = (Nt @ a.T).tocsr() if nz else sps.csr_matrix((0, n * n), dtype=complex)
            blocks.append(("h", n, F0, G))
        if self._ge:
            a, off = self._rows(self._ge)
            F0 = (off + a @ v0).real
            G = (Nt @ a.T).real.tocsr() if nz else sps.csr_matrix((0, F0.size))
            blocks.append(("l", F0.size, F0, G))

        cz = Nt @ obj if nz else np.zeros(0)
        const_obj = obj0 + float(obj @ v0)

        # variables that no cone sees: unbounded if the objective uses them, else dropped
        used = np.zeros(nz, dtype=bool)
        for _, _, _, G in blocks:
            G = G.tocsr()
            used |= np.diff(G.indptr) > 0
        keep = np.nonzero(used)[0]
        if np.any(np.abs(cz[~used]) > 1e-12 * max(1.0, float(np.max(np.abs(cz), initial=0.0)))):
            sub = [(k, n, F0, G[keep]) for k, n, F0, G in blocks]
            feas = _feasible_only(sub, settings)
            return LmiResult(UNBOUNDED if feas == OPT else feas,
                             info={"reason": "objective along an unconstrained variable"})
        blocks = [(k, n, F0, G[keep]) for k, n, F0, G in blocks]
        w_obj = cz[keep]

        if not blocks:
            return LmiResult(OPT, self._sense * const_obj, v0.copy(), [], None, 0, 0.0)
        if keep.size == 0:
            # nothing left to choose: the cones are constant
            for k, n, F0, _ in blocks:
                scale = max(1.0, float(np.max(np.abs(F0), initial=0.0)))
                low = float(np.min(F0.real)) if k == "l" else float(np.linalg.eigvalsh((F0 + F0.conj().T) / 2)[0])
                if low < -1e-9 * scale:
                    return LmiResult(INFEASIBLE, info={"reason": "constant cone violated", "margin": low})
            return LmiResult(OPT, self._sense * const_obj, v0.copy(), [], None, 0, 0.0,
                             info={"reason": "all variables fixed"})

        cone, real_flags = _to_cone(blocks, w_obj)
        res = ipm_solve(cone, settings)
        info = dict(res.info)
        if res.status == OPTIMAL:
            z = np.zeros(nz)
            z[keep] = res.y
            v = v0 + N @ z
            duals, lp = _duals(blocks, res.X, real_flags)
            val = self._sense * (const_obj + float(w_obj @ res.y))
            return LmiResult(OPT, val, v, duals, lp, res.iterations, res.gap, info)
        if res.status == DUAL_INFEASIBLE:
            duals, lp = _duals(blocks, res.X, real_flags)
            return LmiResult(INFEASIBLE, duals=duals, lp_duals=lp, iterations=res.iterations, info=info)
        if res.status == PRIMAL_INFEASIBLE:
            return LmiResult(UNBOUNDED, iterations=res.iterations, info=info)
        return LmiResult(FAILURE, iterations=res.iterations, gap=res.gap, info=info)


def _feasible_only(blocks, settings=None):
    if not blocks:
        return OPT
    m = blocks[0][3].shape[0]
    cone, _ = _to_cone(blocks, np.zeros(m))
    res = ipm_solve(cone, settings)
    return {OPTIMAL: OPT, DUAL_INFEASIBLE: INFEASIBLE}.get(res.status, FAILURE)


def _realify_rows(G: sps.csr_matrix, n: int) -> sps.csr_matrix:
    """Row-wise real embedding of vec'd Hermitian matrices: vec(R(H)) for each row vec(H)."""
    G = G.tocoo()
    a, b = np.divmod(G.col, n)
    re, im = G.data.real, G.data.imag
    m2 = 2 * n
    rows = np.concatenate([G.row] * 4)
    cols = np.concatenate([a * m2 + b, (a + n) * m2 + (b + n), (a + n) * m2 + b, a * m2 + (b + n)])
    vals = np.concatenate([re, re, im, -im])
    out = sps.csr_matrix((vals, (rows, cols)), shape=(G.shape[0], m2 * m2))
    out.eliminate_zeros()
    return out


def _to_cone(blocks, b):
    kinds, dims, A, C, real_flags = [], [], [], [], []
    for k, n, F0, G in blocks:
        G = sps.csr_matrix(G)
        if k == "l":
            kinds.append("l")
            dims.append(n)
            C.append(np.asarray(F0, dtype=float))
            A.append(-G.real.tocsr())
            real_flags.append(True)
            continue
        is_real = (np.max(np.abs(F0.imag), initial=0.0) == 0
                   and (G.nnz == 0 or np.max(np.abs(G.data.imag), initial=0.0) == 0))
        real_flags.append(is_real)
        kinds.append("s")
        if is_real:
            dims.append(n)
            C.append(F0.real.copy())
            A.append(-G.real.tocsr())
        else:
            dims.append(2 * n)
            C.append(_realify(F0))
            A.append(-_realify_rows(G, n))
    return ConeProblem(kinds, dims, A, C, np.asarray(b, dtype=float)), real_flags


def _duals(blocks, X, real_flags):
    duals, lp = [], None
    for (k, n, _, _), x, rf in zip(blocks, X, real_flags):
        if k == "l":
            lp = np.asarray(x)
        elif rf:
            duals.append(x.astype(complex))
        else:
            duals.append(_unrealify(x))
    return duals, lp
