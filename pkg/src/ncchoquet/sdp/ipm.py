"""Homogeneous self-dual interior point method for small dense conic programs.

Solves the real standard form

    minimize  <C, X>   subject to  <A_i, X> = b_i  (i < m),   X in K,

where K is a product of symmetric PSD cones ('s' blocks) and nonnegative
orthants ('l' blocks), together with its dual

    maximize  b.y      subject to  sum_i y_i A_i + Z = C,     Z in K.

The simplified homogeneous self-dual embedding is followed along the central
path with HKM search directions and a Mehrotra predictor-corrector.  The start
point is the identity (X = Z = I, y = 0, tau = kappa = 1), so runs are fully
deterministic.  Infeasibility is reported through Farkas-type rays.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sps

OPTIMAL = "optimal"
PRIMAL_INFEASIBLE = "primal_infeasible"
DUAL_INFEASIBLE = "dual_infeasible"
NUMERICAL_FAILURE = "numerical_failure"


@dataclass
class ConeProblem:
    kinds: list          # 's' or 'l' per block
    dims: list
    A: list              # per block: (m, n*n) row-major vec for 's', (m, n) for 'l'; dense or sparse
    C: list              # per block: (n, n) or (n,)
    b: np.ndarray

    @property
    def m(self) -> int:
        return int(self.b.shape[0])


@dataclass
class ConeResult:
    status: str
    X: list
    y: np.ndarray
    Z: list
    primal_objective: float = float("nan")
    dual_objective: float = float("nan")
    gap: float = float("nan")
    primal_residual: float = float("nan")
    dual_residual: float = float("nan")
    iterations: int = 0
    info: dict = field(default_factory=dict)


@dataclass
class IpmSettings:
    max_iter: int = 200
    feas_tol: float = 1e-9
    gap_tol: float = 1e-9
    inf_tol: float = 1e-9
    # looser thresholds accepted when the method stalls before max_iter
    stall_feas_tol: float = 1e-7
    stall_gap_tol: float = 1e-7
    step_fraction: float = 0.98


def _vec_blocks(prob):
    out = []
    for kind, a, n in zip(prob.kinds, prob.A, prob.dims):
        width = n * n if kind == "s" else n
        if sps.issparse(a):
            out.append(sps.csr_matrix(a).reshape(prob.m, width).tocsr())
        else:
            out.append(np.asarray(a, dtype=float).reshape(prob.m, width))
    return out


def _dense(a):
    return a.toarray() if sps.issparse(a) else np.asarray(a)


class _Workspace:
    def __init__(self, prob: ConeProblem):
        self.p = prob
        self.Avec = _vec_blocks(prob)

    def apply_A(self, X):
        out = np.zeros(self.p.m)
        for av, x in zip(self.Avec, X):
            out += np.asarray(av @ x.reshape(-1)).reshape(-1)
        return out

    def apply_AT(self, y):
        out = []
        for kind, av, n in zip(self.p.kinds, self.Avec, self.p.dims):
            v = np.asarray(av.T @ y).reshape(-1)
            out.append(v.reshape(n, n) if kind == "s" else v)
        return out


def _inner(X, Y):
    return float(sum(np.vdot(x, y).real for x, y in zip(X, Y)))


def _norm(Xs):
    return float(np.sqrt(sum(np.vdot(x, x).real for x in Xs)))


def _sym(a):
    return (a + a.T) / 2


def _max_step(kind, x, dx, chol=None):
    if kind == "l":
        neg = dx < 0
        if not np.any(neg):
            return np.inf
        return float(np.min(-x[neg] / dx[neg]))
    lt = sla.solve_triangular(chol, dx, lower=True)
    w = sla.solve_triangular(chol, lt.T, lower=True)
    lam = np.linalg.eigvalsh(_sym(w))[0]
    return np.inf if lam >= 0 else float(-1.0 / lam)


def _cholesky(kind, x):
    if kind == "l":
        return None
    return np.linalg.cholesky(x)


def _reduce_rows(prob: ConeProblem, tol: float = 1e-12):
    """Drop linearly dependent constraint rows.

    Returns (reduced problem, map U with y = U y_reduced) or a primal
    infeasibility ray y when b is not in the range of A.
    """
    m = prob.m
    if m == 0:
        return prob, None, None
    blocks = _vec_blocks(prob)
    gram = np.zeros((m, m))
    for av in blocks:
        gram += _dense(av @ av.T)
    w, v = np.linalg.eigh((gram + gram.T) / 2)
    top = float(w[-1]) if w.size else 0.0
    keep = w > tol * max(top, 1e-300)
    if np.all(keep):
        return prob, None, None
    u = v[:, keep]
    resid = prob.b - u @ (u.T @ prob.b)
    if np.linalg.norm(resid) > 1e-9 * max(1.0, float(np.linalg.norm(prob.b))):
        return None, None, resid
    A = [_dense(av.T @ u).T for av in blocks]
    return ConeProblem(list(prob.kinds), list(prob.dims), A, list(prob.C), u.T @ prob.b), u, None


def _schur_solver(M):
    m = M.shape[0]
    if m == 0:
        return lambda r: np.zeros(0)
    try:
        fac = sla.cho_factor(M, lower=True, check_finite=False)
        return lambda r: sla.cho_solve(fac, r, check_finite=False)
    except (np.linalg.LinAlgError, ValueError):
        pass
    reg = M + np.eye(m) * (1e-14 * max(1.0, float(np.max(np.abs(np.diag(M))))))
    try:
        lu = sla.lu_factor(reg, check_finite=False)
    except (np.linalg.LinAlgError, ValueError):
        return None
    return lambda r: sla.lu_solve(lu, r, check_finite=False)


def _zero_like(kinds, dims):
    return [np.zeros((n, n)) if k == "s" else np.zeros(n) for k, n in zip(kinds, dims)]


def ipm_solve(prob: ConeProblem, settings: IpmSettings | None = None) -> ConeResult:
    red, u, ray = _reduce_rows(prob)
    if ray is not None:
        y = ray / float(ray @ prob.b)
        return ConeResult(PRIMAL_INFEASIBLE, _zero_like(prob.kinds, prob.dims), y,
                          _zero_like(prob.kinds, prob.dims), float("nan"), float("inf"),
                          info={"dependent_rows": True})
    if u is None:
        return _ipm_solve(prob, settings)
    res = _ipm_solve(red, settings)
    res.y = u @ res.y
    res.info["dependent_rows"] = True
    return res


def _ipm_solve(prob: ConeProblem, settings: IpmSettings | None = None) -> ConeResult:
    s = settings or IpmSettings()
    m = prob.m
    kinds, dims = prob.kinds, prob.dims

    # row equilibration and data scaling; all undone before returning
    row = np.zeros(m)
    vb = _vec_blocks(prob)
    for a in vb:
        row += np.asarray(a.multiply(a).sum(axis=1)).reshape(-1) if sps.issparse(a) else np.sum(a ** 2, axis=1)
    row = np.sqrt(row)
    row[row == 0] = 1.0
    bscale = max(1.0, float(np.max(np.abs(prob.b / row), initial=0.0)))
    cscale = max(1.0, max((float(np.max(np.abs(c), initial=0.0)) for c in prob.C), default=1.0))
    A = [(sps.diags(1.0 / row) @ a).tocsr() if sps.issparse(a) else a / row[:, None] for a in vb]
    b = prob.b / row / bscale
    C = [c / cscale for c in prob.C]
    sp = ConeProblem(list(kinds), list(dims), A, C, b)
    ws = _Workspace(sp)
    Avec = ws.Avec

    nu = sum(dims) + 1
    X = [np.eye(n) if k == "s" else np.ones(n) for k, n in zip(kinds, dims)]
    Z = [np.eye(n) if k == "s" else np.ones(n) for k, n in zip(kinds, dims)]
    y = np.zeros(m)
    tau, kappa = 1.0, 1.0
    normb = float(np.linalg.norm(b))
    normC = _norm(C)

    def unscale(Xs, ys, Zs, t):
        Xo = [x * bscale / t for x in Xs]
        yo = ys * cscale / t / row
        Zo = [z * cscale / t for z in Zs]
        return Xo, yo, Zo

    def result(status, it, pres, dres, gap, pobj, dobj, Xs=None, ys=None, Zs=None, t=None, info=None):
        Xs = X if Xs is None else Xs
        ys = y if ys is None else ys
        Zs = Z if Zs is None else Zs
        t = tau if t is None else t
        if status == OPTIMAL or status == NUMERICAL_FAILURE:
            Xo, yo, Zo = unscale(Xs, ys, Zs, t)
            po, do = pobj * bscale * cscale, dobj * bscale * cscale
        elif status == PRIMAL_INFEASIBLE:
            # ray: y with b.y = 1 and A^T y = -Z <= 0
            by = float(b @ ys)
            Xo, yo, Zo = [np.zeros_like(x) for x in Xs], ys / row / by * bscale, [z / by * bscale for z in Zs]
            po, do = float("nan"), float("inf")
        else:
            # ray: X >= 0 with A X = 0 and <C, X> = -1
            cx = -_inner(C, Xs)
            Xo, yo, Zo = [x / cx * cscale for x in Xs], np.zeros(m), [np.zeros_like(z) for z in Zs]
            po, do = float("-inf"), float("nan")
        return ConeResult(status, Xo, yo, Zo, po, do, gap, pres, dres, it, info or {})

    best = None
    stall = 0
    for it in range(s.max_iter + 1):
        AX = ws.apply_A(X)
        ATy = ws.apply_AT(y)
        rp = AX - b * tau
        rd = [aty + z - c * tau for aty, z, c in zip(ATy, Z, C)]
        cx = _inner(C, X)
        by = float(b @ y)
        rg = cx - by + kappa
        mu = (_inner(X, Z) + tau * kappa) / nu

        pres = float(np.linalg.norm(rp)) / tau / (1 + normb)
        dres = _norm(rd) / tau / (1 + normC)
        pobj, dobj = cx / tau, by / tau
        gap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        if pres <= s.feas_tol and dres <= s.feas_tol and gap <= s.gap_tol:
            return result(OPTIMAL, it, pres, dres, gap, pobj, dobj)
        if best is None or max(pres, dres, gap) < best[0]:
            best = (max(pres, dres, gap), it, pres, dres, gap, pobj, dobj,
                    [x.copy() for x in X], y.copy(), [z.copy() for z in Z], tau)
        if by > 0:
            pinf = _norm([aty + z for aty, z in zip(ATy, Z)]) / by
            if pinf <= s.inf_tol:
                return result(PRIMAL_INFEASIBLE, it, pres, dres, gap, pobj, dobj)
        if cx < 0:
            dinf = float(np.linalg.norm(AX)) / (-cx)
            if dinf <= s.inf_tol:
                return result(DUAL_INFEASIBLE, it, pres, dres, gap, pobj, dobj)
        if it == s.max_iter:
            break

        try:
            chol_X = [_cholesky(k, x) for k, x in zip(kinds, X)]
            chol_Z = [_cholesky(k, z) for k, z in zip(kinds, Z)]
        except np.linalg.LinAlgError:
            break
        Zi = []
        for k, z, lz in zip(kinds, Z, chol_Z):
            if k == "l":
                Zi.append(1.0 / z)
            else:
                Zi.append(sla.cho_solve((lz, True), np.eye(z.shape[0])))
        # Schur complement of the HKM direction
        M = np.zeros((m, m))
        u = np.zeros(m)
        w = 0.0
        for k, av, x, zi, c, n in zip(kinds, Avec, X, Zi, C, dims):
            if k == "l":
                d = x * zi
                M += _dense(av @ (av.multiply(d[None, :]) if sps.issparse(av) else av * d).T)
                u += np.asarray(av @ (x * c * zi)).reshape(-1)
                w += float(np.sum(c * x * c * zi))
            else:
                # rows of av are vec(A_j); A_j X stacked as an (m*n, n) product
                if sps.issparse(av):
                    ax = (av.reshape(m * n, n) @ x).reshape(m, n, n)
                else:
                    ax = av.reshape(m, n, n) @ x
                U = np.matmul(zi, ax).reshape(m, n * n)
                M += _dense(av @ U.T)
                xcz = x @ c @ zi
                u += np.asarray(av @ xcz.reshape(-1)).reshape(-1)
                w += float(np.vdot(c, xcz).real)
        M = (M + M.T) / 2
        msolve = _schur_solver(M)
        if msolve is None:
            break
        q = msolve(u + b)

        def direction(eta, Rc, rtau):
            G = []
            for k, rc, x, rdk, zi in zip(kinds, Rc, X, rd, Zi):
                if k == "l":
                    G.append(rc + x * (eta * rdk) * zi)
                else:
                    G.append(rc + _sym(x @ (eta * rdk) @ zi))
            r1 = -eta * rp - ws.apply_A(G)
            r3 = -eta * rg - _inner(C, G) - rtau / tau
            pvec = msolve(r1)
            den = float((u - b) @ q) - w - kappa / tau
            dtau = (r3 - float((u - b) @ pvec)) / den
            dy = pvec + q * dtau
            ATdy = ws.apply_AT(dy)
            dZ = [-eta * rdk - atd + c * dtau for rdk, atd, c in zip(rd, ATdy, C)]
            dX = []
            for k, rc, x, dz, zi in zip(kinds, Rc, X, dZ, Zi):
                if k == "l":
                    dX.append(rc - x * dz * zi)
                else:
                    dX.append(rc - _sym(x @ dz @ zi))
            dkappa = (rtau - kappa * dtau) / tau
            return dX, dy, dZ, dtau, dkappa

        def step_length(dX, dZ, dtau, dkappa):
            a = np.inf
            for k, x, dx, lx in zip(kinds, X, dX, chol_X):
                a = min(a, _max_step(k, x, dx, lx))
            for k, z, dz, lz in zip(kinds, Z, dZ, chol_Z):
                a = min(a, _max_step(k, z, dz, lz))
            if dtau < 0:
                a = min(a, -tau / dtau)
            if dkappa < 0:
                a = min(a, -kappa / dkappa)
            return a

        # predictor
        Rc_aff = [-x for x in X]
        dXa, dya, dZa, dta, dka = direction(1.0, Rc_aff, -tau * kappa)
        alpha_aff = min(1.0, step_length(dXa, dZa, dta, dka))
        mu_aff = (_inner([x + alpha_aff * dx for x, dx in zip(X, dXa)],
                         [z + alpha_aff * dz for z, dz in zip(Z, dZa)])
                  + (tau + alpha_aff * dta) * (kappa + alpha_aff * dka)) / nu
        sigma = float(np.clip((mu_aff / mu) ** 3, 0.0, 1.0))
        # corrector
        Rc = []
        for k, x, zi, dxa, dza in zip(kinds, X, Zi, dXa, dZa):
            if k == "l":
                Rc.append(sigma * mu * zi - x - dxa * dza * zi)
            else:
                Rc.append(sigma * mu * zi - x - _sym(dxa @ dza @ zi))
        rtau = sigma * mu - tau * kappa - dta * dka
        dX, dy, dZ, dtau, dkappa = direction(1.0 - sigma, Rc, rtau)
        alpha = min(1.0, s.step_fraction * step_length(dX, dZ, dtau, dkappa))
        if not np.isfinite(alpha) or alpha <= 0:
            break

        X = [x + alpha * dx for x, dx in zip(X, dX)]
        Z = [z + alpha * dz for z, dz in zip(Z, dZ)]
        X = [_sym(x) if k == "s" else x for k, x in zip(kinds, X)]
        Z = [_sym(z) if k == "s" else z for k, z in zip(kinds, Z)]
        y = y + alpha * dy
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkappa
        stall = stall + 1 if alpha < 1e-7 else 0
        if stall >= 5:
            break

    # stalled or hit the cap: accept the best iterate only under looser thresholds
    _, bit, pres, dres, gap, pobj, dobj, Xb, yb, Zb, tb = best
    if pres <= s.stall_feas_tol and dres <= s.stall_feas_tol and gap <= s.stall_gap_tol:
        return result(OPTIMAL, bit, pres, dres, gap, pobj, dobj, Xb, yb, Zb, tb, {"stalled": True})
    return result(NUMERICAL_FAILURE, bit, pres, dres, gap, pobj, dobj, Xb, yb, Zb, tb, {"stalled": True})
