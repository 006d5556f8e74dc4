"""Worked examples: the operator interval, the Cuntz row ball, free semicirculars."""

from __future__ import annotations

import numpy as np

from .dilation import classify_point, dilate_to_maximal, krein_milman_check
from .envelope import convex_envelope
from .linalg import DEFAULT_TOL, Tolerances
from .moments import UcpRep
from .ncfunctions import FreePoly
from .ncset import interval_set, row_ball_set
from .point import NcPoint
from .representation import represent_on_extreme

DEMOS = ("interval", "cuntz", "semicircular")


def _r(v: float, digits: int = 12) -> float:
    # rounded floats keep reports stable across BLAS paths
    return float(round(float(v), digits))


def interval_demo(tol: Tolerances = DEFAULT_TOL, seed: int = 0, relaxation_level: int = 3) -> dict:
    K = interval_set(-1.0, 1.0)
    classes = {}
    for label, x in (("-1", NcPoint.scalar(-1.0)), ("+1", NcPoint.scalar(1.0)),
                     ("0", NcPoint.scalar(0.0)), ("diag(-1,1)", NcPoint([np.diag([-1.0, 1.0])]))):
        rep = classify_point(K, x, tol)
        classes[label] = {k: bool(getattr(rep, k)) for k in
                          ("euclidean_extreme_at_level", "irreducible", "maximal", "nc_extreme")}
    x = FreePoly.letter(1, 0)
    zero = NcPoint.scalar(0.0)
    env = {}
    for label, f in (("x^3", x ** 3), ("-x^2", -(x ** 2)), ("x^2", x ** 2)):
        res = convex_envelope(K, f, zero, relaxation_level, seed=seed, tol=tol)
        env[label] = {"lower": _r(res.lower_scalar), "upper": _r(res.upper_scalar)}
    dec = represent_on_extreme(K, UcpRep.delta(zero), tol=tol, seed=seed)
    atoms = sorted((_r(p.mats[0][0, 0].real), _r(np.real(w.conj().T @ w)[0, 0]))
                   for p, w in dec.measure.atoms)
    km = krein_milman_check(K, NcPoint([np.array([[0.2, 0.3], [0.3, -0.4]])]),
                            [NcPoint.scalar(-1.0), NcPoint.scalar(1.0)], tol)
    return {
        "demo": "interval",
        "fixture": "interval[-1,1]",
        "classify": classes,
        "envelope_at_0": env,
        "midpoint_measure": {"atoms": [{"point": a, "weight": w} for a, w in atoms],
                             "supported_on_extreme": bool(dec.supported_on_extreme)},
        "krein_milman": {"represented": bool(km.represented),
                         "residual_below_1e-9": bool(km.represented and km.residual < 1e-9)},
    }


def cuntz_demo(tol: Tolerances = DEFAULT_TOL, seed: int = 0, max_steps: int = 8) -> dict:
    """Finite-level points of the row ball (the Cuntz operator system's state space)."""
    K = row_ball_set(2)
    h = 1 / np.sqrt(2)
    pts = {
        "center": NcPoint.scalar(0.0, 0.0),
        "interior(0.3,0.2)": NcPoint.scalar(0.3, 0.2),
        "coisometry(1/sqrt2,1/sqrt2)": NcPoint.scalar(h, h),
        "unit(1,0)": NcPoint.scalar(1.0, 0.0),
        "level2 coisometry": NcPoint([np.array([[0, 1], [0, 0]], dtype=complex),
                                      np.array([[0, 0], [1, 0]], dtype=complex)]),
    }
    out = {}
    for label, x in pts.items():
        rep = classify_point(K, x, tol)
        dil = dilate_to_maximal(K, x, max_steps, tol)
        out[label] = {"level": x.level, "nc_extreme": bool(rep.nc_extreme), "maximal": bool(rep.maximal),
                      "irreducible": bool(rep.irreducible), "dilation_capped": bool(dil.capped),
                      "steps": int(dil.steps)}
    return {"demo": "cuntz", "fixture": "row_ball(2)", "max_steps": max_steps, "points": out,
            "finite_extreme_points_found": any(v["nc_extreme"] for v in out.values())}


# --- free semicirculars on a truncated Fock space ----------------------------


def fock_words(N: int):
    words = [()]
    frontier = [()]
    for _ in range(N):
        frontier = [(a,) + w for w in frontier for a in (1, 2)]
        words += frontier
    return words


def creation_operators(N: int):
    """L_i delta_w = delta_{iw}, dropping words pushed past length N."""
    words = fock_words(N)
    pos = {w: k for k, w in enumerate(words)}
    n = len(words)
    ops = []
    for a in (1, 2):
        L = np.zeros((n, n))
        for w in words:
            if len(w) < N:
                L[pos[(a,) + w], pos[w]] = 1.0
        ops.append(L)
    return ops, words


def semicircular_blocks(lam: complex, N: int = 8):
    """pi_lambda on H = C + F and tau_lambda on C + F + F, truncated at length N."""
    (L1, L2), words = creation_operators(N)
    m = L1.shape[0]
    r, s = lam.real, lam.imag
    e0 = np.zeros(m)
    e0[0] = 1.0                                   # delta of the empty word
    h = 1 + m
    S1 = np.zeros((h, h), dtype=complex)
    S1[0, 0] = lam
    S1[1:, 1:] = L1
    S2 = np.zeros((h, h), dtype=complex)
    S2[1:, 0] = e0
    S2[1:, 1:] = L2
    big = 1 + 2 * m
    T1 = np.zeros((big, big), dtype=complex)
    T1[0, 0] = r
    T1[1:h, 1:h] = L1
    T1[h:, 0] = s * e0
    T1[h:, h:] = L1
    T2 = np.zeros((big, big), dtype=complex)
    T2[1:h, 0] = e0
    T2[1:h, 1:h] = L2
    T2[h:, h:] = L2
    return (S1, S2), (T1, T2), words


def semicircular_defect(lam: complex, N: int = 8) -> dict:
    (S1, S2), (T1, T2), words = semicircular_blocks(lam, N)
    h = S1.shape[0]
    safe = np.array([0] + [1 + k for k, w in enumerate(words) if len(w) <= N - 2])
    P = np.eye(T1.shape[0])[:, :h]                # H inside C + F + F
    a = [S1 + S1.conj().T, S2 + S2.conj().T]
    b = [T1 + T1.conj().T, T2 + T2.conj().T]
    psi = lambda t: P.T @ t @ P
    eta = np.zeros(h)
    eta[0] = 1.0
    s = lam.imag
    sub = lambda m: m[np.ix_(safe, safe)]
    diff = sub(psi(b[0] @ b[0]) - a[0] @ a[0])
    target = sub(s ** 2 * np.outer(eta, eta))
    on_s = max(np.linalg.norm(sub(psi(b[i]) - a[i]), 2) for i in range(2))
    # tau_lambda satisfies the Cuntz relations away from the truncation edge
    Q = np.eye(T1.shape[0])[:, np.r_[safe, h + safe[1:] - 1]]
    rel = max(np.linalg.norm(Q.T @ (Ti.conj().T @ Tj - (i == j) * np.eye(T1.shape[0])) @ Q, 2)
              for i, Ti in enumerate((T1, T2)) for j, Tj in enumerate((T1, T2)))
    return {
        "lambda": [_r(lam.real), _r(lam.imag)],
        "r": _r(lam.real), "s": _r(s),
        "defect_norm": _r(np.linalg.norm(diff, 2)),
        "identity_residual": _r(np.linalg.norm(diff - target, 2), 15),
        "agreement_on_generators": _r(on_s, 15),
        "cuntz_relation_residual": _r(rel, 15),
    }


def semicircular_demo(N: int = 8, lambdas=None) -> dict:
    if lambdas is None:
        lambdas = {"i": 1j, "exp(i pi/3)": np.exp(1j * np.pi / 3), "+1": 1.0 + 0j, "-1": -1.0 + 0j}
    out = {k: semicircular_defect(complex(v), N) for k, v in lambdas.items()}
    return {"demo": "semicircular", "fixture": "fock_truncation", "N": N, "safe_max_word_length": N - 2,
            "hilbert_dimension": 2 ** (N + 1), "cases": out}


def demo(name: str, tol: Tolerances = DEFAULT_TOL, seed: int = 0, **kw) -> dict:
    if name == "interval":
        return interval_demo(tol, seed, **kw)
    if name == "cuntz":
        return cuntz_demo(tol, seed, **kw)
    if name == "semicircular":
        return semicircular_demo(**kw)
    raise ValueError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
