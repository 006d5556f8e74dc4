import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncchoquet.sdp import (INFEASIBLE, OPT, UNBOUNDED, Affine, ConeProblem, Lmi, SdpProblem, bmat,
                           ipm_solve, kron, solve, verify_solution)
from ncchoquet.sdp import ipm
from oracles import lmi_max_min_eig

cp = pytest.importorskip("cvxpy")


def _random_sdp(rng, n, m):
    A = rng.standard_normal((m, n, n))
    A = (A + A.transpose(0, 2, 1)) / 2
    X0 = rng.standard_normal((n, n))
    X0 = X0 @ X0.T + 0.1 * np.eye(n)
    b = np.einsum("kij,ij->k", A, X0)
    C = rng.standard_normal((n, n))
    return A, b, C @ C.T


@settings(max_examples=12)
@given(st.integers(0, 100_000))
def test_core_matches_cvxpy(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    m = int(rng.integers(1, n * (n + 1) // 2))
    A, b, C = _random_sdp(rng, n, m)
    r = ipm_solve(ConeProblem(["s"], [n], [A], [C], b))
    X = cp.Variable((n, n), symmetric=True)
    ref = cp.Problem(cp.Minimize(cp.trace(C @ X)), [X >> 0] + [cp.trace(A[k] @ X) == b[k] for k in range(m)])
    ref.solve(solver="CLARABEL")
    assert r.status == ipm.OPTIMAL
    assert abs(r.primal_objective - ref.value) <= 1e-6 * (1 + abs(ref.value))


def test_core_infeasible_and_unbounded():
    r = ipm_solve(ConeProblem(["s"], [2], [np.eye(2)[None]], [np.zeros((2, 2))], np.array([-1.0])))
    assert r.status == ipm.PRIMAL_INFEASIBLE
    A = np.zeros((1, 2, 2))
    A[0, 0, 1] = A[0, 1, 0] = 0.5
    r = ipm_solve(ConeProblem(["s"], [2], [A], [-np.eye(2)], np.array([0.0])))
    assert r.status == ipm.DUAL_INFEASIBLE


def test_min_t_at_least_one():
    m = Lmi()
    t = m.scalar()
    m.add_psd(t - 1.0)
    m.minimize(t)
    r = m.solve()
    assert r.status == OPT and abs(r.value - 1.0) < 1e-7


def test_block_problem_infeasible_certificate():
    p = SdpProblem([("X", 2)], [({"X": np.eye(2)}, -1.0)], {"X": np.zeros((2, 2))})
    s = solve(p)
    assert s.status == INFEASIBLE
    assert verify_solution(p, s)


def test_block_problem_roundtrip_and_verify(rng):
    C = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    C = C + C.conj().T
    p = SdpProblem([("X", 3)], [({"X": np.eye(3)}, 1.0)], {"X": C})
    s = solve(p)
    assert s.status == OPT
    assert abs(s.objective - np.linalg.eigvalsh(C)[0]) < 1e-7
    assert verify_solution(p, s)
    q = SdpProblem.from_json(p.to_json())
    assert q.to_json() == p.to_json()
    # a tampered primal fails the independent check
    bad = type(s)(s.status, {"X": s.primal["X"] * 2}, s.dual, s.slack, s.gap, s.objective)
    assert not verify_solution(p, bad)


def test_interval_membership_as_sdp():
    # margin of x = 0 in [-1, 1]: max t with diag(1 + x, 1 - x) - t >= 0
    m = Lmi()
    t = m.scalar()
    x = Affine(np.zeros((1, 1)))
    m.add_psd(bmat([[1 + x - t, None], [None, 1 - x - t]]))
    m.maximize(t)
    r = m.solve()
    assert r.ok and abs(r.value - 1) < 1e-7


def test_lmi_eigen_problem_matches_cvxpy(rng):
    n = 4
    F0 = rng.standard_normal((n, n))
    F0 = F0 + F0.T
    F1 = rng.standard_normal((n, n))
    F1 = F1 + F1.T
    m = Lmi()
    z, t = m.scalar(), m.scalar()
    m.add_psd(Affine(F0) + kron(z, F1) - kron(t, np.eye(n)))
    m.add_ge(1 - z)
    m.add_ge(z + 1)
    m.maximize(t)
    r = m.solve()
    assert r.ok
    assert abs(r.value - lmi_max_min_eig(F0, [F1])) < 1e-6


def test_lmi_hermitian_variable(rng):
    C = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    C = C + C.conj().T
    m = Lmi()
    W = m.hermitian(3)
    m.add_psd(W)
    m.add_eq(W.trace(), 1)
    m.minimize((W @ C).trace().real)
    r = m.solve()
    assert r.ok and abs(r.value - np.linalg.eigvalsh(C)[0]) < 1e-7


def test_lmi_infeasible_unbounded_and_constant():
    m = Lmi()
    W = m.hermitian(2)
    m.add_psd(W)
    m.add_eq(W.trace(), -1)
    assert m.solve().status == INFEASIBLE
    m = Lmi()
    t = m.scalar()
    m.add_ge(t)
    m.maximize(t)
    assert m.solve().status == UNBOUNDED
    # all variables fixed by equalities: the constant cone is checked directly
    m = Lmi()
    t = m.scalar()
    m.add_eq(t, 2.0)
    m.add_psd(bmat([[1 - t, None], [None, t]]))
    assert m.solve().status == INFEASIBLE
