import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncchoquet import (NcPoint, cuntz_truncation, hull_set, interval_set, is_member, membership,
                       opsys_set, pencil_set, row_ball_set, sample_member)
from ncchoquet.linalg import random_hermitian, random_unitary
from ncchoquet.ncset import boundary_step, random_direction
from oracles import row_contraction, ucp_exists


def test_interval_examples(interval):
    r = membership(interval, NcPoint.scalar(0.0))
    assert r.inside and abs(r.margin - 1) < 1e-12
    r = membership(interval, NcPoint.scalar(2.0))
    assert not r.inside and abs(r.margin + 1) < 1e-12
    assert r.certificate.violation >= 1 - 1e-9
    r = membership(interval, NcPoint.scalar(1.0))
    assert r.inside and abs(r.margin) < 1e-12
    assert is_member(interval_set(0, 1), NcPoint([np.diag([0, 0.5, 1])]))
    u = random_unitary(2, np.random.default_rng(0))
    X = u @ np.diag([-1.1, 0.0]) @ u.conj().T
    assert not is_member(interval, NcPoint([X]))


def test_row_ball_examples(row_ball):
    h = 1 / np.sqrt(2)
    r = membership(row_ball, NcPoint.scalar(h, h))
    assert r.inside and abs(r.margin) < 1e-12
    assert not is_member(row_ball, NcPoint.scalar(1.0, 1.0))


def test_row_ball_d1_is_operator_ball(rng):
    K = row_ball_set(1)
    for _ in range(20):
        X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        X *= rng.uniform(0.3, 0.9) / np.linalg.norm(X, 2) * rng.choice([0.9, 1.2])
        assert is_member(K, NcPoint([X])) == (np.linalg.norm(X, 2) <= 1)


def test_cuntz_truncation_matches_choi_oracle():
    gens, words = cuntz_truncation(2)
    assert len(words) == 7
    K = opsys_set(gens)
    h = 1 / np.sqrt(2)
    for x in (NcPoint.scalar(h, h), NcPoint.scalar(0.3, 0.1), NcPoint.scalar(0.5, 0.5)):
        ours = membership(K, x, certify=False).margin
        assert abs(ours - ucp_exists(gens, x.mats, margin=True)) < 1e-6
    # the truncation's state space is strictly inside the row ball at this point
    assert not is_member(K, NcPoint.scalar(h, h))
    assert is_member(row_ball_set(2), NcPoint.scalar(h, h))


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_opsys_level2_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    gens = [random_hermitian(3, rng)]
    K = opsys_set(gens)
    X = random_hermitian(2, rng, scale=0.7)
    ours = is_member(K, NcPoint([X]))
    ref = ucp_exists(gens, [X], margin=True)
    if abs(ref) > 1e-5:
        assert ours == (ref >= 0)


def test_hull_of_scalars_is_interval(rng):
    K = hull_set([NcPoint.scalar(-1.0), NcPoint.scalar(1.0)])
    for _ in range(10):
        u = random_unitary(3, rng)
        w = rng.uniform(-1.3, 1.3, 3)
        if np.min(np.abs(np.abs(w) - 1)) < 1e-3:
            continue
        x = NcPoint([u @ np.diag(w) @ u.conj().T])
        assert is_member(K, x) == bool(np.all(np.abs(w) <= 1))


def test_inside_weights_reconstruct(rng):
    K = hull_set([NcPoint.scalar(-1.0), NcPoint.scalar(1.0)])
    X = random_hermitian(2, rng)
    X *= 0.8 / np.linalg.norm(X, 2)
    r = membership(K, NcPoint([X]))
    assert r.inside
    rec = sum(a.conj().T * K.generators[i].mats[0][0, 0] @ a for i, a in r.weights)
    assert np.allclose(rec, X, atol=1e-6)


def test_pencil_set_validation():
    with pytest.raises(ValueError):
        pencil_set(np.eye(1), [np.eye(1)])          # half-line: unbounded
    with pytest.raises(ValueError):
        pencil_set(np.eye(2), [np.array([[0, 1], [0, 0]])])   # non-Hermitian coefficient
    with pytest.raises(ValueError):
        interval_set(1, 0)
    with pytest.raises(ValueError):
        membership(interval_set(-1, 1), NcPoint.scalar(0.0, 0.0))
    with pytest.raises(ValueError):
        membership(interval_set(-1, 1), NcPoint([np.array([[0, 1], [0, 0]])]))


def test_general_pencil_square():
    # the square [-1,1]^2 as a diagonal pencil
    a0 = np.eye(4)
    A1 = np.diag([1.0, -1, 0, 0])
    A2 = np.diag([0, 0, 1.0, -1])
    K = pencil_set(a0, [A1, A2])
    assert np.allclose(K.bounds, [[-1, 1], [-1, 1]], atol=1e-6)
    assert is_member(K, NcPoint.scalar(0.9, -0.9))
    assert not is_member(K, NcPoint.scalar(1.1, 0))


@pytest.mark.parametrize("which", ["interval", "row_ball", "hull"])
def test_samples_are_members(which, rng):
    K = {"interval": interval_set(-1, 1), "row_ball": row_ball_set(2),
         "hull": hull_set([NcPoint.scalar(0.0), NcPoint.scalar(1.0),
                           NcPoint([np.array([[0.5, 0.5], [0.5, 0.5]])])])}[which]
    for n in (1, 2, 3):
        for _ in range(4):
            x = sample_member(K, n, rng)
            assert is_member(K, x)
            if which == "row_ball":
                assert row_contraction(list(x.mats), 1e-7)


def test_boundary_step_hits_boundary(interval, rng):
    base = [np.zeros((2, 2))]
    d = random_direction(interval, 2, rng)
    s = boundary_step(interval, base, d)
    X = s * d[0]
    assert abs(np.max(np.abs(np.linalg.eigvalsh((X + X.conj().T) / 2))) - 1) < 1e-8
