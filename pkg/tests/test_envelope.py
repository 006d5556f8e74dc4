import numpy as np
import pytest

from ncchoquet import (DOMINATES, INCONCLUSIVE, VIOLATED, FreePoly, NcPoint, UcpRep, choquet_order_check,
                       convex_envelope, dilation_order_check, h_t, jensen_check, row_ball_set)
from ncchoquet.envelope import affine_square_gram, frame_reconstruct, probe_frame
from ncchoquet.io import dumps
from ncchoquet.linalg import random_hermitian, random_isometry
from ncchoquet.moments import apply
from oracles import scalar_envelope

x1 = FreePoly.letter(1, 0)
zero = NcPoint.scalar(0.0)
half_mix = UcpRep(NcPoint([np.array([[0.0, 1.0], [1.0, 0.0]])]), np.array([[1.0], [0.0]]))


def test_frame_roundtrip(rng):
    for n in (1, 2, 3):
        B = random_hermitian(n, rng)
        vals = [float(np.real(v.conj() @ B @ v)) for v in probe_frame(n)]
        assert np.allclose(frame_reconstruct(vals, n), B)


@pytest.mark.parametrize("f,oracle_fn,tol", [
    (x1 ** 3, lambda t: t ** 3, 1e-3),
    (-(x1 ** 2), lambda t: -t ** 2, 1e-4),
    (x1 ** 2, lambda t: t ** 2, 1e-4),
])
def test_envelope_matches_measure_oracle(interval, f, oracle_fn, tol):
    ref = scalar_envelope(oracle_fn, -1, 1, 0.0)
    res = convex_envelope(interval, f, zero, relaxation_level=3)
    assert res.lower_scalar <= res.upper_scalar + 1e-7
    assert abs(res.lower_scalar - ref) <= tol and abs(res.upper_scalar - ref) <= tol
    dumps(res.to_dict())


def test_envelope_off_center(interval):
    x = NcPoint.scalar(0.4)
    ref = scalar_envelope(lambda t: -t ** 4, -1, 1, 0.4)
    res = convex_envelope(interval, -(x1 ** 4), x, relaxation_level=3)
    assert abs(res.lower_scalar - ref) < 1e-3 and abs(res.upper_scalar - ref) < 1e-3


def test_envelope_level2_bounds_are_ordered(interval, rng):
    X = random_hermitian(2, rng)
    X *= 0.6 / np.linalg.norm(X, 2)
    res = convex_envelope(interval, x1 ** 3, NcPoint([X]), relaxation_level=2, dilation_budget=4)
    lo, up = res.lower_bound, res.upper_bound
    # the upper bound is an attained value mu(f), so it dominates the relaxation bound on every probe
    assert all(a <= b + 1e-6 for a, b in zip(res.probe_lower, res.probe_upper))
    assert lo.shape == up.shape == (2, 2)


def test_envelope_rejects_non_selfadjoint(row_ball):
    with pytest.raises(ValueError):
        convex_envelope(row_ball, FreePoly.word(2, "1"), NcPoint.scalar(0.0, 0.0), 1)


def test_choquet_pair(interval):
    assert choquet_order_check(interval, UcpRep.delta(zero), half_mix).relation == INCONCLUSIVE
    rev = choquet_order_check(interval, half_mix, UcpRep.delta(zero))
    assert rev.relation == VIOLATED
    assert rev.witness["function"] == "h_t" and rev.witness["t"] == 0.0      # h_0 is x^2
    assert choquet_order_check(interval, half_mix, half_mix).relation == INCONCLUSIVE
    dumps(rev.to_dict())


def test_dilation_pair(interval):
    v = dilation_order_check(interval, UcpRep.delta(zero), half_mix)
    assert v.relation == DOMINATES
    tau = v.witness["tau"]
    assert np.allclose(tau["11"], [[1, 0], [0, 1]], atol=1e-6) or tau["11"].shape == (1, 1)
    assert dilation_order_check(interval, half_mix, UcpRep.delta(zero)).relation == VIOLATED
    dumps(v.to_dict())


def test_point_mass_is_minimal(interval, rng):
    from ncchoquet.dilation import random_dilation
    from ncchoquet.ncset import sample_member
    for _ in range(10):
        x = sample_member(interval, int(rng.integers(1, 3)), rng)
        y, V = random_dilation(interval, x, rng, steps=int(rng.integers(1, 3)))
        v = dilation_order_check(interval, UcpRep.delta(x), UcpRep(y, V))
        assert v.relation == DOMINATES


def test_barycenter_mismatch_is_violation(interval):
    v = dilation_order_check(interval, UcpRep.delta(zero), UcpRep.delta(NcPoint.scalar(0.5)))
    assert v.relation == VIOLATED
    assert choquet_order_check(interval, UcpRep.delta(zero), UcpRep.delta(NcPoint.scalar(0.5))).relation == VIOLATED


def test_affine_square_gram_is_psd(rng):
    mu = UcpRep(NcPoint([random_hermitian(3, rng)]), random_isometry(3, 2, rng))
    assert np.linalg.eigvalsh(affine_square_gram(mu))[0] >= -1e-10


def test_jensen_examples(interval):
    assert np.allclose(apply(half_mix, x1 ** 2), 1) and np.allclose((x1 ** 2).eval(zero), 0)
    affine = 2 * x1 + 1
    rep = jensen_check(interval, affine, samples=10)
    assert rep.violations == 0 and rep.max_violation < 1e-8
    rep = jensen_check(interval, [x1 ** 2, h_t(0.5).truncation(h_t(0.5).safe_degree(1.0, 5e-9))], samples=20)
    assert rep.violations == 0


def test_row_ball_orders_are_consistent(row_ball, rng):
    from ncchoquet.dilation import random_dilation
    from ncchoquet.ncset import sample_member
    x = sample_member(row_ball, 1, rng)
    y, V = random_dilation(row_ball, x, rng, steps=1)
    mu = UcpRep(y, V)
    assert dilation_order_check(row_ball, UcpRep.delta(x), mu).relation == DOMINATES
    rev = dilation_order_check(row_ball, mu, UcpRep.delta(x))
    if rev.relation == VIOLATED:
        assert choquet_order_check(row_ball, mu, UcpRep.delta(x)).relation == VIOLATED
