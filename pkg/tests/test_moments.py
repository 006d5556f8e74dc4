import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncchoquet import FreePoly, MomentRelaxation, NcPoint, UcpRep, barycenter, minimal_rep, standard_form
from ncchoquet.linalg import random_hermitian, random_isometry, random_unitary
from ncchoquet.moments import apply, moment_data, truncated_gns, word_value
from ncchoquet.ncfunctions import words_up_to
from ncchoquet.point import direct_sum

X = np.array([[0.0, 1.0], [1.0, 0.0]])
e1 = np.array([[1.0], [0.0]])
x1 = FreePoly.letter(1, 0)


def test_barycenter_examples(rng):
    x = NcPoint([random_hermitian(2, rng)])
    assert barycenter(UcpRep.delta(x)).allclose(x)
    assert barycenter(UcpRep(NcPoint([X]), e1)).allclose(NcPoint.scalar(0.0))
    with pytest.raises(ValueError):
        UcpRep(NcPoint([X]), 0.5 * e1)


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_barycenter_rotation_invariant(seed):
    rng = np.random.default_rng(seed)
    y = NcPoint([random_hermitian(3, rng), rng.standard_normal((3, 3))])
    mu = UcpRep(y, random_isometry(3, 2, rng))
    u = random_unitary(3, rng)
    assert barycenter(mu.rotated(u)).allclose(barycenter(mu), atol=1e-10)


def test_apply_examples(rng):
    x = NcPoint([random_hermitian(2, rng)])
    f = x1 ** 3 - 2 * x1
    assert np.allclose(apply(UcpRep.delta(x), f), f.eval(x))
    mu = UcpRep(NcPoint([X]), e1)
    assert np.allclose(apply(mu, x1 ** 2), 1)
    assert np.allclose(apply(mu, FreePoly.unit(1)), np.eye(1))


def test_minimal_and_standard_form(rng):
    y = NcPoint([random_hermitian(2, rng)])
    z = NcPoint([random_hermitian(3, rng)])
    # the z summand is invisible to an isometry supported on y's block
    mu = UcpRep(direct_sum([y, z]), np.vstack([np.eye(2), np.zeros((3, 2))]))
    m = minimal_rep(mu)
    assert m.point.level == 2 and m.is_minimal()
    words = words_up_to(1, 4)
    a, b = moment_data(mu, words), moment_data(m, words)
    assert all(np.allclose(a[w], b[w]) for w in words)
    for p in (2, 3):
        mu = UcpRep(NcPoint([random_hermitian(3, rng)]), random_isometry(3, p, rng))
        s = standard_form(mu)
        assert np.allclose(s.isometry, np.eye(3)[:, :p])
        a, b = moment_data(mu, words), moment_data(s, words)
        assert all(np.allclose(a[w], b[w]) for w in words)


def test_word_values(rng):
    x = NcPoint([rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))])
    A = x.mats[0]
    assert np.allclose(word_value(x, (0, 1)), A @ A.conj().T)


def test_relaxation_contains_true_moments(interval):
    # a genuine UCP map satisfies every cone of the relaxation
    mr = MomentRelaxation(interval, 1, 2)
    mu = UcpRep(NcPoint([np.diag([-1.0, 0.5, 1.0])]), np.ones((3, 1)) / np.sqrt(3))
    vals = moment_data(mu, list(mr.tau))
    for w in mr.tau:
        if w:
            mr.fix(w, vals[w])
    mr.add_cones()
    assert mr.solve().ok


def test_relaxation_rejects_outside_moments(interval):
    mr = MomentRelaxation(interval, 1, 2)
    mr.fix((0,), np.array([[0.0]]))
    mr.fix((0, 0), np.array([[1.5]]))        # second moment above 1 is impossible on [-1, 1]
    mr.add_cones()
    assert mr.solve().status == "Infeasible"


def test_value_of_degree_guard(interval):
    mr = MomentRelaxation(interval, 1, 1)
    with pytest.raises(ValueError):
        mr.value_of(x1 ** 3)


def test_truncated_gns_reproduces_flat_moments(interval):
    mu = UcpRep(NcPoint([np.diag([-1.0, 1.0])]), np.ones((2, 1)) / np.sqrt(2))
    tau = moment_data(mu, words_up_to(1, 6, True))
    g = truncated_gns(interval, tau, 3, 1, True, 1)
    for k in range(5):
        assert np.allclose(apply(g, x1 ** k), apply(mu, x1 ** k), atol=1e-7)
