import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncchoquet import FreePoly, NcPoint, direct_sum, h_t, interval_set, test_nc_convexity
from ncchoquet.linalg import random_hermitian
from ncchoquet.ncfunctions import midpoint_gap, word_from_str, word_to_str, words_up_to

x1 = FreePoly.letter(1, 0)


def _random_poly(rng, d, degree):
    words = words_up_to(d, degree)
    pick = rng.choice(len(words), size=min(6, len(words)), replace=False)
    return FreePoly(d, {words[i]: complex(*rng.standard_normal(2)) for i in pick})


def _random_point(rng, d, n):
    return NcPoint([rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(d)])


def test_basic_evaluations(rng):
    x = NcPoint([random_hermitian(3, rng)])
    assert np.allclose(FreePoly.unit(1).eval(x), np.eye(3))
    assert np.allclose(FreePoly.word(1, "11").eval(x), x.mats[0] @ x.mats[0])
    assert FreePoly.word(2, "1").adjoint() == FreePoly.word(2, "1*")
    from ncchoquet.linalg import random_unitary
    p = NcPoint([random_unitary(3, rng)])
    ff = FreePoly.word(1, "1").multiply(FreePoly.word(1, "1*"))
    assert np.allclose(ff.eval(p), p.mats[0] @ p.mats[0].conj().T)


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_eval_respects_direct_sums(seed):
    rng = np.random.default_rng(seed)
    f = _random_poly(rng, 2, 4)
    x, y = _random_point(rng, 2, 2), _random_point(rng, 2, 3)
    big = f.eval(direct_sum([x, y]))
    assert np.allclose(big[:2, :2], f.eval(x))
    assert np.allclose(big[2:, 2:], f.eval(y))
    assert np.allclose(big[:2, 2:], 0)


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_adjoint_matches_matrix_adjoint(seed):
    rng = np.random.default_rng(seed)
    f = _random_poly(rng, 2, 3)
    x = _random_point(rng, 2, 3)
    assert np.allclose(f.adjoint().eval(x), f.eval(x).conj().T)
    assert f.adjoint().adjoint() == f


def test_arithmetic_and_parsing():
    f = FreePoly.parse(2, [("12*", 2.0), ("", 1.0)])
    assert f.degree == 2
    assert word_from_str("12*", 2) == (0, 3)
    assert word_to_str((0, 3), 2) == "12*"
    assert (f - f).terms == {}
    assert (x1 ** 3).terms == {(0, 0, 0): 1}
    assert (2 * x1 + 1).terms == {(0,): 2, (): 1}
    with pytest.raises(ValueError):
        word_from_str("3", 2)
    with pytest.raises(ValueError):
        FreePoly.word(1, "1").eval(NcPoint.scalar(1.0, 2.0))
    assert (x1 ** 2).is_selfadjoint(hermitian=True)
    assert not FreePoly.word(2, "12").is_selfadjoint()
    assert (FreePoly.word(2, "12") + FreePoly.word(2, "2*1*")).is_selfadjoint()


def test_h_t_examples(rng):
    X = random_hermitian(3, rng)
    x = NcPoint([X])
    assert np.allclose(h_t(0).eval(x), X @ X)
    assert np.allclose(h_t(0.5).eval(NcPoint([np.zeros((2, 2))])), 0)
    for radius in (0.5, 0.48):
        for _ in range(5):
            Y = random_hermitian(3, rng)
            Y *= radius / np.linalg.norm(Y, 2)
            y = NcPoint([Y])
            err = np.linalg.norm(h_t(0.5).truncation(8).eval(y) - h_t(0.5).eval(y), 2)
            # the bound is attained at norm 0.5 (about 1.27e-6); below 0.48 it is under 1e-6
            assert err <= h_t(0.5).tail_bound(8, radius) * (1 + 1e-9)
            if radius < 0.49:
                assert err <= 1e-6
    with pytest.raises(ValueError):
        h_t(1.0).eval(NcPoint.scalar(1.0))
    with pytest.raises(ValueError):
        h_t(2.0)


def test_safe_degree_tail():
    f = h_t(0.5)
    D = f.safe_degree(0.5, 5e-9)
    assert f.tail_bound(D, 0.5) <= 5e-9 < f.tail_bound(D - 1, 0.5)
    assert h_t(0.0).safe_degree(0.5, 1e-9) == 0


def test_convexity_of_square():
    v = test_nc_convexity(x1 ** 2, interval_set(-1, 1), max_level=3)
    assert v.convex and v.tests > 0


def test_quartic_fails_with_certified_witness():
    v = test_nc_convexity(x1 ** 4, interval_set(-2, 2), max_level=3)
    assert v.status == "CounterexampleFound" and v.level == 2
    w = v.witness
    assert w["form"] == "midpoint"
    g = midpoint_gap(x1 ** 4, w["x"], w["y"], w["lambda"])
    assert g < -1e-6 and abs(g - w["eigen_gap"]) < 1e-12


def test_quartic_textbook_pair():
    # A = [[2,1],[1,1]], B = [[1,0],[0,0]]: (A^4 + B^4)/2 - ((A+B)/2)^4 is indefinite
    A, B = np.array([[2.0, 1], [1, 1]]), np.array([[1.0, 0], [0, 0]])
    assert midpoint_gap(x1 ** 4, NcPoint([A]), NcPoint([B]), 0.5) < 0


def test_exact_h_t_convex_on_wide_interval():
    v = test_nc_convexity(h_t(0.5), interval_set(-0.9, 0.9), max_level=3, samples=20)
    assert v.convex


def test_low_degree_truncation_is_not_operator_convex():
    # degree > 2 polynomials cannot be operator convex; the search may detect it
    # when the gap exceeds eps_psd, and any gap stays within twice the tail bound
    v = test_nc_convexity(h_t(0.5).truncation(8), interval_set(-0.5, 0.5), max_level=4)
    if not v.convex:
        assert abs(v.witness["eigen_gap"]) <= 2 * h_t(0.5).tail_bound(8, 0.5) * 4
