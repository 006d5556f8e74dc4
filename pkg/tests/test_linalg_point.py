import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from ncchoquet.linalg import (Tolerances, commutant_dim, is_isometry, is_psd, kernel, kron, psd_sqrt,
                              random_hermitian, random_isometry, random_unitary)
from ncchoquet.point import NcPoint, block_embedding, compress, direct_sum, nc_combination
from oracles import kron_loop

finite = st.floats(-5, 5, allow_nan=False)


def test_kron_identities():
    assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))
    shift = kron([[0, 1], [0, 0]], np.eye(2))
    expect = np.zeros((4, 4))
    expect[0, 2] = expect[1, 3] = 1
    assert np.array_equal(shift, expect)


@given(arrays(float, (3, 3), elements=finite), arrays(float, (3, 3), elements=finite))
def test_kron_matches_loop(a, b):
    assert np.allclose(kron(a, b), kron_loop(a, b))


def test_psd_examples(rng):
    assert is_psd(np.eye(3))
    assert not is_psd(np.diag([1.0, -1.0]))
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert is_psd(a @ a.conj().T)
    with pytest.raises(ValueError):
        is_psd(np.array([[0, 1], [0, 0]]))


def test_isometry_examples():
    assert is_isometry(np.eye(2)[:, :1])
    assert is_isometry(np.array([[1.0], [1.0]]) / np.sqrt(2))
    assert not is_isometry(0.9 * np.eye(2)[:, :1])
    assert not is_isometry(np.ones((1, 2)))


def test_tolerances_validate():
    with pytest.raises(ValueError):
        Tolerances(eps_psd=-1)
    assert Tolerances().with_overrides(eps_psd=1e-6, eps_rank=None).eps_psd == 1e-6


def test_commutant_dims(rng):
    assert commutant_dim([np.diag([0.0, 1.0])]) == 2
    sx = np.array([[0, 1], [1, 0]])
    sz = np.diag([1.0, -1.0])
    assert commutant_dim([sx, sz]) == 1
    x = [random_hermitian(2, rng), random_hermitian(2, rng)]
    assert commutant_dim(x) == 1
    doubled = [np.kron(np.eye(2), m) for m in x]
    assert commutant_dim(doubled) == 4


def test_kernel_and_sqrt(rng):
    m = rng.standard_normal((3, 5))
    k = kernel(m, 1e-10)
    assert k.shape == (5, 2)
    assert np.allclose(m @ k, 0)
    a = rng.standard_normal((4, 4))
    p = a @ a.T
    r = psd_sqrt(p)
    assert np.allclose(r @ r, p)


def test_point_validation():
    with pytest.raises(ValueError):
        NcPoint([])
    with pytest.raises(ValueError):
        NcPoint([np.eye(2), np.eye(3)])
    with pytest.raises(ValueError):
        NcPoint([np.array([[np.nan]])])
    x = NcPoint([np.eye(2)])
    with pytest.raises(ValueError):
        x.mats[0][0, 0] = 3


def test_identity_combination_and_compress(rng):
    x = NcPoint([random_hermitian(3, rng), rng.standard_normal((3, 3))])
    assert nc_combination([x], [np.eye(3)]).allclose(x)
    y = NcPoint([random_hermitian(2, rng), rng.standard_normal((2, 2))])
    s = direct_sum([x, y])
    assert compress(s, block_embedding([3, 2], 0)).allclose(x)
    assert compress(s, block_embedding([3, 2], 1)).allclose(y)


@given(st.integers(0, 10_000))
def test_combination_factorizes_through_direct_sum(seed):
    rng = np.random.default_rng(seed)
    x = NcPoint([random_hermitian(2, rng)])
    y = NcPoint([random_hermitian(3, rng)])
    # split an isometry of C^2 into C^2 + C^3 into two weights
    V = random_isometry(5, 2, rng)
    a, b = V[:2], V[2:]
    comb = nc_combination([x, y], [a, b])
    gamma = np.vstack([a, b])
    assert compress(direct_sum([x, y]), gamma).allclose(comb)
    u = random_unitary(5, rng)
    # a unitary rotation of the sum together with the weights leaves the combination unchanged
    rotated = nc_combination([direct_sum([x, y]).conj_by(u)], [u @ gamma])
    assert rotated.allclose(comb, atol=1e-10)


def test_combination_rejects_bad_weights():
    x = NcPoint.scalar(1.0)
    with pytest.raises(ValueError):
        nc_combination([x], [np.array([[0.5]])])
