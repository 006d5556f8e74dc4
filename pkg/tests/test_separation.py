import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncchoquet import (AffineFunctional, NcPoint, NotOutsideError, SeparationCertificate, hull_set,
                       interval_set, opsys_set, row_ball_set, separate, verify_certificate)
from ncchoquet.linalg import random_hermitian
from ncchoquet.io import dumps


def test_interval_certificate(interval):
    y = NcPoint.scalar(2.0)
    cert = separate(interval, y)
    assert cert.violation >= 1 - 1e-7
    assert verify_certificate(interval, y, cert)
    json.loads(dumps(cert.to_dict()))


def test_hand_built_certificate(interval):
    y = NcPoint.scalar(2.0)
    f = AffineFunctional([np.array([[1.0]])], np.array([[1.0]]))
    cert = SeparationCertificate(f, 1.0, np.array([1.0]))
    assert verify_certificate(interval, y, cert)
    weaker = SeparationCertificate(AffineFunctional(f.coeffs, f.gamma - 1), 1.0, np.array([1.0]))
    assert not verify_certificate(interval, y, weaker)


def test_row_ball_certificate(row_ball):
    y = NcPoint.scalar(1.0, 1.0)
    cert = separate(row_ball, y)
    assert cert.violation >= 0.5 - 1e-9
    assert verify_certificate(row_ball, y, cert)


def test_hull_certificate_and_precondition():
    K = hull_set([NcPoint.scalar(-1.0), NcPoint.scalar(1.0)])
    cert = separate(K, NcPoint.scalar(1.5))
    assert verify_certificate(K, NcPoint.scalar(1.5), cert)
    with pytest.raises(NotOutsideError):
        separate(K, NcPoint.scalar(0.5))
    with pytest.raises(NotOutsideError):
        separate(interval_set(-1, 1), NcPoint.scalar(0.5))


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_level2_outside_points(seed):
    rng = np.random.default_rng(seed)
    X = random_hermitian(2, rng)
    X *= 1.5 / np.linalg.norm(X, 2)
    K = interval_set(-1, 1)
    y = NcPoint([X])
    cert = separate(K, y)
    assert verify_certificate(K, y, cert, seed=seed)


def test_opsys_certificate(rng):
    S = np.diag([1.0, -1.0, 0.0]) + 0j
    K = opsys_set([S])
    y = NcPoint([np.diag([1.2, 0.0])])
    cert = separate(K, y)
    assert verify_certificate(K, y, cert)
