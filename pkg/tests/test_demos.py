import numpy as np
import pytest

from ncchoquet.demos import creation_operators, demo, semicircular_blocks, semicircular_defect


def test_interval_demo():
    rep = demo("interval")
    assert rep["classify"]["-1"]["nc_extreme"] and rep["classify"]["+1"]["nc_extreme"]
    assert not rep["classify"]["0"]["nc_extreme"] and not rep["classify"]["diag(-1,1)"]["nc_extreme"]
    atoms = rep["midpoint_measure"]["atoms"]
    assert [round(a["point"], 6) for a in atoms] == [-1, 1]
    assert np.allclose([a["weight"] for a in atoms], 0.5)
    assert abs(rep["envelope_at_0"]["x^3"]["lower"] + 0.25) < 1e-3
    assert rep["krein_milman"]["represented"]


def test_cuntz_demo():
    rep = demo("cuntz", max_steps=4)
    assert not rep["finite_extreme_points_found"]
    assert all(p["dilation_capped"] for p in rep["points"].values())


def test_creation_operators_are_partial_isometries():
    (L1, L2), words = creation_operators(3)
    assert len(words) == 15
    # isometric away from the top layer
    inner = [k for k, w in enumerate(words) if len(w) < 3]
    assert np.allclose((L1.T @ L1)[np.ix_(inner, inner)], np.eye(len(inner)))
    assert np.allclose(L1.T @ L2, 0)


@pytest.mark.parametrize("lam,s2", [(1j, 1.0), (np.exp(1j * np.pi / 3), 0.75), (1.0, 0.0), (-1.0, 0.0)])
def test_semicircular_defect(lam, s2):
    rep = semicircular_defect(complex(lam), N=6)
    assert abs(rep["defect_norm"] - s2) <= 1e-8
    assert rep["identity_residual"] <= 1e-8
    assert rep["agreement_on_generators"] <= 1e-12


def test_semicircular_tau_is_cuntz_family_on_safe_region():
    (S1, S2), (T1, T2), words = semicircular_blocks(np.exp(0.7j), 5)
    assert semicircular_defect(np.exp(0.7j), 5)["cuntz_relation_residual"] <= 1e-12
    # sigma_lambda(a_1) fixes eta up to the factor 2r
    a1 = S1 + S1.conj().T
    assert np.isclose(a1[0, 0], 2 * np.cos(0.7)) and np.allclose(a1[1:, 0], 0)


def test_unknown_demo():
    with pytest.raises(ValueError):
        demo("torus")
