import numpy as np
from hypothesis import given, settings, strategies as st

from ncchoquet import (FreePoly, NcMeasure, NcPoint, UcpRep, decompose_irreducible, integrate,
                       represent_on_extreme, row_ball_set)
from ncchoquet.io import dumps
from ncchoquet.linalg import random_hermitian, random_unitary
from ncchoquet.point import compress, direct_sum
from ncchoquet.representation import intertwiner

x1 = FreePoly.letter(1, 0)


def _check_embeddings(x, comps):
    cols = np.hstack([V for c in comps for V in c.embeddings])
    assert np.allclose(cols.conj().T @ cols, np.eye(x.level), atol=1e-8)
    for c in comps:
        for V in c.embeddings:
            assert compress(x, V).allclose(c.point, atol=1e-8)


def test_diagonal_splits():
    x = NcPoint([np.diag([-1.0, 1.0])])
    comps = decompose_irreducible(x)
    assert sorted(c.point.mats[0][0, 0].real for c in comps) == [-1.0, 1.0]
    _check_embeddings(x, comps)


def test_pauli_pair_is_one_atom():
    x = NcPoint([np.array([[0, 1], [1, 0]]), np.diag([1.0, -1.0])])
    comps = decompose_irreducible(x)
    assert len(comps) == 1 and comps[0].multiplicity == 1


@settings(max_examples=8)
@given(st.integers(0, 10_000))
def test_multiplicity_two(seed):
    rng = np.random.default_rng(seed)
    y = NcPoint([random_hermitian(2, rng), random_hermitian(2, rng)])
    u = random_unitary(4, rng)
    x = direct_sum([y, y]).conj_by(u)
    comps = decompose_irreducible(x, seed=seed)
    assert len(comps) == 1 and comps[0].multiplicity == 2
    _check_embeddings(x, comps)


def test_intertwiner(rng):
    y = NcPoint([random_hermitian(3, rng)])
    u = random_unitary(3, rng)
    T = intertwiner(y, y.conj_by(u))
    assert T is not None and np.allclose(T @ y.mats[0] @ T.conj().T, y.conj_by(u).mats[0])
    assert intertwiner(y, NcPoint([random_hermitian(3, rng)])) is None


def test_integrate_examples(rng):
    x = NcPoint([random_hermitian(2, rng)])
    pm = NcMeasure([(x, np.eye(2))], 2)
    f = x1 ** 3 + 1
    assert np.allclose(integrate(pm, f), f.eval(x))
    w = np.array([[1 / np.sqrt(2)]])
    m = NcMeasure([(NcPoint.scalar(-1.0), w), (NcPoint.scalar(1.0), w)], 1)
    assert np.allclose(integrate(m, x1 ** 2), 1)
    assert np.allclose(integrate(m, FreePoly.unit(1)), 1)


def test_midpoint_representation(interval):
    rep = represent_on_extreme(interval, UcpRep.delta(NcPoint.scalar(0.0)))
    assert not rep.capped and rep.supported_on_extreme
    atoms = sorted((p.mats[0][0, 0].real, float(np.real(w.conj().T @ w)[0, 0])) for p, w in rep.measure.atoms)
    assert np.allclose(atoms, [(-1, 0.5), (1, 0.5)], atol=1e-7)
    m = rep.measure
    assert np.allclose(integrate(m, x1), 0, atol=1e-7)
    assert np.allclose(integrate(m, x1 ** 2), 1, atol=1e-7)
    assert np.allclose(integrate(m, x1 ** 3), 0, atol=1e-7)
    # the measure represents the barycenter, not delta_0 itself
    assert not rep.reproduces_input
    dumps(rep.to_dict())


def test_endpoint_is_single_atom(interval):
    rep = represent_on_extreme(interval, UcpRep.delta(NcPoint.scalar(1.0)))
    assert len(rep.measure.atoms) == 1 and rep.reproduces_input and rep.dilation_steps == 0


def test_maximal_input_is_reproduced(interval, rng):
    u = random_unitary(3, rng)
    y = NcPoint([u @ np.diag([-1.0, 1.0, 1.0]) @ u.conj().T])
    mu = UcpRep(y, u[:, :2])
    rep = represent_on_extreme(interval, mu)
    assert rep.supported_on_extreme and rep.reproduces_input
    assert rep.measure.check()


def test_row_ball_is_capped():
    h = 1 / np.sqrt(2)
    assert represent_on_extreme(row_ball_set(2), UcpRep.delta(NcPoint.scalar(h, h)), max_steps=4).capped
