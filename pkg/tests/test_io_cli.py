import json

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from ncchoquet import FreePoly, NcPoint, UcpRep, hull_set, interval_set, opsys_set, pencil_set, row_ball_set
from ncchoquet import cli
from ncchoquet import io as nio

cplx = st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False)


@given(arrays(complex, st.tuples(st.integers(1, 4), st.integers(1, 4)), elements=cplx))
def test_matrix_roundtrip_is_exact(a):
    b = nio.mat_from_json(json.loads(json.dumps(nio.mat_to_json(a))))
    assert np.array_equal(a, b)


def test_matrix_json_errors():
    with pytest.raises(ValueError):
        nio.mat_from_json({"rows": 2, "cols": 2, "data": [[0, 0]]})
    with pytest.raises(ValueError):
        nio.mat_from_json({"rows": 1})
    with pytest.raises(ValueError):
        nio.point_from_json({"d": 2, "mats": [nio.mat_to_json(np.eye(2))]})


@pytest.mark.parametrize("K", [
    interval_set(-1, 2), row_ball_set(2), hull_set([NcPoint.scalar(0.0), NcPoint.scalar(1.0)]),
    opsys_set([np.diag([1.0, -1.0, 0.0])]), pencil_set(np.eye(2), [np.diag([1.0, -1.0])]),
])
def test_set_roundtrip(K):
    doc = nio.set_to_json(K)
    K2 = nio.set_from_json(json.loads(nio.dumps(doc)))
    assert K2.kind == K.kind and K2.d == K.d and K2.hermitian == K.hermitian
    assert nio.dumps(nio.set_to_json(K2)) == nio.dumps(doc)


def test_set_json_errors():
    for bad in ({}, {"kind": "cube"}, {"kind": "pencil", "a0": nio.mat_to_json(np.eye(1))},
                {"kind": "pencil", "preset": "disk"}):
        with pytest.raises(ValueError):
            nio.set_from_json(bad)


def test_poly_and_ucp_roundtrip():
    f = FreePoly.parse(2, [("12*", 1 + 2j), ("", 3.0), ("2", -1)])
    assert nio.poly_from_json(json.loads(nio.dumps(nio.poly_to_json(f)))) == f
    ht = nio.poly_from_json({"kind": "h_t", "t": 0.25, "degree": 3})
    assert ht.degree == 5
    mu = UcpRep(NcPoint([np.array([[0, 1], [1, 0]])]), np.array([[1.0], [0.0]]))
    mu2 = nio.ucp_from_json(json.loads(nio.dumps(nio.ucp_to_json(mu))))
    assert np.array_equal(mu2.isometry, mu.isometry)


def _run(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_cli_classify_endpoint(capsys, fixtures_dir):
    code, rep = _run(capsys, "classify", "--set", str(fixtures_dir / "interval.json"),
                     "--point", str(fixtures_dir / "endpoint.json"))
    assert code == 0 and rep["result"]["nc_extreme"] is True
    assert rep["version"] and rep["tolerances"]["eps_psd"] == 1e-8 and "wall_time_s" in rep


def test_cli_envelope(capsys, fixtures_dir):
    code, rep = _run(capsys, "envelope", "--set", str(fixtures_dir / "interval.json"),
                     "--poly", str(fixtures_dir / "x3.json"), "--point", str(fixtures_dir / "zero.json"))
    assert code == 0
    low = rep["result"]["lower_bound"]["data"][0][0]
    up = rep["result"]["upper_bound"]["data"][0][0]
    assert abs(low + 0.25) < 1e-3 and abs(up + 0.25) < 1e-3


def test_cli_malformed_json(capsys, tmp_path, fixtures_dir):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, rep = _run(capsys, "classify", "--set", str(bad), "--point", str(fixtures_dir / "endpoint.json"))
    assert code == 2 and rep["error"]["type"] == "InputError"
    code, _ = _run(capsys, "classify", "--set", str(tmp_path / "missing.json"),
                   "--point", str(fixtures_dir / "endpoint.json"))
    assert code == 2
    code, _ = _run(capsys, "classify", "--set", str(fixtures_dir / "interval.json"))
    assert code == 2


def test_cli_outside_is_an_answer(capsys, fixtures_dir):
    code, rep = _run(capsys, "membership", "--set", str(fixtures_dir / "interval.json"),
                     "--point", str(fixtures_dir / "outside.json"))
    assert code == 0 and rep["result"]["inside"] is False and "certificate" in rep["result"]
    code, rep = _run(capsys, "separate", "--set", str(fixtures_dir / "hull_pm1.json"),
                     "--point", str(fixtures_dir / "outside.json"))
    assert code == 0 and rep["result"]["verified"] is True


def test_cli_numerical_failure_exit_code(capsys, monkeypatch, fixtures_dir):
    from ncchoquet.linalg import NumericalFailure

    def boom(job, tol):
        raise NumericalFailure("solver stalled")
    monkeypatch.setitem(cli.HANDLERS, "classify", boom)
    code, rep = _run(capsys, "classify", "--set", str(fixtures_dir / "interval.json"),
                     "--point", str(fixtures_dir / "endpoint.json"))
    assert code == 3 and rep["error"]["type"] == "NumericalFailure"


@pytest.mark.parametrize("args,key", [
    (("dilate", "--set", "interval.json", "--point", "zero.json"), "status"),
    (("order", "--set", "interval.json", "--mu", "delta0.json", "--nu", "mu_offdiag.json"), "dilation"),
    (("decompose", "--set", "interval.json", "--mu", "delta0.json"), "status"),
    (("hull-check", "--set", "interval.json", "--point", "diag.json"), "represented"),
    (("convexity", "--set", "interval.json", "--poly", "x2.json", "--max-level", "2"), "status"),
])
def test_cli_commands(capsys, fixtures_dir, args, key):
    full = [a if not a.endswith(".json") else str(fixtures_dir / a) for a in args]
    code, rep = _run(capsys, *full)
    assert code == 0 and key in rep["result"]


def test_cli_order_verdicts(capsys, fixtures_dir):
    code, rep = _run(capsys, "order", "--set", str(fixtures_dir / "interval.json"),
                     "--mu", str(fixtures_dir / "mu_offdiag.json"), "--nu", str(fixtures_dir / "delta0.json"))
    assert rep["result"]["dilation"]["relation"] == "Violated"
    assert rep["result"]["choquet"]["relation"] == "Violated"


def test_cli_out_file_and_determinism(capsys, tmp_path, fixtures_dir):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        code = cli.main(["hull-check", "--set", str(fixtures_dir / "interval.json"), "--point",
                         str(fixtures_dir / "diag.json"), "--out", str(path)])
        assert code == 0
        doc = json.loads(path.read_text())
        doc.pop("wall_time_s")
        outs.append(nio.dumps(doc))
    assert outs[0] == outs[1]


def test_cli_demo_unknown(capsys):
    code, rep = _run(capsys, "demo", "nope")
    assert code == 2
