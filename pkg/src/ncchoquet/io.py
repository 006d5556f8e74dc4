"""JSON formats for matrices, points, sets, maps, polynomials and reports."""

from __future__ import annotations

import json

import numpy as np

from .linalg import as_cmat
from .point import NcPoint


def mat_to_json(a) -> dict:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in a.reshape(-1)]}


def mat_from_json(doc) -> np.ndarray:
    try:
        rows, cols, data = int(doc["rows"]), int(doc["cols"]), doc["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError("matrix JSON needs rows, cols and data") from exc
    if len(data) != rows * cols:
        raise ValueError(f"matrix JSON has {len(data)} entries, expected {rows * cols}")
    vals = []
    for z in data:
        if isinstance(z, (int, float)):
            vals.append(complex(z))
        elif isinstance(z, (list, tuple)) and len(z) == 2:
            vals.append(complex(float(z[0]), float(z[1])))
        else:
            raise ValueError("matrix entries must be [re, im] pairs")
    return as_cmat(np.array(vals, dtype=complex).reshape(rows, cols))


def point_to_json(x: NcPoint) -> dict:
    return {"d": x.d, "level": x.level, "mats": [mat_to_json(m) for m in x.mats]}


def point_from_json(doc) -> NcPoint:
    try:
        mats = [mat_from_json(m) for m in doc["mats"]]
    except (KeyError, TypeError) as exc:
        raise ValueError("point JSON needs mats") from exc
    x = NcPoint(mats)
    if "d" in doc and int(doc["d"]) != x.d:
        raise ValueError("point JSON: d does not match the number of matrices")
    if "level" in doc and int(doc["level"]) != x.level:
        raise ValueError("point JSON: level does not match the matrix size")
    return x


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def ucp_to_json(mu) -> dict:
    return {"point": point_to_json(mu.point), "isometry": mat_to_json(mu.isometry)}


def ucp_from_json(doc):
    from .moments import UcpRep
    try:
        return UcpRep(point_from_json(doc["point"]), mat_from_json(doc["isometry"]))
    except (KeyError, TypeError) as exc:
        raise ValueError("UCP JSON needs point and isometry") from exc


# --- sets -------------------------------------------------------------------


def set_to_json(K) -> dict:
    if "interval" in K.meta:
        c, d = K.meta["interval"]
        return {"kind": "pencil", "preset": "interval", "bounds": [float(c), float(d)]}
    if "row_ball" in K.meta:
        return {"kind": "pencil", "preset": "row_ball", "d": int(K.meta["row_ball"])}
    if K.kind == "pencil":
        return {"kind": "pencil", "hermitian": bool(K.hermitian), "a0": mat_to_json(K.pencil.a0),
                "coeffs": [mat_to_json(a) for a in K.pencil.coeffs]}
    if K.kind == "hull":
        return {"kind": "hull", "generators": [point_to_json(g) for g in K.generators]}
    return {"kind": "opsys", "gens": [mat_to_json(s) for s in K.gens]}


def set_from_json(doc):
    from . import ncset
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError("set JSON needs a kind tag")
    kind = doc["kind"]
    try:
        if kind == "pencil":
            preset = doc.get("preset")
            if preset == "interval":
                c, d = doc.get("bounds", [-1.0, 1.0])
                return ncset.interval_set(float(c), float(d))
            if preset == "row_ball":
                return ncset.row_ball_set(int(doc["d"]))
            if preset is not None:
                raise ValueError(f"unknown pencil preset {preset!r}")
            return ncset.pencil_set(mat_from_json(doc["a0"]), [mat_from_json(a) for a in doc["coeffs"]],
                                    hermitian=bool(doc.get("hermitian", True)))
        if kind == "hull":
            return ncset.hull_set([point_from_json(g) for g in doc["generators"]])
        if kind == "opsys":
            return ncset.opsys_set([mat_from_json(s) for s in doc["gens"]])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed {kind} set JSON: missing {exc}") from exc
    raise ValueError(f"unknown set kind {kind!r}")


# --- polynomials ------------------------------------------------------------


def poly_to_json(f) -> dict:
    from .ncfunctions import HT, word_to_str
    if isinstance(f, HT):
        return {"kind": "h_t", "t": float(f.t)}
    terms = sorted(f.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return {"d": f.d, "terms": [{"word": word_to_str(w, f.d), "coeff": [float(c.real), float(c.imag)]}
                                for w, c in terms]}


def poly_from_json(doc):
    """A FreePoly, or h_t given as {"kind": "h_t", "t": t} (optionally with a truncation "degree")."""
    from .ncfunctions import FreePoly, h_t, word_from_str
    if isinstance(doc, dict) and doc.get("kind") == "h_t":
        f = h_t(float(doc["t"]))
        return f.truncation(int(doc["degree"])) if "degree" in doc else f
    try:
        d = int(doc["d"])
        items = doc["terms"]
    except (KeyError, TypeError) as exc:
        raise ValueError("polynomial JSON needs d and terms") from exc
    out = {}
    for t in items:
        c = t["coeff"]
        c = complex(float(c[0]), float(c[1])) if isinstance(c, (list, tuple)) else complex(c)
        w = word_from_str(t["word"], d)
        out[w] = out.get(w, 0) + c
    return FreePoly(d, out)


# --- generic conversion -----------------------------------------------------


def to_jsonable(obj):
    """Recursively convert reports, arrays and numpy scalars into JSON values."""
    from .point import NcPoint
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, NcPoint):
        return point_to_json(obj)
    if hasattr(obj, "isometry") and hasattr(obj, "point"):
        return ucp_to_json(obj)
    if isinstance(obj, np.ndarray):
        return mat_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def load(path):
    """Parse a JSON file, turning decoding problems into ValueError."""
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc
    except OSError as exc:
        raise ValueError(f"{path}: {exc.strerror}") from exc
