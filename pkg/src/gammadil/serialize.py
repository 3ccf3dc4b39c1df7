"""JSON encoders/decoders for matrices, pairs, polynomials, grids and dilations.

Complex numbers are ``[re, im]`` pairs; matrices are row-major. ``dumps``
uses sorted keys and ``repr``-exact floats, so identical objects always
produce identical bytes.
"""

import json

import numpy as np

from .dilation import TruncatedDilation
from .gamma import BivariatePolynomial, GammaPair
from .hardy import CoeffGrid

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "pair_to_json",
    "pair_from_json",
    "polynomial_to_json",
    "polynomial_from_json",
    "grid_to_json",
    "grid_from_json",
    "dilation_to_json",
    "dilation_from_json",
    "dumps",
]


def _c(z):
    z = complex(z)
    return [z.real, z.imag]


def _parse_complex(item):
    if not isinstance(item, (list, tuple)) or len(item) != 2:
        raise ValueError(f"complex entry must be [re, im], got {item!r}")
    re, im = item
    if isinstance(re, bool) or isinstance(im, bool):
        raise ValueError("complex entry parts must be numbers")
    return complex(float(re), float(im))


def _count(obj, key):
    value = obj.get(key) if isinstance(obj, dict) else None
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ValueError(f"field {key!r} must be a non-negative integer")
    return value


def matrix_to_json(A) -> dict:
    A = np.atleast_2d(np.asarray(A, dtype=np.complex128))
    rows, cols = A.shape
    return {"rows": rows, "cols": cols, "data": [_c(z) for z in A.reshape(-1)]}


def matrix_from_json(obj) -> np.ndarray:
    rows, cols = _count(obj, "rows"), _count(obj, "cols")
    data = obj.get("data")
    if not isinstance(data, list) or len(data) != rows * cols:
        got = len(data) if isinstance(data, list) else type(data).__name__
        raise ValueError(f"matrix data must have {rows * cols} entries, got {got}")
    return np.array([_parse_complex(x) for x in data], dtype=np.complex128).reshape(rows, cols)


def pair_to_json(pair: GammaPair) -> dict:
    return {"S": matrix_to_json(pair.S), "P": matrix_to_json(pair.P)}


def pair_from_json(obj, validate=False) -> GammaPair:
    if not isinstance(obj, dict) or "S" not in obj or "P" not in obj:
        raise ValueError("pair JSON needs 'S' and 'P'")
    pair = GammaPair(matrix_from_json(obj["S"]), matrix_from_json(obj["P"]))
    if validate:
        pair.validate()
    return pair


def polynomial_to_json(poly: BivariatePolynomial) -> dict:
    terms = [{"m": m, "n": n, "c": _c(c)} for (m, n), c in sorted(poly.coeffs.items())]
    return {"terms": terms}


def polynomial_from_json(obj) -> BivariatePolynomial:
    terms = obj.get("terms") if isinstance(obj, dict) else None
    if not isinstance(terms, list):
        raise ValueError("polynomial JSON needs a 'terms' list")
    coeffs = {}
    for t in terms:
        key = (_count(t, "m"), _count(t, "n"))
        coeffs[key] = coeffs.get(key, 0j) + _parse_complex(t.get("c"))
    return BivariatePolynomial(coeffs)


def grid_to_json(g: CoeffGrid) -> dict:
    return {"d": g.d, "a": [_c(z) for z in g.a.reshape(-1)]}


def grid_from_json(obj) -> CoeffGrid:
    d = _count(obj, "d")
    a = obj.get("a")
    if not isinstance(a, list) or len(a) != d * d:
        raise ValueError(f"grid data must have {d * d} entries")
    return CoeffGrid(np.array([_parse_complex(x) for x in a], dtype=np.complex128).reshape(d, d))


def dilation_to_json(d: TruncatedDilation) -> dict:
    return {
        "depth": d.depth,
        "dims": {"H": d.n_h, "D_P": d.k_p, "D_Pstar": d.k_s},
        "V": matrix_to_json(d.V),
        "T_F": matrix_to_json(d.T_F),
        "U": matrix_to_json(d.U),
        "R": matrix_to_json(d.R),
    }


def dilation_from_json(obj) -> TruncatedDilation:
    dims = obj["dims"]
    return TruncatedDilation(
        depth=_count(obj, "depth"),
        n_h=_count(dims, "H"),
        k_p=_count(dims, "D_P"),
        k_s=_count(dims, "D_Pstar"),
        V=matrix_from_json(obj["V"]),
        T_F=matrix_from_json(obj["T_F"]),
        U=matrix_from_json(obj["U"]),
        R=matrix_from_json(obj["R"]),
    )


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=None, separators=(",", ":"))
