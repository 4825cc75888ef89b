"""JSON serialization of fields, matrices, codes, Markov sequences and polynomial matrices.

Prime-field entries are bare integers; extension-field entries are
coefficient lists, lowest degree first.  Every reader raises
:class:`FormatError` whose ``field`` attribute names the offending key.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import FormatError, MDPError
from .gf import Field, FieldMatrix, field_create
from .minors import MinorIndex
from .poly import PolyMatrix
from .state_space import CodeParams, MarkovSequence, StateSpace

__all__ = [
    "field_to_json",
    "field_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "system_to_json",
    "system_from_json",
    "markov_to_json",
    "markov_from_json",
    "poly_to_json",
    "poly_from_json",
    "minor_from_json",
    "load_json",
    "dumps",
    "read_system",
    "read_markov",
]


def _int(obj, name, lo=None):
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise FormatError(f"{name}: expected an integer, got {obj!r}", name)
    if lo is not None and obj < lo:
        raise FormatError(f"{name}: must be >= {lo}, got {obj}", name)
    return obj


def _get(obj, key, where=""):
    name = f"{where}.{key}" if where else key
    if not isinstance(obj, dict):
        raise FormatError(f"{where or 'document'}: expected an object", where or None)
    if key not in obj:
        raise FormatError(f"missing key {name!r}", name)
    return obj[key]


# -- fields and matrices ----------------------------------------------------------


def field_to_json(F: Field) -> dict:
    out = {"p": F.p, "m": F.m}
    if F.m > 1:
        out["modulus"] = list(F.modulus)
    return out


def field_from_json(obj, where: str = "field") -> Field:
    p = _int(_get(obj, "p", where), f"{where}.p", 2)
    m = _int(obj.get("m", 1), f"{where}.m", 1)
    modulus = obj.get("modulus")
    if modulus is not None:
        if not isinstance(modulus, list):
            raise FormatError(f"{where}.modulus: expected a list", f"{where}.modulus")
        modulus = [_int(c, f"{where}.modulus") for c in modulus]
    try:
        return field_create(p, m, tuple(modulus) if modulus is not None and m > 1 else None)
    except (MDPError, ValueError) as exc:
        raise FormatError(f"{where}: {exc}", where) from exc


def _entry_to_json(F: Field, a: int):
    return int(a) if F.m == 1 else F.coeffs(int(a))


def _entry_from_json(F: Field, x, name: str) -> int:
    if F.m > 1 and isinstance(x, list):
        if len(x) > F.m:
            raise FormatError(f"{name}: at most {F.m} coefficients allowed", name)
        cs = [_int(c, name, 0) for c in x]
        if any(c >= F.p for c in cs):
            raise FormatError(f"{name}: coefficients must lie in [0, {F.p})", name)
        return F.from_coeffs(cs)
    v = _int(x, name, 0)
    if v >= F.q:
        raise FormatError(f"{name}: entry {v} outside [0, {F.q})", name)
    return v


def _entries_to_json(M: FieldMatrix) -> list:
    return [[_entry_to_json(M.field, a) for a in row] for row in M.data.tolist()]


def matrix_to_json(M: FieldMatrix) -> dict:
    return {"rows": M.rows, "cols": M.cols, "entries": _entries_to_json(M)}


def _entries_from_json(F: Field, rows_obj, shape, name: str) -> FieldMatrix:
    r, c = shape
    if not isinstance(rows_obj, list) or len(rows_obj) != r:
        raise FormatError(f"{name}: expected {r} rows", name)
    out = np.zeros((r, c), dtype=np.int64)
    for i, row in enumerate(rows_obj):
        if not isinstance(row, list) or len(row) != c:
            raise FormatError(f"{name}[{i}]: expected {c} entries", f"{name}[{i}]")
        for j, x in enumerate(row):
            out[i, j] = _entry_from_json(F, x, f"{name}[{i}][{j}]")
    return FieldMatrix._wrap(F, out)


def matrix_from_json(obj, F: Field, shape=None, name: str = "matrix") -> FieldMatrix:
    """Read either ``{"rows", "cols", "entries"}`` or a bare nested list."""
    if isinstance(obj, dict):
        r = _int(_get(obj, "rows", name), f"{name}.rows", 0)
        c = _int(_get(obj, "cols", name), f"{name}.cols", 0)
        if shape is not None and (r, c) != tuple(shape):
            raise FormatError(f"{name}: shape {(r, c)} but {tuple(shape)} expected", name)
        return _entries_from_json(F, _get(obj, "entries", name), (r, c), f"{name}.entries")
    if shape is None:
        if not isinstance(obj, list) or not obj or not isinstance(obj[0], list):
            raise FormatError(f"{name}: cannot infer the shape", name)
        shape = (len(obj), len(obj[0]))
    return _entries_from_json(F, obj, shape, name)


# -- codes and sequences --------------------------------------------------------------


def system_to_json(sys: StateSpace) -> dict:
    return {
        "field": field_to_json(sys.field),
        "n": sys.n,
        "k": sys.k,
        "delta": sys.delta,
        "A": _entries_to_json(sys.A),
        "B": _entries_to_json(sys.B),
        "C": _entries_to_json(sys.C),
        "D": _entries_to_json(sys.D),
    }


def system_from_json(obj) -> StateSpace:
    F = field_from_json(_get(obj, "field"))
    n = _int(_get(obj, "n"), "n", 2)
    k = _int(_get(obj, "k"), "k", 1)
    d = _int(_get(obj, "delta"), "delta", 0)
    if k >= n:
        raise FormatError("k: must be smaller than n", "k")
    p = n - k
    shapes = {"A": (d, d), "B": (d, k), "C": (p, d), "D": (p, k)}
    mats = {key: matrix_from_json(_get(obj, key), F, shape, key) for key, shape in shapes.items()}
    return StateSpace(CodeParams(n, k, d), F, **mats)


def markov_to_json(ms: MarkovSequence) -> dict:
    return {
        "field": field_to_json(ms.field),
        "n": ms.n_minus_k + ms.k,
        "k": ms.k,
        "blocks": [_entries_to_json(b) for b in ms.blocks],
    }


def markov_from_json(obj) -> MarkovSequence:
    F = field_from_json(_get(obj, "field"))
    n = _int(_get(obj, "n"), "n", 2)
    k = _int(_get(obj, "k"), "k", 1)
    if k >= n:
        raise FormatError("k: must be smaller than n", "k")
    blocks = _get(obj, "blocks")
    if not isinstance(blocks, list) or not blocks:
        raise FormatError("blocks: expected a non-empty list", "blocks")
    mats = tuple(matrix_from_json(b, F, (n - k, k), f"blocks[{i}]") for i, b in enumerate(blocks))
    return MarkovSequence(F, n - k, k, mats)


def poly_to_json(P: PolyMatrix) -> dict:
    return {"rows": P.rows, "cols": P.cols, "coeffs": [_entries_to_json(c) for c in P.coeffs]}


def poly_from_json(obj, F: Field, name: str = "poly") -> PolyMatrix:
    r = _int(_get(obj, "rows", name), f"{name}.rows", 0)
    c = _int(_get(obj, "cols", name), f"{name}.cols", 0)
    coeffs = _get(obj, "coeffs", name)
    if not isinstance(coeffs, list):
        raise FormatError(f"{name}.coeffs: expected a list", f"{name}.coeffs")
    mats = [matrix_from_json(m, F, (r, c), f"{name}.coeffs[{l}]") for l, m in enumerate(coeffs)]
    return PolyMatrix(F, r, c, mats)


def minor_from_json(obj, name: str = "minor") -> MinorIndex:
    rows, cols = _get(obj, "rows", name), _get(obj, "cols", name)
    try:
        return MinorIndex(tuple(_int(i, f"{name}.rows") for i in rows), tuple(_int(i, f"{name}.cols") for i in cols))
    except (MDPError, ValueError, IndexError) as exc:
        raise FormatError(f"{name}: {exc}", name) from exc


# -- files ------------------------------------------------------------------------------


def load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}", "path") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}", "json") from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def read_system(path) -> StateSpace:
    return system_from_json(load_json(path))


def read_markov(path) -> MarkovSequence:
    return markov_from_json(load_json(path))
