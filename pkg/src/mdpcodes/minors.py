"""Minors of the block Toeplitz matrix T_j and the superregularity criterion.

Rows of T_j are indexed by parity positions, columns by information
positions, both 1-based.  Entry (i, c) lies above the block diagonal, and is
therefore identically zero, exactly when ``c > ceil(i / (n-k)) * k``.  A
minor is trivially zero iff one of its diagonal entries is such a
structural zero; the criterion asks that every other minor be nonzero.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, IndexOutOfRange, NotStrictlyIncreasing, ShapeMismatch
from .gf import Field, FieldMatrix, _det_rows, field_create

__all__ = [
    "MinorIndex",
    "structural_zero",
    "is_trivially_zero",
    "enumerate_nontrivial_minors",
    "count_nontrivial_minors",
    "all_nontrivial_minors_nonzero",
    "first_vanishing_minor",
    "leading_block",
    "symbolic_trivially_zero_oracle",
    "DEFAULT_MINOR_BUDGET",
]

DEFAULT_MINOR_BUDGET = 2**24


@dataclass(frozen=True, order=True)
class MinorIndex:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(i) for i in self.rows))
        object.__setattr__(self, "cols", tuple(int(i) for i in self.cols))
        if len(self.rows) != len(self.cols) or not self.rows:
            raise ValueError("row and column index lists must have equal positive length")
        for seq in (self.rows, self.cols):
            if any(b <= a for a, b in zip(seq, seq[1:])):
                raise NotStrictlyIncreasing(f"indices must be strictly increasing: {seq}")
            if seq[0] < 1:
                raise IndexOutOfRange("indices are 1-based")

    @property
    def size(self) -> int:
        return len(self.rows)

    def to_dict(self):
        return {"rows": list(self.rows), "cols": list(self.cols)}

    @classmethod
    def from_dict(cls, d) -> MinorIndex:
        return cls(tuple(d["rows"]), tuple(d["cols"]))


def _col_bound(i: int, n: int, k: int) -> int:
    return math.ceil(i / (n - k)) * k


def structural_zero(i: int, jc: int, n: int, k: int) -> bool:
    """True iff entry (i, jc) of T_j sits above the block diagonal."""
    return jc > _col_bound(i, n, k)


def is_trivially_zero(idx: MinorIndex, n: int, k: int) -> bool:
    return any(c > _col_bound(i, n, k) for i, c in zip(idx.rows, idx.cols))


def _check_size(j, n, k, r):
    R, C = (j + 1) * (n - k), (j + 1) * k
    if not 1 <= r <= min(R, C):
        raise ValueError(f"minor size {r} outside 1..{min(R, C)} for T_{j}")
    return R, C


def enumerate_nontrivial_minors(j: int, n: int, k: int, r: int) -> Iterator[MinorIndex]:
    """All size-r indices of T_j that are not trivially zero, lexicographic in (rows, cols)."""
    R, C = _check_size(j, n, k, r)
    bound = [0] + [min(_col_bound(i, n, k), C) for i in range(1, R + 1)]

    def rows_rec(prefix, start):
        t = len(prefix)
        if t == r:
            yield tuple(prefix)
            return
        for i in range(start, R - (r - t) + 2):
            # column j_{t+1} >= t+1 must fit under the bound of row i
            if bound[i] < t + 1:
                continue
            prefix.append(i)
            yield from rows_rec(prefix, i + 1)
            prefix.pop()

    def cols_rec(rows, prefix, start):
        t = len(prefix)
        if t == r:
            yield tuple(prefix)
            return
        hi = min(bound[rows[t]], C - (r - t - 1))
        for c in range(start, hi + 1):
            prefix.append(c)
            yield from cols_rec(rows, prefix, c + 1)
            prefix.pop()

    for rows in rows_rec([], 1):
        for cols in cols_rec(rows, [], 1):
            yield MinorIndex(rows, cols)


def count_nontrivial_minors(j: int, n: int, k: int, r: int | None = None) -> int:
    """Number of non-trivially-zero minors of T_j (of size r, or of every size)."""
    R, C = (j + 1) * (n - k), (j + 1) * k
    sizes = [r] if r is not None else range(1, min(R, C) + 1)
    total = 0
    for size in sizes:
        _check_size(j, n, k, size)
        # ways[t][c]: t rows chosen so far, last chosen column c
        ways = [[0] * (C + 1) for _ in range(size + 1)]
        ways[0][0] = 1
        for i in range(1, R + 1):
            b = min(_col_bound(i, n, k), C)
            for t in range(min(size, i), 0, -1):
                prefix = list(itertools.accumulate(ways[t - 1]))
                for c in range(t, b + 1):
                    ways[t][c] += prefix[c - 1]
        total += sum(ways[size])
    return total


def leading_block(T: FieldMatrix, n: int, k: int, j: int) -> FieldMatrix:
    """T_j as the leading submatrix of a larger T_J."""
    p = n - k
    return FieldMatrix._wrap(T.field, T.data[: (j + 1) * p, : (j + 1) * k].copy())


def _check_shape(T: FieldMatrix, n: int, k: int, j: int):
    p = n - k
    shape = ((j + 1) * p, (j + 1) * k)
    if T.shape != shape:
        raise ShapeMismatch(f"T_{j} for (n,k)=({n},{k}) must be {shape}, got {T.shape}")
    # everything above the block diagonal must vanish
    for br in range(j + 1):
        if T.data[br * p:(br + 1) * p, (br + 1) * k:].any():
            raise ShapeMismatch("matrix does not have lower block-triangular support")


def _iter_vanishing(T: FieldMatrix, n: int, k: int, j: int, budget: int | None):
    _check_shape(T, n, k, j)
    budget = DEFAULT_MINOR_BUDGET if budget is None else budget
    needed = count_nontrivial_minors(j, n, k)
    if needed > budget:
        raise BudgetExceeded("non-trivial minors of T_%d" % j, needed, budget)
    field = T.field
    Tl = T.data.tolist()
    for r in range(1, min(T.rows, T.cols) + 1):
        for idx in enumerate_nontrivial_minors(j, n, k, r):
            sub = [[Tl[i - 1][c - 1] for c in idx.cols] for i in idx.rows]
            if _det_rows(sub, field) == 0:
                yield idx


def first_vanishing_minor(T: FieldMatrix, n: int, k: int, j: int, budget: int | None = None) -> MinorIndex | None:
    """First non-trivially-zero index whose minor vanishes (by size, then lexicographic)."""
    return next(_iter_vanishing(T, n, k, j, budget), None)


def all_nontrivial_minors_nonzero(T: FieldMatrix, n: int, k: int, j: int, budget: int | None = None) -> bool:
    return first_vanishing_minor(T, n, k, j, budget) is None


def vanishing_minors(T: FieldMatrix, n: int, k: int, j: int, budget: int | None = None) -> list[MinorIndex]:
    """Every vanishing non-trivially-zero minor, in enumeration order."""
    return list(_iter_vanishing(T, n, k, j, budget))


# -- ring-level oracle ------------------------------------------------------------


def _generic_entry(row: int, col: int, n: int, k: int):
    """Indeterminate number of entry (row, col) of the generic T_j, or None for a structural zero."""
    p = n - k
    br, s = divmod(row - 1, p)
    bc, t = divmod(col - 1, k)
    i = br - bc
    if i < 0:
        return None
    return i * p * k + s * k + (t + 1)


def _poly_det(mat, modulus):
    """Determinant of a matrix of polynomials {monomial: coeff} by cofactor expansion."""
    n = len(mat)
    if n == 0:
        return {(): 1}
    result = {}
    for c in range(n):
        entry = mat[0][c]
        if not entry:
            continue
        minor = [row[:c] + row[c + 1:] for row in mat[1:]]
        sub = _poly_det(minor, modulus)
        sign = -1 if c % 2 else 1
        for m1, a in entry.items():
            for m2, b in sub.items():
                mono = tuple(sorted(m1 + m2))
                result[mono] = result.get(mono, 0) + sign * a * b
    if modulus:
        result = {m: v % modulus for m, v in result.items()}
    return {m: v for m, v in result.items() if v}


def symbolic_trivially_zero_oracle(
    idx: MinorIndex,
    j: int,
    n: int,
    k: int,
    *,
    method: str = "exact",
    characteristic: int = 0,
    field: Field | None = None,
    trials: int = 20,
    seed: int = 0,
) -> bool:
    """Decide whether the minor vanishes identically in the generic entries of T_j.

    ``method="exact"`` expands the determinant over Z (``characteristic=0``)
    or over GF(p).  ``method="montecarlo"`` evaluates it at ``trials`` random
    points of ``field`` (default GF(101)) and declares it zero only if every
    evaluation vanishes.
    """
    R, C = (j + 1) * (n - k), (j + 1) * k
    if idx.rows[-1] > R or idx.cols[-1] > C:
        raise IndexOutOfRange(f"{idx} outside the {R}x{C} matrix T_{j}")
    entries = [[_generic_entry(i, c, n, k) for c in idx.cols] for i in idx.rows]
    if method == "exact":
        mat = [[{(v,): 1} if v is not None else {} for v in row] for row in entries]
        return not _poly_det(mat, characteristic)
    if method == "montecarlo":
        field = field or field_create(101)
        if field.q < 2 * idx.size:
            raise ValueError("field too small for a meaningful identity test")
        rng = np.random.default_rng(seed)
        nvars = (j + 1) * (n - k) * k
        for _ in range(trials):
            point = field.random(rng, nvars + 1)
            sub = [[int(point[v]) if v is not None else 0 for v in row] for row in entries]
            if _det_rows(sub, field) != 0:
                return False
        return True
    raise ValueError(f"unknown oracle method {method!r}")


def all_index_pairs(j: int, n: int, k: int, r: int) -> Iterator[MinorIndex]:
    """Every size-r index pair of T_j, trivially zero or not."""
    R, C = _check_size(j, n, k, r)
    for rows in itertools.combinations(range(1, R + 1), r):
        for cols in itertools.combinations(range(1, C + 1), r):
            yield MinorIndex(rows, cols)


def minor_sizes(j: int, n: int, k: int) -> Sequence[int]:
    return range(1, min((j + 1) * (n - k), (j + 1) * k) + 1)
