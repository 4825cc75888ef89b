"""Polynomial matrices over F[z], generator / parity-check matrices and the sliding parity criterion.

Polynomial codewords use the forward-shift convention: a trajectory
v_0, ..., v_g becomes w(z) = v_0 z^g + v_1 z^(g-1) + ... + v_g, so time 0
carries the highest power.  The sliding matrix criterion is stated for the
delay convention (time t carries z^t); :func:`reverse_rows` converts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, FieldMismatch, NotControllable, NotObservable, RankDeficient
from .distance import code_indices
from .gf import Field, FieldMatrix, _det_rows, rank, right_kernel_basis, solve
from .minors import DEFAULT_MINOR_BUDGET
from .state_space import (
    CodeParams,
    StateSpace,
    _input_array,
    is_controllable,
    is_observable,
    markov_parameters,
    parity_equation_matrix,
    simulate,
    stack_code_vectors,
)

__all__ = [
    "PolyMatrix",
    "SlidingParity",
    "poly_arith",
    "poly_rank",
    "system_polynomial_matrix",
    "poly_right_kernel_basis",
    "generator_matrix",
    "parity_check_matrix",
    "reverse_rows",
    "sliding_parity_matrix",
    "count_constrained_selections",
    "parity_level_criterion",
    "mdp_from_parity",
    "codeword_polynomial",
    "equivalence_conditions",
    "check_equivalences",
]


class PolyMatrix:
    """Matrix of polynomials stored as its coefficient matrices, lowest degree first.

    Trailing zero coefficients are trimmed; the zero matrix has degree -1.
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: int, cols: int, coeffs=()):
        arrs = []
        for c in coeffs:
            if isinstance(c, FieldMatrix):
                if c.field != field:
                    raise FieldMismatch(f"coefficient over {c.field}, matrix over {field}")
                arr = c.data
            else:
                arr = FieldMatrix(field, c, shape=(rows, cols)).data
            if arr.shape != (rows, cols):
                raise DimensionMismatch(f"coefficient of shape {arr.shape}, expected {(rows, cols)}")
            arrs.append(arr)
        data = np.array(arrs, dtype=np.int64).reshape(len(arrs), rows, cols)
        self._init(field, data)

    def _init(self, field, data):
        nz = [l for l in range(data.shape[0]) if data[l].any()]
        data = data[: nz[-1] + 1] if nz else data[:0]
        data = np.array(data, dtype=np.int64)
        data.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", data.shape[1])
        object.__setattr__(self, "cols", data.shape[2])
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def _wrap(cls, field, data):
        self = object.__new__(cls)
        self._init(field, np.asarray(data, dtype=np.int64))
        return self

    @classmethod
    def constant(cls, M: FieldMatrix) -> PolyMatrix:
        return cls._wrap(M.field, M.data[None, :, :])

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> PolyMatrix:
        return cls._wrap(field, np.zeros((0, rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, n: int) -> PolyMatrix:
        return cls._wrap(field, np.eye(n, dtype=np.int64)[None])

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def degree(self) -> int:
        return self.data.shape[0] - 1

    @property
    def coeffs(self) -> list[FieldMatrix]:
        return [FieldMatrix._wrap(self.field, self.data[l].copy()) for l in range(self.data.shape[0])]

    def coefficient(self, l: int) -> FieldMatrix:
        if 0 <= l <= self.degree:
            return FieldMatrix._wrap(self.field, self.data[l].copy())
        return FieldMatrix.zeros(self.field, self.rows, self.cols)

    def is_zero(self) -> bool:
        return self.degree < 0

    @property
    def T(self) -> PolyMatrix:
        return PolyMatrix._wrap(self.field, self.data.transpose(0, 2, 1))

    def column(self, c: int) -> PolyMatrix:
        return PolyMatrix._wrap(self.field, self.data[:, :, c:c + 1])

    def row(self, r: int) -> PolyMatrix:
        return PolyMatrix._wrap(self.field, self.data[:, r:r + 1, :])

    def submatrix(self, rows=None, cols=None) -> PolyMatrix:
        d = self.data
        if rows is not None:
            d = d[:, list(rows), :]
        if cols is not None:
            d = d[:, :, list(cols)]
        return PolyMatrix._wrap(self.field, d)

    def row_degrees(self) -> list[int]:
        out = []
        for r in range(self.rows):
            nz = [l for l in range(self.data.shape[0]) if self.data[l, r].any()]
            out.append(nz[-1] if nz else -1)
        return out

    def col_degrees(self) -> list[int]:
        return self.T.row_degrees()

    def _check(self, other):
        if not isinstance(other, PolyMatrix):
            raise TypeError(f"expected PolyMatrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        L = max(self.data.shape[0], other.data.shape[0])
        a = np.zeros((L, self.rows, self.cols), dtype=np.int64)
        b = a.copy()
        a[: self.data.shape[0]] = self.data
        b[: other.data.shape[0]] = other.data
        return PolyMatrix._wrap(self.field, self.field.vadd(a, b))

    def __neg__(self):
        return PolyMatrix._wrap(self.field, self.field.vneg(self.data))

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        F = self.field
        da, db = self.data.shape[0], other.data.shape[0]
        out = np.zeros((max(da + db - 1, 0), self.rows, other.cols), dtype=np.int64)
        for a in range(da):
            for b in range(db):
                out[a + b] = F.vadd(out[a + b], F.matmul(self.data[a], other.data[b]))
        return PolyMatrix._wrap(F, out)

    def scale_row(self, r: int, c: int) -> PolyMatrix:
        d = self.data.copy()
        d[:, r, :] = self.field.vmul(d[:, r, :], c)
        return PolyMatrix._wrap(self.field, d)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.field, self.shape, self.data.tobytes()))

    def __repr__(self):
        return f"PolyMatrix({self.field}, {self.rows}x{self.cols}, {self.data.tolist()})"

    def to_string(self, var: str = "z", gen: str = "a") -> str:
        """Entries as readable polynomials, e.g. ``[[z + 1, 2z + 1]]``.

        Extension-field coefficients are written in the generator ``gen``,
        e.g. ``(a + 1)z`` over GF(4).
        """
        F = self.field

        def element(c):
            parts = []
            for e, x in reversed(list(enumerate(F.coeffs(c)))):
                if not x:
                    continue
                mono = "" if e == 0 else (gen if e == 1 else f"{gen}^{e}")
                parts.append(str(x) if not mono else (mono if x == 1 else f"{x}{mono}"))
            return parts

        def term(c, l):
            if F.m == 1:
                coef = str(c)
            else:
                parts = element(c)
                coef = parts[0] if len(parts) == 1 and l == 0 else "(" + " + ".join(parts) + ")"
            if l == 0:
                return coef
            mono = var if l == 1 else f"{var}^{l}"
            return mono if c == 1 else f"{coef}{mono}"

        rows = []
        for r in range(self.rows):
            entries = []
            for c in range(self.cols):
                terms = [term(int(self.data[l, r, c]), l) for l in range(self.degree, -1, -1) if self.data[l, r, c]]
                entries.append(" + ".join(terms) if terms else "0")
            rows.append("[" + ", ".join(entries) + "]")
        return "[" + ", ".join(rows) + "]"


def poly_arith(op: str, lhs: PolyMatrix, rhs: PolyMatrix) -> PolyMatrix:
    """Dispatch ``op`` in {'add', 'sub', 'mul'}."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs @ rhs
    raise ValueError(f"unknown polynomial operation {op!r}")


# -- linearization ------------------------------------------------------------------


def _sylvester(M: PolyMatrix, t: int) -> np.ndarray:
    """Matrix of v -> M v on coefficient stacks, v of degree <= t."""
    r, c, d = M.rows, M.cols, max(M.degree, 0)
    out = np.zeros(((d + t + 1) * r, (t + 1) * c), dtype=np.int64)
    for s in range(t + 1):
        for l in range(M.degree + 1):
            out[(l + s) * r:(l + s + 1) * r, s * c:(s + 1) * c] = M.data[l]
    return out


def _shift(vec: np.ndarray, s: int, c: int, t: int) -> np.ndarray:
    out = np.zeros((t + 1) * c, dtype=np.int64)
    out[s * c:s * c + len(vec)] = vec
    return out


def _kernel_vectors(M: PolyMatrix, degree_bound: int) -> list[np.ndarray]:
    """Minimal-degree kernel vectors as flat coefficient stacks, lowest degree first."""
    F, c = M.field, M.cols
    found: list[np.ndarray] = []
    for t in range(degree_bound + 1):
        K = right_kernel_basis(FieldMatrix._wrap(F, _sylvester(M, t)))
        span = [_shift(b, s, c, t) for b in found for s in range(t + 2 - len(b) // c)]
        current = rank(FieldMatrix._wrap(F, np.array(span).T)) if span else 0
        for i in range(K.cols):
            kv = K.data[:, i]
            trial = np.array(span + [kv]).T
            r = rank(FieldMatrix._wrap(F, trial))
            if r > current:
                span.append(kv)
                current = r
                found.append(kv.copy())
    return found


def poly_rank(P: PolyMatrix) -> int:
    """Rank over the rational function field F(z).

    dim ker S_t grows by exactly (cols - rank) per step of t once t exceeds
    the largest degree of a minimal kernel basis, which is at most rows * deg P.
    """
    if P.is_zero():
        return 0
    t = P.rows * P.degree + 1
    F = P.field
    k1 = right_kernel_basis(FieldMatrix._wrap(F, _sylvester(P, t))).cols
    k2 = right_kernel_basis(FieldMatrix._wrap(F, _sylvester(P, t + 1))).cols
    return P.cols - (k2 - k1)


def _vectors_to_poly(F: Field, vecs: list[np.ndarray], c: int) -> PolyMatrix:
    if not vecs:
        return PolyMatrix.zeros(F, c, 0)
    deg = max(len(v) // c for v in vecs)
    data = np.zeros((deg, c, len(vecs)), dtype=np.int64)
    for i, v in enumerate(vecs):
        data[: len(v) // c, :, i] = v.reshape(-1, c)
    return PolyMatrix._wrap(F, data)


def poly_right_kernel_basis(M: PolyMatrix, degree_bound: int) -> PolyMatrix:
    """Columns span the right kernel of M up to degree ``degree_bound``, greedily by degree.

    At each degree t the kernel of the linearized map is compared with the
    span of all shifts z^s b of the columns already chosen; vectors outside
    that span become new columns of degree t.  May return zero columns.
    """
    if degree_bound < 0:
        raise ValueError("degree bound must be non-negative")
    K = _vectors_to_poly(M.field, _kernel_vectors(M, degree_bound), M.cols)
    if not (M @ K).is_zero():
        raise AssertionError("kernel basis does not annihilate M")  # pragma: no cover
    return K


# -- state space to polynomial ------------------------------------------------------------


def system_polynomial_matrix(sys: StateSpace) -> PolyMatrix:
    """M(z) = [[zI - A, 0, -B], [-C, I, -D]], columns ordered (x, y, u)."""
    F = sys.field
    d, p, k = sys.delta, sys.params.n_minus_k, sys.k
    Z = FieldMatrix.zeros
    M0 = FieldMatrix.block([[-sys.A, Z(F, d, p), -sys.B], [-sys.C, FieldMatrix.identity(F, p), -sys.D]])
    M1 = FieldMatrix.block([[FieldMatrix.identity(F, d), Z(F, d, p + k)], [Z(F, p, d), Z(F, p, p + k)]])
    return PolyMatrix(F, d + p, d + p + k, [M0, M1])


def _leading_normalize_cols(P: PolyMatrix) -> PolyMatrix:
    F = P.field
    data = P.data.copy()
    for c, deg in enumerate(P.col_degrees()):
        if deg < 0:
            continue
        lead = data[deg, :, c]
        first = int(lead[np.nonzero(lead)[0][0]])
        data[:, :, c] = F.vmul(data[:, :, c], F.inv(first))
    return PolyMatrix._wrap(F, data)


def _require_minimal(sys: StateSpace):
    if not is_controllable(sys):
        raise NotControllable("(A, B) is not controllable")
    if not is_observable(sys):
        raise NotObservable("(A, C) is not observable")


def generator_matrix(sys: StateSpace) -> PolyMatrix:
    """n x k polynomial generator G(z) with rows ordered (y, u).

    Columns are the (y, u) parts of a minimal right kernel basis of
    :func:`system_polynomial_matrix`, scaled so that the first nonzero entry
    of each column's highest coefficient is 1.
    """
    _require_minimal(sys)
    M = system_polynomial_matrix(sys)
    K = poly_right_kernel_basis(M, sys.delta)
    if K.cols < sys.k:
        raise RankDeficient(f"kernel has {K.cols} columns at degree bound {sys.delta}, expected {sys.k}")
    G = K.submatrix(rows=range(sys.delta, sys.delta + sys.n))
    return _leading_normalize_cols(G)


def parity_check_matrix(sys: StateSpace, G: PolyMatrix | None = None) -> PolyMatrix:
    """(n-k) x n polynomial parity check H(z) with H G = 0, columns ordered (y, u).

    Rows are a minimal left kernel basis of G, scaled like the columns of G.
    A constant H with invertible y-block is brought to the form [-I | X].
    """
    if G is None:
        G = generator_matrix(sys)
    p = sys.params.n_minus_k
    K = poly_right_kernel_basis(G.T, sys.delta)
    if K.cols < p:
        raise RankDeficient(f"left kernel has {K.cols} rows at degree bound {sys.delta}, expected {p}")
    H = _leading_normalize_cols(K).T
    if H.degree == 0:
        Hy = FieldMatrix._wrap(sys.field, H.data[0][:, :p].copy())
        if rank(Hy) == p:
            X = solve(Hy, -FieldMatrix._wrap(sys.field, H.data[0].copy()))
            H = PolyMatrix.constant(X)
    if not (H @ G).is_zero():
        raise AssertionError("H G is not zero")  # pragma: no cover
    return H


# -- sliding parity criterion --------------------------------------------------------------


def reverse_rows(H: PolyMatrix) -> PolyMatrix:
    """Replace each row h_i(z) by z^mu_i h_i(1/z), mu_i its degree (forward to delay convention)."""
    data = np.zeros_like(H.data)
    for r, mu in enumerate(H.row_degrees()):
        if mu >= 0:
            data[: mu + 1, r, :] = H.data[mu::-1, r, :]
    return PolyMatrix._wrap(H.field, data)


@dataclass(frozen=True)
class SlidingParity:
    H: PolyMatrix
    j: int
    matrix: FieldMatrix


def sliding_parity_matrix(H: PolyMatrix, j: int) -> SlidingParity:
    """Lower block-triangular matrix with block (r, c) = H_{r-c}."""
    if j < 0:
        raise ValueError("j must be non-negative")
    r, n = H.rows, H.cols
    out = np.zeros(((j + 1) * r, (j + 1) * n), dtype=np.int64)
    for br in range(j + 1):
        for bc in range(br + 1):
            l = br - bc
            if l <= H.degree:
                out[br * r:(br + 1) * r, bc * n:(bc + 1) * n] = H.data[l]
    return SlidingParity(H, j, FieldMatrix._wrap(H.field, out))


def _constrained_selections(j: int, n: int, p: int):
    """Column sets i_1 < ... < i_{(j+1)p} of the sliding matrix with i_{sp} <= sn for s = 1..j."""
    total, size = (j + 1) * n, (j + 1) * p

    def rec(prefix, start):
        t = len(prefix)
        if t == size:
            yield tuple(prefix)
            return
        # the (t+1)-th index is i_{t+1}; a constraint applies when t+1 is a multiple of p
        s, rem = divmod(t + 1, p)
        hi = total - (size - t - 1)
        if rem == 0 and s <= j:
            hi = min(hi, s * n)
        for i in range(start, hi + 1):
            prefix.append(i)
            yield from rec(prefix, i + 1)
            prefix.pop()

    yield from rec([], 1)


def count_constrained_selections(j: int, n: int, p: int) -> int:
    total, size = (j + 1) * n, (j + 1) * p
    # ways[t][i]: t indices chosen, the last one equal to i
    ways = [[0] * (total + 1) for _ in range(size + 1)]
    ways[0][0] = 1
    for t in range(1, size + 1):
        s, rem = divmod(t, p)
        hi = s * n if rem == 0 and s <= j else total
        acc = 0
        for i in range(1, total + 1):
            acc += ways[t - 1][i - 1]
            if i <= hi:
                ways[t][i] = acc
    return sum(ways[size])


def _as_delay(H: PolyMatrix, convention: str) -> PolyMatrix:
    if convention == "forward":
        return reverse_rows(H)
    if convention == "delay":
        return H
    raise ValueError(f"convention must be 'forward' or 'delay', got {convention!r}")


def parity_level_criterion(
    H: PolyMatrix, params: CodeParams, j: int, *, convention: str = "forward", budget: int | None = None
) -> bool:
    """True iff every constrained full-size minor of the level-j sliding matrix is nonzero.

    This is the parity-side test for d_j = (n-k)(j+1) + 1.
    """
    n, p = params.n, params.n_minus_k
    if H.shape != (p, n):
        raise DimensionMismatch(f"H must be {p}x{n}, got {H.rows}x{H.cols}")
    budget = DEFAULT_MINOR_BUDGET if budget is None else budget
    needed = count_constrained_selections(j, n, p)
    if needed > budget:
        raise BudgetExceeded(f"constrained full-size minors at level {j}", needed, budget)
    S = sliding_parity_matrix(_as_delay(H, convention), j).matrix
    rows = S.data.tolist()
    F = H.field
    for cols in _constrained_selections(j, n, p):
        sub = [[row[c - 1] for c in cols] for row in rows]
        if _det_rows(sub, F) == 0:
            return False
    return True


def mdp_from_parity(
    H: PolyMatrix, params: CodeParams, *, convention: str = "forward", budget: int | None = None
) -> bool:
    """MDP verdict from the sliding parity-check matrix at level L.

    ``convention="forward"`` (the output of :func:`parity_check_matrix`)
    reverses each row first; pass ``"delay"`` for an H that already maps
    v(z) = sum v_t z^t to zero.
    """
    L = code_indices(params).L
    return parity_level_criterion(H, params, L, convention=convention, budget=budget)


# -- equivalence checks -----------------------------------------------------------------


def codeword_polynomial(field: Field, vectors) -> PolyMatrix:
    """Column w(z) = sum_t v_t z^(g - t) for code vectors v_0..v_g (rows of ``vectors``)."""
    V = np.asarray(vectors, dtype=np.int64)
    if V.ndim != 2:
        raise DimensionMismatch("expected a 2-d array of code vectors")
    return PolyMatrix._wrap(field, V[::-1, :, None])


def equivalence_conditions(sys: StateSpace, inputs, H: PolyMatrix | None = None) -> dict:
    """Evaluate the five characterizations of "(y, u) is a finite codeword" on one input sequence.

    The inputs u_0..u_g are followed by zeros.  ``state_space``: the
    trajectory returns to the zero state.  ``parity_equation``: the parity
    equations hold on the data zero-padded by delta steps.  ``polynomial_state``:
    x(z) built from the simulated states satisfies M(z)(x; y; u) = 0.
    ``parity_check``: H(z) w(z) = 0.  ``transfer``: T(z) u(z) equals y(z) as a
    Laurent series, with no negative powers down to z^(-delta).
    """
    F = sys.field
    U = _input_array(sys, inputs)
    g = U.shape[0] - 1
    d, p = sys.delta, sys.params.n_minus_k
    states, ys = simulate(sys, U)
    V = np.hstack([ys, U])
    out = {}

    out["state_space"] = not states[-1].any()

    # stacked parity equations [-I | T] on the data zero-padded to horizon g + delta
    horizon = g + d
    Vpad = np.vstack([V, np.zeros((d, sys.n), dtype=np.int64)])
    ms = markov_parameters(sys, horizon)
    P = parity_equation_matrix(ms)
    stacked = stack_code_vectors(Vpad, p)[:, None]
    out["parity_equation"] = not F.matmul(P.data, stacked).any()

    # M(z) (x; y; u) with x(z) = sum_{t=0..g} x_t z^(g-t); the z^0 residual is -x_{g+1}
    M = system_polynomial_matrix(sys)
    xyu = np.hstack([states[: g + 1], V])
    out["polynomial_state"] = (M @ codeword_polynomial(F, xyu)).is_zero()

    if H is None:
        H = parity_check_matrix(sys)
    out["parity_check"] = (H @ codeword_polynomial(F, V)).is_zero()

    # T(z) u(z) = D u(z) + sum_i F_i z^(-i) u(z); coefficient of z^(g - s) is sum_i F_i u_{s-i}
    series = np.zeros((horizon + 1, p), dtype=np.int64)
    for s in range(horizon + 1):
        for i in range(max(0, s - g), s + 1):
            series[s] = F.vadd(series[s], F.matmul(ms.blocks[i].data, U[s - i]))
    out["transfer"] = bool(np.array_equal(series[: g + 1], ys)) and not series[g + 1:].any()
    return out


def check_equivalences(sys: StateSpace, inputs, H: PolyMatrix | None = None) -> bool:
    """True iff all five characterizations agree on the given input sequence."""
    values = set(equivalence_conditions(sys, inputs, H).values())
    return len(values) == 1
