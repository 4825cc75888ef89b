"""Input-state-output representation of a rate k/n convolutional code.

A code of degree ``delta`` is the behaviour of

    x_{t+1} = A x_t + B u_t,    y_t = C x_t + D u_t,    x_0 = 0,

with code vectors ``v_t = (y_t, u_t)``: parity part first, information part
second.  That ordering is used by every module and file format.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, FieldMismatch, InsufficientBlocks
from .gf import Field, FieldElement, FieldMatrix, rank, solve

__all__ = [
    "CodeParams",
    "StateSpace",
    "MarkovSequence",
    "markov_parameters",
    "toeplitz_matrix",
    "hankel_matrix",
    "parity_equation_matrix",
    "simulate",
    "encode",
    "encode_batch",
    "terminate_inputs",
    "controllability_matrix",
    "observability_matrix",
    "is_controllable",
    "is_observable",
    "pad_realization",
    "random_system",
]


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    delta: int

    def __post_init__(self):
        if self.k < 1 or self.n <= self.k:
            raise ValueError(f"need 1 <= k < n, got n={self.n}, k={self.k}")
        if self.delta < 0:
            raise ValueError(f"degree must be non-negative, got {self.delta}")

    @property
    def n_minus_k(self) -> int:
        return self.n - self.k

    def as_dict(self):
        return {"n": self.n, "k": self.k, "delta": self.delta}


@dataclass(frozen=True)
class StateSpace:
    params: CodeParams
    field: Field
    A: FieldMatrix
    B: FieldMatrix
    C: FieldMatrix
    D: FieldMatrix

    def __post_init__(self):
        n, k, d = self.params.n, self.params.k, self.params.delta
        p = n - k
        expected = {"A": (d, d), "B": (d, k), "C": (p, d), "D": (p, k)}
        for name, shape in expected.items():
            mat = getattr(self, name)
            if mat.field != self.field:
                raise FieldMismatch(f"{name} is over {mat.field}, system over {self.field}")
            if mat.shape != shape:
                raise DimensionMismatch(f"{name} has shape {mat.shape}, expected {shape}")

    @classmethod
    def from_lists(cls, field: Field, A, B, C, D, n: int | None = None, k: int | None = None) -> StateSpace:
        """Build a system from nested lists; n and k default to the shape of D."""
        Dm = FieldMatrix(field, D)
        if n is None or k is None:
            k = Dm.cols
            n = Dm.rows + k
        delta = len(A)
        p = n - k
        return cls(
            CodeParams(n, k, delta),
            field,
            FieldMatrix(field, A, shape=(delta, delta)),
            FieldMatrix(field, B, shape=(delta, k)),
            FieldMatrix(field, C, shape=(p, delta)),
            FieldMatrix(field, D, shape=(p, k)),
        )

    @property
    def n(self):
        return self.params.n

    @property
    def k(self):
        return self.params.k

    @property
    def delta(self):
        return self.params.delta


@dataclass(frozen=True)
class MarkovSequence:
    """Impulse-response blocks ``F_0 = D`` and ``F_i = C A^{i-1} B``."""

    field: Field
    n_minus_k: int
    k: int
    blocks: tuple[FieldMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        for i, F in enumerate(self.blocks):
            if F.field != self.field:
                raise FieldMismatch(f"block {i} is over {F.field}")
            if F.shape != (self.n_minus_k, self.k):
                raise DimensionMismatch(f"block {i} has shape {F.shape}, expected {(self.n_minus_k, self.k)}")

    @classmethod
    def from_lists(cls, field: Field, blocks) -> MarkovSequence:
        mats = [FieldMatrix(field, b) for b in blocks]
        if not mats:
            raise InsufficientBlocks("need at least one block")
        return cls(field, mats[0].rows, mats[0].cols, tuple(mats))

    @property
    def j(self) -> int:
        return len(self.blocks) - 1

    def __len__(self):
        return len(self.blocks)

    def __getitem__(self, i) -> FieldMatrix:
        return self.blocks[i]

    def truncated(self, j: int) -> MarkovSequence:
        if j > self.j:
            raise InsufficientBlocks(f"sequence has blocks up to F_{self.j}, F_{j} requested")
        return MarkovSequence(self.field, self.n_minus_k, self.k, self.blocks[: j + 1])


def markov_parameters(sys: StateSpace, j: int) -> MarkovSequence:
    if j < 0:
        raise ValueError("j must be non-negative")
    blocks = [sys.D]
    AiB = sys.B
    for _ in range(j):
        blocks.append(sys.C @ AiB)
        AiB = sys.A @ AiB
    return MarkovSequence(sys.field, sys.params.n_minus_k, sys.k, tuple(blocks))


def toeplitz_matrix(ms: MarkovSequence) -> FieldMatrix:
    """Lower block-triangular Toeplitz matrix with block (r, c) = F_{r-c}."""
    p, k, J = ms.n_minus_k, ms.k, ms.j
    out = np.zeros(((J + 1) * p, (J + 1) * k), dtype=np.int64)
    for r in range(J + 1):
        for c in range(r + 1):
            out[r * p:(r + 1) * p, c * k:(c + 1) * k] = ms.blocks[r - c].data
    return FieldMatrix._wrap(ms.field, out)


def hankel_matrix(ms: MarkovSequence, x: int, y: int) -> FieldMatrix:
    """Block Hankel matrix with x block rows, y block columns and block (r, c) = F_{r+c-1}."""
    if x < 1 or y < 1:
        raise ValueError("Hankel dimensions must be positive")
    if ms.j < x + y - 1:
        raise InsufficientBlocks(f"need F_1..F_{x + y - 1}, have up to F_{ms.j}")
    p, k = ms.n_minus_k, ms.k
    out = np.zeros((x * p, y * k), dtype=np.int64)
    for r in range(x):
        for c in range(y):
            out[r * p:(r + 1) * p, c * k:(c + 1) * k] = ms.blocks[r + c + 1].data
    return FieldMatrix._wrap(ms.field, out)


def parity_equation_matrix(ms: MarkovSequence) -> FieldMatrix:
    """``[-I | T_j]``: annihilates the stacked vector (y_0..y_j, u_0..u_j) of every trajectory prefix."""
    T = toeplitz_matrix(ms)
    return FieldMatrix.hstack([-FieldMatrix.identity(ms.field, T.rows), T])


def _input_array(sys: StateSpace, inputs) -> np.ndarray:
    if isinstance(inputs, FieldMatrix):
        if inputs.field != sys.field:
            raise FieldMismatch(f"inputs over {inputs.field}, system over {sys.field}")
        arr = inputs.data
    elif isinstance(inputs, np.ndarray) and inputs.dtype != object:
        arr = inputs.astype(np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, sys.k) if sys.k > 1 else arr[:, None]
        if sys.field.m == 1:
            arr = arr % sys.field.p
        elif arr.size and (arr.min() < 0 or arr.max() >= sys.field.q):
            raise ValueError(f"inputs must lie in [0, {sys.field.q})")
    else:
        rows = []
        for u in inputs:
            if isinstance(u, FieldElement):
                u = [u]
            row = []
            for x in np.atleast_1d(np.asarray(u, dtype=object)):
                if isinstance(x, FieldElement):
                    if x.field != sys.field:
                        raise FieldMismatch(f"input entry over {x.field}, system over {sys.field}")
                    row.append(x.value)
                else:
                    row.append(FieldElement(sys.field, int(x)).value)
            rows.append(row)
        arr = np.array(rows, dtype=np.int64).reshape(len(rows), -1) if rows else np.zeros((0, sys.k), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != sys.k:
        raise DimensionMismatch(f"each input must be a {sys.k}-vector, got array of shape {arr.shape}")
    return arr


def simulate(sys: StateSpace, inputs) -> tuple[np.ndarray, np.ndarray]:
    """Run the state equations from x_0 = 0.

    Returns ``(states, parity)`` with ``states`` of shape (T+1, delta) holding
    x_0..x_T and ``parity`` of shape (T, n-k) holding y_0..y_{T-1}.
    """
    U = _input_array(sys, inputs)
    F = sys.field
    T = U.shape[0]
    states = np.zeros((T + 1, sys.delta), dtype=np.int64)
    ys = np.zeros((T, sys.params.n_minus_k), dtype=np.int64)
    At, Bt, Ct, Dt = sys.A.data.T, sys.B.data.T, sys.C.data.T, sys.D.data.T
    for t in range(T):
        x, u = states[t][None, :], U[t][None, :]
        ys[t] = F.vadd(F.matmul(x, Ct), F.matmul(u, Dt))[0]
        states[t + 1] = F.vadd(F.matmul(x, At), F.matmul(u, Bt))[0]
    return states, ys


def encode(sys: StateSpace, inputs) -> np.ndarray:
    """Code vectors v_0..v_T as rows of a (T+1, n) array, each row ``(y_t, u_t)``."""
    U = _input_array(sys, inputs)
    _, ys = simulate(sys, U)
    return np.hstack([ys, U])


def encode_batch(sys: StateSpace, U: np.ndarray, *, return_states: bool = False):
    """Encode many input sequences at once; ``U`` has shape (N, T, k).

    Returns parity outputs of shape (N, T, n-k) (and the final states if asked).
    """
    F = sys.field
    N, T, _ = U.shape
    X = np.zeros((N, sys.delta), dtype=np.int64)
    Y = np.zeros((N, T, sys.params.n_minus_k), dtype=np.int64)
    At, Bt, Ct, Dt = sys.A.data.T, sys.B.data.T, sys.C.data.T, sys.D.data.T
    for t in range(T):
        Ut = U[:, t, :]
        Y[:, t, :] = F.vadd(F.matmul(X, Ct), F.matmul(Ut, Dt))
        X = F.vadd(F.matmul(X, At), F.matmul(Ut, Bt))
    if return_states:
        return Y, X
    return Y


def controllability_matrix(sys: StateSpace) -> FieldMatrix:
    cols = []
    AiB = sys.B
    for _ in range(sys.delta):
        cols.append(AiB)
        AiB = sys.A @ AiB
    if not cols:
        return FieldMatrix.zeros(sys.field, 0, 0)
    return FieldMatrix.hstack(cols)


def observability_matrix(sys: StateSpace) -> FieldMatrix:
    rows = []
    CAi = sys.C
    for _ in range(sys.delta):
        rows.append(CAi)
        CAi = CAi @ sys.A
    if not rows:
        return FieldMatrix.zeros(sys.field, 0, 0)
    return FieldMatrix.vstack(rows)


def is_controllable(sys: StateSpace) -> bool:
    return sys.delta == 0 or rank(controllability_matrix(sys)) == sys.delta


def is_observable(sys: StateSpace) -> bool:
    return sys.delta == 0 or rank(observability_matrix(sys)) == sys.delta


def terminate_inputs(sys: StateSpace, inputs) -> np.ndarray:
    """Append the shortest input tail (at most delta steps) that drives the state back to 0.

    Raises ValueError when the final state cannot be steered to zero, which
    only happens for uncontrollable systems.
    """
    U = _input_array(sys, inputs)
    states, _ = simulate(sys, U)
    x = FieldMatrix._wrap(sys.field, states[-1][:, None])
    for s in range(sys.delta + 1):
        target = -((sys.A ** s) @ x)
        if s == 0:
            if target.is_zero():
                return U
            continue
        R = FieldMatrix.hstack([(sys.A ** (s - 1 - i)) @ sys.B for i in range(s)])
        w = solve(R, target)
        if w is not None:
            tail = w.data.reshape(s, sys.k)
            return np.vstack([U, tail]).astype(np.int64)
    raise ValueError("final state cannot be driven to zero; system is not controllable")


def pad_realization(sys: StateSpace, r: int) -> StateSpace:
    """Grow the state by r decoupled zero modes; every Markov parameter is unchanged."""
    if r < 1:
        raise ValueError("padding size must be positive")
    F = sys.field
    d, k, p = sys.delta, sys.k, sys.params.n_minus_k
    Z = FieldMatrix.zeros
    A = FieldMatrix.block([[Z(F, r, r), Z(F, r, d)], [Z(F, d, r), sys.A]])
    B = FieldMatrix.vstack([Z(F, r, k), sys.B])
    C = FieldMatrix.hstack([Z(F, p, r), sys.C])
    return StateSpace(CodeParams(sys.n, k, d + r), F, A, B, C, sys.D)


def random_system(params: CodeParams, field: Field, seed: int) -> StateSpace:
    """Uniformly random (A, B, C, D) drawn from numpy's PCG64 generator seeded with ``seed``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return _random_system_rng(params, field, rng)


def _random_system_rng(params: CodeParams, field: Field, rng: np.random.Generator) -> StateSpace:
    d, k, p = params.delta, params.k, params.n_minus_k
    return StateSpace(
        params,
        field,
        FieldMatrix.random(field, d, d, rng),
        FieldMatrix.random(field, d, k, rng),
        FieldMatrix.random(field, p, d, rng),
        FieldMatrix.random(field, p, k, rng),
    )


def stack_code_vectors(vectors: Sequence[np.ndarray], n_minus_k: int) -> np.ndarray:
    """Reorder code vectors v_0..v_j into the stacked form (y_0..y_j, u_0..u_j)."""
    V = np.asarray(vectors)
    return np.concatenate([V[:, :n_minus_k].reshape(-1), V[:, n_minus_k:].reshape(-1)])
