"""Column distances, free distance and the MDP / MDS / strongly-MDS verdicts.

Two independent routes decide the MDP property: :func:`is_mdp` checks the
minors of T_L, :func:`is_mdp_bruteforce` enumerates every input sequence
and measures trajectory weights directly.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, MDPError, NotObservable
from .minors import all_nontrivial_minors_nonzero, first_vanishing_minor, leading_block, MinorIndex
from .state_space import CodeParams, StateSpace, is_observable, markov_parameters, toeplitz_matrix

__all__ = [
    "DistanceProfile",
    "CodeIndices",
    "BoundViolation",
    "DEFAULT_ENCODING_BUDGET",
    "column_bound",
    "code_indices",
    "column_distances",
    "column_distance_bruteforce",
    "minor_profile",
    "is_mdp",
    "mdp_witness",
    "is_mdp_bruteforce",
    "free_distance",
    "is_mds",
    "is_strongly_mds",
    "verdict_report",
]

DEFAULT_ENCODING_BUDGET = 2**24
# rows of the expansion frontier processed per numpy batch
_CHUNK = 1 << 16


class BoundViolation(MDPError, AssertionError):
    """A computed distance contradicts a proven bound; always a bug."""


def column_bound(j: int, params: CodeParams) -> int:
    if j < 0:
        raise ValueError("j must be non-negative")
    return params.n_minus_k * (j + 1) + 1


@dataclass(frozen=True)
class CodeIndices:
    L: int
    M: int
    singleton: int


def code_indices(params: CodeParams) -> CodeIndices:
    n, k, d = params.n, params.k, params.delta
    p = n - k
    return CodeIndices(
        L=d // k + d // p,
        M=d // k + -(-d // p),
        singleton=p * (d // k + 1) + d + 1,
    )


@dataclass(frozen=True)
class DistanceProfile:
    params: CodeParams
    d: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        for j, dj in enumerate(self.d):
            if dj > column_bound(j, self.params):
                raise BoundViolation(f"d_{j} = {dj} exceeds the bound {column_bound(j, self.params)}")
        if any(b < a for a, b in zip(self.d, self.d[1:])):
            raise BoundViolation(f"column distances not non-decreasing: {self.d}")

    @property
    def bounds(self) -> tuple[int, ...]:
        return tuple(column_bound(j, self.params) for j in range(len(self.d)))

    @property
    def maximal_flags(self) -> tuple[bool, ...]:
        return tuple(dj == b for dj, b in zip(self.d, self.bounds))

    def to_csv(self) -> str:
        lines = ["j,d_j,bound,maximal"]
        for j, (dj, b, m) in enumerate(zip(self.d, self.bounds, self.maximal_flags)):
            lines.append(f"{j},{dj},{b},{'true' if m else 'false'}")
        return "\n".join(lines) + "\n"


def _all_vectors(q: int, k: int) -> np.ndarray:
    """All k-vectors over a field of order q, lexicographic; row 0 is the zero vector."""
    return np.array(list(itertools.product(range(q), repeat=k)), dtype=np.int64).reshape(-1, k)


def column_distances(sys: StateSpace, J: int, budget: int | None = None) -> DistanceProfile:
    """Column distances d_0..d_J by exhaustive enumeration of input sequences.

    Every sequence (u_0, ..., u_J) with u_0 != 0 is pushed through the state
    equations; prefixes are shared so d_j for all j <= J come out of one pass.
    """
    if J < 0:
        raise ValueError("J must be non-negative")
    budget = DEFAULT_ENCODING_BUDGET if budget is None else budget
    F = sys.field
    q, k = F.q, sys.k
    required = q ** (k * (J + 1))
    if required > budget:
        raise BudgetExceeded(f"input sequences of length {J + 1}", required, budget)

    U = _all_vectors(q, k)
    wU = np.count_nonzero(U, axis=1)
    At, Bt, Ct, Dt = sys.A.data.T, sys.B.data.T, sys.C.data.T, sys.D.data.T
    BU, DU = F.matmul(U, Bt), F.matmul(U, Dt)
    best = [math.inf] * (J + 1)

    def expand(X, W, inputs):
        # one time step for every (state, input) pair
        Y = F.vadd(F.matmul(X, Ct)[:, None, :], DU[None, inputs, :])
        W2 = W[:, None] + wU[None, inputs] + np.count_nonzero(Y, axis=2)
        X2 = F.vadd(F.matmul(X, At)[:, None, :], BU[None, inputs, :])
        return X2.reshape(-1, sys.delta), W2.reshape(-1)

    everything = np.arange(len(U))

    def walk(X, W, t):
        best[t] = min(best[t], int(W.min()))
        if t == J:
            return
        step = max(1, _CHUNK // len(U))
        for s in range(0, len(X), step):
            X2, W2 = expand(X[s:s + step], W[s:s + step], everything)
            walk(X2, W2, t + 1)

    X0 = np.zeros((1, sys.delta), dtype=np.int64)
    X1, W1 = expand(X0, np.zeros(1, dtype=np.int64), everything[1:])
    walk(X1, W1, 0)
    return DistanceProfile(sys.params, tuple(int(b) for b in best))


def column_distance_bruteforce(sys: StateSpace, j: int, budget: int | None = None) -> int:
    return column_distances(sys, j, budget).d[j]


def _toeplitz_at(sys: StateSpace, j: int):
    return toeplitz_matrix(markov_parameters(sys, j))


def minor_profile(sys: StateSpace, J: int, budget: int | None = None) -> tuple[bool, ...]:
    """Minor criterion at every level j = 0..J (T_j is the leading block of T_J)."""
    T = _toeplitz_at(sys, J)
    n, k = sys.n, sys.k
    return tuple(all_nontrivial_minors_nonzero(leading_block(T, n, k, j), n, k, j, budget) for j in range(J + 1))


def is_mdp(sys: StateSpace, budget: int | None = None) -> bool:
    """MDP verdict from the minors of T_L."""
    return mdp_witness(sys, budget) is None


def mdp_witness(sys: StateSpace, budget: int | None = None) -> MinorIndex | None:
    """First vanishing non-trivially-zero minor of T_L, or None for an MDP code."""
    L = code_indices(sys.params).L
    return first_vanishing_minor(_toeplitz_at(sys, L), sys.n, sys.k, L, budget)


def is_mdp_bruteforce(sys: StateSpace, budget: int | None = None) -> bool:
    L = code_indices(sys.params).L
    return all(column_distances(sys, L, budget).maximal_flags)


def _state_ids(X: np.ndarray, q: int) -> np.ndarray:
    weights = q ** np.arange(X.shape[-1], dtype=np.int64)
    return X @ weights


def free_distance(sys: StateSpace, budget: int | None = None) -> int:
    """Minimum weight of a nonzero codeword that leaves state 0 and returns to it.

    Dijkstra over the q^delta trellis states, edge weight wt(u) + wt(y).
    The first input is forced nonzero so the empty path is excluded.
    """
    if not is_observable(sys):
        raise NotObservable("free distance requires an observable (A, C) pair")
    budget = DEFAULT_ENCODING_BUDGET if budget is None else budget
    F = sys.field
    q, k, d = F.q, sys.k, sys.delta
    required = q**d * q**k
    if required > budget:
        raise BudgetExceeded("trellis edges", required, budget)

    U = _all_vectors(q, k)
    wU = np.count_nonzero(U, axis=1)
    At, Ct = sys.A.data.T, sys.C.data.T
    BU, DU = F.matmul(U, sys.B.data.T), F.matmul(U, sys.D.data.T)
    wDU = np.count_nonzero(DU, axis=1)

    dist: dict[int, int] = {}
    heap: list[tuple[int, int]] = []
    starts = _state_ids(BU[1:], q)
    for sid, w in zip(starts.tolist(), (wU[1:] + wDU[1:]).tolist()):
        if w < dist.get(sid, math.inf):
            dist[sid] = w
            heapq.heappush(heap, (w, sid))
    done = set()
    while heap:
        w, sid = heapq.heappop(heap)
        if sid == 0:
            singleton = code_indices(sys.params).singleton
            if w > singleton:
                raise BoundViolation(f"free distance {w} exceeds the generalized Singleton bound {singleton}")
            return w
        if sid in done:
            continue
        done.add(sid)
        x = np.array([(sid // q**i) % q for i in range(d)], dtype=np.int64)[None, :]
        nxt = F.vadd(F.matmul(x, At), BU)
        y = F.vadd(F.matmul(x, Ct), DU)
        wts = w + wU + np.count_nonzero(y, axis=1)
        for nid, nw in zip(_state_ids(nxt, q).tolist(), wts.tolist()):
            if nid not in done and nw < dist.get(nid, math.inf):
                dist[nid] = nw
                heapq.heappush(heap, (nw, nid))
    raise AssertionError("no path back to the zero state")  # pragma: no cover


def is_mds(sys: StateSpace, budget: int | None = None) -> bool:
    return free_distance(sys, budget) == code_indices(sys.params).singleton


def is_strongly_mds(sys: StateSpace, budget: int | None = None) -> bool:
    idx = code_indices(sys.params)
    return column_distance_bruteforce(sys, idx.M, budget) == idx.singleton


def verdict_report(
    sys: StateSpace,
    *,
    brute: bool = False,
    strong: bool = False,
    mds: bool = False,
    minor_budget: int | None = None,
    encoding_budget: int | None = None,
) -> dict:
    """Verdict dictionary in the report layout used by ``mdpcodes check``."""
    idx = code_indices(sys.params)
    witness = mdp_witness(sys, minor_budget)
    report = {
        "mdp": witness is None,
        "strongly_mds": "skipped",
        "mds": "skipped",
        "L": idx.L,
        "M": idx.M,
        "singleton": idx.singleton,
        "witness_minor": None if witness is None else witness.to_dict(),
    }
    if brute:
        report["mdp_bruteforce"] = is_mdp_bruteforce(sys, encoding_budget)
    if strong:
        report["strongly_mds"] = is_strongly_mds(sys, encoding_budget)
    if mds:
        if is_observable(sys):
            report["mds"] = is_mds(sys, encoding_budget)
        else:
            report["mds_note"] = "skipped: (A, C) is not observable"
    return report
