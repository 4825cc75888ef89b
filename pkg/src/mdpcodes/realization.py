"""Minimal partial realization and the search for MDP codes.

The realization is built from the linear dependencies among the scalar rows
of the block Hankel matrix of F_1..F_j (an observer-type construction).  Its
state dimension equals the rank formula of :func:`tether_degree`, and every
result is checked against the input blocks before it is returned.
"""

from __future__ import annotations

import dataclasses
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .distance import code_indices, is_mdp
from .errors import BudgetExceeded, ExtensionFailed, InsufficientBlocks, NotFound
from .gf import GF, Field, FieldMatrix, rank, solve_lexmin
from .minors import DEFAULT_MINOR_BUDGET, all_nontrivial_minors_nonzero, count_nontrivial_minors
from .state_space import (
    CodeParams,
    MarkovSequence,
    StateSpace,
    _random_system_rng,
    hankel_matrix,
    is_controllable,
    is_observable,
    markov_parameters,
    pad_realization,
    toeplitz_matrix,
)

__all__ = [
    "SearchConfig",
    "RealizationResult",
    "SearchReport",
    "tether_degree",
    "minimal_partial_realization",
    "smallest_degree_for",
    "search_superregular_markov",
    "search_mdp_code",
    "build_mdp_code",
    "field_size_sweep",
]

STRATEGIES = ("random", "exhaustive")


@dataclass(frozen=True)
class SearchConfig:
    field: Field
    max_attempts: int = 1000
    seed: int = 0
    strategy: str = "random"
    minor_budget: int = DEFAULT_MINOR_BUDGET
    exhaustive_ceiling: int = 2**24

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be positive")
        if self.minor_budget < 1 or self.exhaustive_ceiling < 1:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class RealizationResult:
    system: StateSpace
    degree: int
    verified: bool = True


@dataclass
class SearchReport:
    params: CodeParams
    field: Field
    strategy: str
    seed: int
    attempts: int = 0
    found: bool = False
    certified_nonexistent: bool = False
    system: StateSpace | None = None
    route: str | None = None
    controllable: bool | None = None
    observable: bool | None = None
    padded: bool = False
    notes: list = dc_field(default_factory=list)
    elapsed_ms: int = 0


# -- realization ------------------------------------------------------------------


def _check_j(ms: MarkovSequence, j: int | None) -> int:
    j = ms.j if j is None else j
    if j < 0:
        raise ValueError("j must be non-negative")
    if j > ms.j:
        raise InsufficientBlocks(f"need F_1..F_{j}, have up to F_{ms.j}")
    return j


def tether_degree(ms: MarkovSequence, j: int | None = None) -> int:
    """Degree of a minimal partial realization of F_1..F_j (F_0 is ignored).

    d = sum_{i=1..j} rank H(i, j+1-i) - sum_{i=1..j-1} rank H(i, j-i),
    with H(x, y) the block Hankel matrix of x block rows and y block columns.
    """
    j = _check_j(ms, j)
    total = sum(rank(hankel_matrix(ms, i, j + 1 - i)) for i in range(1, j + 1))
    total -= sum(rank(hankel_matrix(ms, i, j - i)) for i in range(1, j))
    return total


def _hankel_row(ms: MarkovSequence, a: int, s: int, j: int) -> list[int]:
    row = []
    for b in range(1, j + 2 - a):
        row.extend(ms.blocks[a + b - 1].data[s].tolist())
    return row


def minimal_partial_realization(ms: MarkovSequence, j: int | None = None) -> RealizationResult:
    """(A, B, C) of least dimension with C A^{i-1} B = F_i for i = 1..j, and D = F_0.

    Scalar Hankel rows (a, s) are visited block row by block row.  Row (a, s)
    is known on (j+1-a)k columns; it joins the basis unless it is a
    combination of earlier basis rows on that width, in which case the
    lexicographically smallest combination is recorded and the later rows
    for the same s are skipped.  The basis rows become the state.
    """
    j = _check_j(ms, j)
    F = ms.field
    p, k = ms.n_minus_k, ms.k
    basis: list[tuple[int, int]] = []  # (a, s) per state coordinate
    basis_rows: list[list[int]] = []
    relation: dict[tuple[int, int], list[int]] = {}
    done = [False] * p
    for a in range(1, j + 2):
        for s in range(p):
            if done[s]:
                continue
            width = (j + 1 - a) * k
            coeffs = None
            if width == 0:
                coeffs = [0] * len(basis)
            else:
                row = _hankel_row(ms, a, s, j)
                if basis:
                    M = FieldMatrix._wrap(F, np.array([r[:width] for r in basis_rows], dtype=np.int64).T)
                    sol = solve_lexmin(M, FieldMatrix._wrap(F, np.array(row, dtype=np.int64)[:, None]))
                    if sol is not None:
                        coeffs = sol.data[:, 0].tolist()
                elif not any(row):
                    coeffs = []
                if coeffs is None:
                    basis.append((a, s))
                    basis_rows.append(row)
                    continue
            relation[(a, s)] = coeffs
            done[s] = True
        if all(done):
            break

    d = len(basis)
    index = {bs: m for m, bs in enumerate(basis)}

    def combo(key):
        c = relation[key]
        return c + [0] * (d - len(c))

    A = np.zeros((d, d), dtype=np.int64)
    B = np.zeros((d, k), dtype=np.int64)
    C = np.zeros((p, d), dtype=np.int64)
    for m, (a, s) in enumerate(basis):
        B[m] = ms.blocks[a].data[s]
        nxt = (a + 1, s)
        if nxt in index:
            A[m, index[nxt]] = 1
        else:
            A[m] = combo(nxt)
    for s in range(p):
        if (1, s) in index:
            C[s, index[(1, s)]] = 1
        else:
            C[s] = combo((1, s))

    sys = StateSpace(
        CodeParams(p + k, k, d),
        F,
        FieldMatrix._wrap(F, A),
        FieldMatrix._wrap(F, B),
        FieldMatrix._wrap(F, C),
        ms.blocks[0],
    )
    got = markov_parameters(sys, j)
    if any(got.blocks[i] != ms.blocks[i] for i in range(1, j + 1)):
        raise ExtensionFailed(f"constructed degree-{d} system does not reproduce F_1..F_{j}")
    return RealizationResult(sys, d, True)


def smallest_degree_for(j: int, n: int, k: int) -> int:
    """Smallest delta with floor(delta/k) + floor(delta/(n-k)) >= j."""
    d = 0
    while d // k + d // (n - k) < j:
        d += 1
    return d


# -- superregular Markov sequences -----------------------------------------------


def _markov_from_flat(field: Field, n: int, k: int, j: int, flat) -> MarkovSequence:
    p = n - k
    arr = np.asarray(flat, dtype=np.int64).reshape(j + 1, p, k)
    return MarkovSequence(field, p, k, tuple(FieldMatrix._wrap(field, arr[i].copy()) for i in range(j + 1)))


def _is_superregular(ms: MarkovSequence, n: int, k: int, j: int, budget: int) -> bool:
    return all_nontrivial_minors_nonzero(toeplitz_matrix(ms), n, k, j, budget)


def _superregular_candidates(n: int, k: int, j: int, cfg: SearchConfig, rng: np.random.Generator, counter: list):
    """Yield superregular F_0..F_j; ``counter[0]`` tracks how many candidates were tested.

    The exhaustive scan only visits sequences without zero entries: every
    entry on or below the block diagonal is itself a non-trivial 1x1 minor,
    so no other sequence can qualify.
    """
    F = cfg.field
    N = (j + 1) * (n - k) * k
    needed = count_nontrivial_minors(j, n, k)
    if needed > cfg.minor_budget:
        raise BudgetExceeded(f"non-trivial minors of T_{j}", needed, cfg.minor_budget)
    if cfg.strategy == "exhaustive":
        total = (F.q - 1) ** N
        if total > cfg.exhaustive_ceiling:
            raise BudgetExceeded("candidate Markov sequences", total, cfg.exhaustive_ceiling)
        for flat in itertools.product(range(1, F.q), repeat=N):
            counter[0] += 1
            ms = _markov_from_flat(F, n, k, j, flat)
            if _is_superregular(ms, n, k, j, cfg.minor_budget):
                yield ms
    else:
        for _ in range(cfg.max_attempts):
            counter[0] += 1
            flat = F.random(rng, N)
            if not flat.all():
                continue
            ms = _markov_from_flat(F, n, k, j, flat)
            if _is_superregular(ms, n, k, j, cfg.minor_budget):
                yield ms


def search_superregular_markov(n: int, k: int, j: int, cfg: SearchConfig) -> MarkovSequence:
    """F_0..F_j whose block Toeplitz matrix T_j has no vanishing non-trivial minor.

    Raises NotFound when the attempts run out; after a full exhaustive scan
    the error is marked ``certified``.
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    counter = [0]
    for ms in _superregular_candidates(n, k, j, cfg, rng, counter):
        return ms
    certified = cfg.strategy == "exhaustive"
    raise NotFound(f"no superregular T_{j} over {cfg.field} after {counter[0]} candidates", counter[0], certified)


# -- MDP code search ----------------------------------------------------------------


def _perturb_padded(sys: StateSpace, r: int, rng: np.random.Generator) -> StateSpace:
    """Fill the zero blocks that padding introduced with random entries."""
    F = sys.field
    A = sys.A.data.copy()
    B = sys.B.data.copy()
    C = sys.C.data.copy()
    A[:r, :] = F.random(rng, A[:r, :].shape)
    A[:, :r] = F.random(rng, A[:, :r].shape)
    B[:r] = F.random(rng, B[:r].shape)
    C[:, :r] = F.random(rng, C[:, :r].shape)
    wrap = lambda X: FieldMatrix._wrap(F, X)
    return StateSpace(sys.params, F, wrap(A), wrap(B), wrap(C), sys.D)


def _record_system(report: SearchReport, sys: StateSpace, route: str):
    report.found = True
    report.system = sys
    report.route = route
    report.controllable = is_controllable(sys)
    report.observable = is_observable(sys)


def _tuple_search(params: CodeParams, cfg: SearchConfig, rng, report: SearchReport) -> bool:
    fallback = None
    for _ in range(cfg.max_attempts):
        report.attempts += 1
        sys = _random_system_rng(params, cfg.field, rng)
        if not is_mdp(sys, cfg.minor_budget):
            continue
        if is_controllable(sys) and is_observable(sys):
            _record_system(report, sys, "tuple")
            return True
        fallback = fallback or sys
    if fallback is not None:
        _record_system(report, fallback, "tuple")
        report.notes.append("only non-minimal (uncontrollable or unobservable) MDP tuples were found")
        return True
    return False


def _constructive(params: CodeParams, cfg: SearchConfig, rng, repair_rng, report: SearchReport) -> bool:
    n, k, delta = params.n, params.k, params.delta
    L = code_indices(params).L
    counter = [0]
    try:
        for ms in _superregular_candidates(n, k, L, cfg, rng, counter):
            res = minimal_partial_realization(ms, L)
            if res.degree > delta:
                continue
            if res.degree != smallest_degree_for(L, n, k):
                report.notes.append(f"realized degree {res.degree} differs from the smallest admissible degree")
            sys = res.system
            if res.degree < delta:
                r = delta - res.degree
                sys = pad_realization(sys, r)
                report.padded = True
                for _ in range(cfg.max_attempts):
                    cand = _perturb_padded(sys, r, repair_rng)
                    if is_controllable(cand) and is_observable(cand) and is_mdp(cand, cfg.minor_budget):
                        sys = cand
                        report.notes.append("padded realization repaired to a minimal representative")
                        break
                else:
                    report.notes.append("returned the padded, non-minimal representative")
            if not is_mdp(sys, cfg.minor_budget):
                raise AssertionError("constructive route produced a non-MDP system")  # pragma: no cover
            _record_system(report, sys, "constructive")
            return True
    finally:
        report.attempts += counter[0]
    if cfg.strategy == "exhaustive":
        report.certified_nonexistent = True
    return False


def search_mdp_code(params: CodeParams, cfg: SearchConfig) -> SearchReport:
    """Run the search cascade and return a report (``found`` may be false).

    The random strategy tries random (A, B, C, D) tuples first and then the
    constructive route (superregular Markov blocks, realization, padding).
    The exhaustive strategy runs the constructive route over every candidate
    sequence, so a miss certifies that no MDP code exists over the field.
    """
    t0 = time.perf_counter()
    report = SearchReport(params, cfg.field, cfg.strategy, cfg.seed)
    tuple_ss, markov_ss, repair_ss = np.random.SeedSequence(cfg.seed).spawn(3)
    gen = lambda ss: np.random.Generator(np.random.PCG64(ss))
    if cfg.strategy == "random" and _tuple_search(params, cfg, gen(tuple_ss), report):
        pass
    else:
        _constructive(params, cfg, gen(markov_ss), gen(repair_ss), report)
    report.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    return report


def build_mdp_code(params: CodeParams, cfg: SearchConfig) -> StateSpace:
    report = search_mdp_code(params, cfg)
    if not report.found:
        raise NotFound(
            f"no MDP {params.n, params.k, params.delta} code over {cfg.field} after {report.attempts} attempts",
            report.attempts,
            report.certified_nonexistent,
        )
    return report.system


# -- field-size sweep -------------------------------------------------------------------


def _sweep_one(params: CodeParams, q: int, cfg: SearchConfig) -> dict:
    field = GF(q)
    L = code_indices(params).L
    N = (L + 1) * params.n_minus_k * params.k
    entry = {"q": q}
    if count_nontrivial_minors(L, params.n, params.k) > cfg.minor_budget:
        entry.update(status="skipped", reason="minor budget exceeded", found=False, certified=False, attempts=0)
        return entry
    strategy = "exhaustive" if (q - 1) ** N <= cfg.exhaustive_ceiling else "random"
    seed = int(np.random.SeedSequence([cfg.seed, q]).generate_state(1, np.uint64)[0])
    sub = dataclasses.replace(cfg, field=field, strategy=strategy, seed=seed)
    report = search_mdp_code(params, sub)
    if report.found:
        status = "found"
    elif report.certified_nonexistent:
        status = "nonexistent"
    else:
        status = "not_found"
    entry.update(
        status=status,
        strategy=strategy,
        found=report.found,
        certified=report.certified_nonexistent,
        attempts=report.attempts,
    )
    return entry


def field_size_sweep(params: CodeParams, q_list, cfg: SearchConfig, jobs: int = 1) -> dict:
    """Search every field order in ``q_list`` and report the smallest that admits an MDP code.

    Each q is searched exhaustively when its candidate count fits the ceiling
    and at random otherwise.  Results do not depend on ``jobs``.
    """
    q_list = [int(q) for q in q_list]
    for q in q_list:
        GF(q)  # reject non prime powers before any work starts
    if jobs > 1 and len(q_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_sweep_one, [params] * len(q_list), q_list, [cfg] * len(q_list)))
    else:
        entries = [_sweep_one(params, q, cfg) for q in q_list]
    found = [e["q"] for e in entries if e["found"]]
    return {
        "params": params.as_dict(),
        "entries": entries,
        "smallest_q": min(found) if found else None,
    }
