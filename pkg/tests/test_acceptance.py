"""Acceptance criteria, one test per criterion.

Each test asserts its own runtime limit.  A pass/fail line per criterion is
printed in the terminal summary (see conftest.py).  Every system the suite
constructs is recorded and re-checked against the distance bounds by the
final criterion.
"""

import itertools
import json
import time

import numpy as np
import pytest

from mdpcodes.cli import main
from mdpcodes.distance import (
    code_indices,
    column_bound,
    column_distances,
    free_distance,
    is_mdp,
    is_mdp_bruteforce,
    is_mds,
    is_strongly_mds,
    minor_profile,
)
from mdpcodes.errors import BudgetExceeded
from mdpcodes.gf import GF
from mdpcodes.io import read_system
from mdpcodes.minors import all_index_pairs, is_trivially_zero, minor_sizes, symbolic_trivially_zero_oracle
from mdpcodes.poly import check_equivalences, codeword_polynomial, equivalence_conditions, generator_matrix, mdp_from_parity, parity_check_matrix
from mdpcodes.realization import minimal_partial_realization, tether_degree
from mdpcodes.state_space import (
    CodeParams,
    MarkovSequence,
    StateSpace,
    encode,
    is_controllable,
    is_observable,
    markov_parameters,
    pad_realization,
    random_system,
    terminate_inputs,
)

import oracles

CONSTRUCTED = []


def record(sys):
    CONSTRUCTED.append(sys)
    return sys


class Stopwatch:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f} s, limit {self.limit} s"


def minimal_systems(params, q, count, seed0=0):
    F = GF(q)
    out, seed = [], seed0
    while len(out) < count:
        sys = random_system(params, F, seed)
        seed += 1
        if is_controllable(sys) and is_observable(sys):
            out.append(record(sys))
    return out


@pytest.mark.criterion(1, "minor criterion equals brute force on all 16 (2,1,1) systems over GF(2)")
def test_criterion_01_exhaustive_gf2():
    F = GF(2)
    with Stopwatch(1.0):
        disagreements = 0
        positives = 0
        for a, b, c, d in itertools.product(range(2), repeat=4):
            sys = record(StateSpace.from_lists(F, [[a]], [[b]], [[c]], [[d]]))
            prof = column_distances(sys, 2)
            brute = prof.d == (2, 3, 4)
            assert brute == is_mdp_bruteforce(sys)
            disagreements += is_mdp(sys) != brute
            positives += brute
    assert disagreements == 0
    assert positives == 0  # no (2,1,1) MDP code exists over GF(2)


@pytest.mark.criterion(2, "per-level minor predicate equals maximal column distance on 1000 random systems")
def test_criterion_02_randomized_equivalence():
    cases = [(CodeParams(2, 1, 1), 3, 334), (CodeParams(2, 1, 2), 5, 333), (CodeParams(3, 2, 2), 5, 333)]
    with Stopwatch(60.0):
        total = disagreements = 0
        levels = set()
        for params, q, count in cases:
            F = GF(q)
            L = code_indices(params).L
            for seed in range(count):
                sys = record(random_system(params, F, seed))
                minors = minor_profile(sys, L)
                dist = column_distances(sys, L).maximal_flags
                disagreements += minors != dist
                levels.update((params, j, f) for j, f in enumerate(dist))
                total += 1
    assert total >= 1000
    assert disagreements == 0
    # both verdicts occur at every level of the smallest case
    assert all((CodeParams(2, 1, 1), j, f) in levels for j in range(3) for f in (True, False))


@pytest.mark.criterion(3, "index test for trivially zero minors agrees with the ring oracle")
def test_criterion_03_trivially_zero_oracle():
    with Stopwatch(30.0):
        checked = disagreements = 0
        for n, k in [(2, 1), (3, 1), (3, 2)]:
            for j in range(3):
                for r in minor_sizes(j, n, k):
                    for idx in all_index_pairs(j, n, k, r):
                        fast = is_trivially_zero(idx, n, k)
                        exact = symbolic_trivially_zero_oracle(idx, j, n, k, method="exact")
                        mc = symbolic_trivially_zero_oracle(idx, j, n, k, method="montecarlo", seed=checked)
                        disagreements += (fast != exact) + (fast != mc)
                        checked += 1
    assert checked > 0 and disagreements == 0


@pytest.mark.criterion(4, "search finds a (2,1,1) MDP code over GF(3) and certifies none over GF(2)")
def test_criterion_04_constructive_existence(tmp_path, capsys):
    dest = tmp_path / "code.json"
    with Stopwatch(5.0):
        code = main(["search", "--n", "2", "--k", "1", "--delta", "1", "--q", "3", "--exhaustive", "--out", str(dest)])
        found = json.loads(capsys.readouterr().out)
        assert code == 0 and found["found"]
        sys = record(read_system(dest))
        assert [b.tolist() for b in markov_parameters(sys, 2).blocks] == [[[1]], [[1]], [[2]]]
        assert is_mdp(sys) and is_mdp_bruteforce(sys)
        assert column_distances(sys, 2).d == (2, 3, 4)
        assert column_distances(sys, 2).bounds == (2, 3, 4)
        assert free_distance(sys) == 4 == code_indices(sys.params).singleton
        assert is_mds(sys) and is_strongly_mds(sys)

        code = main(["search", "--n", "2", "--k", "1", "--delta", "1", "--q", "2", "--exhaustive"])
        missing = json.loads(capsys.readouterr().out)
        assert code == 4
        assert missing["certified_nonexistent"] and not missing["found"]


@pytest.mark.criterion(5, "Hankel rank degree equals exhaustive minimal realization degree for scalar sequences")
def test_criterion_05_tether_formula():
    with Stopwatch(60.0):
        for q in (2, 3):
            F = GF(q)
            minimal = oracles.scalar_minimal_degrees(F, 4)
            for j in range(1, 5):
                for seq in itertools.product(range(q), repeat=j):
                    ms = MarkovSequence.from_lists(F, [[[1]]] + [[[v]] for v in seq])
                    d = tether_degree(ms)
                    assert d == minimal[seq], (q, seq)
                    res = minimal_partial_realization(ms)
                    assert res.degree == d and res.verified
                    assert markov_parameters(res.system, j) == ms


@pytest.mark.criterion(6, "padding keeps the Markov parameters and destroys controllability and observability")
def test_criterion_06_padding():
    shapes = [(CodeParams(2, 1, 1), 3), (CodeParams(3, 2, 1), 5), (CodeParams(3, 1, 2), 4), (CodeParams(4, 2, 2), 7)]
    rng = np.random.default_rng(6)
    with Stopwatch(5.0):
        for i in range(100):
            params, q = shapes[i % len(shapes)]
            sys = random_system(params, GF(q), 600 + i)
            r = int(rng.integers(1, 4))
            padded = record(pad_realization(sys, r))
            L = code_indices(padded.params).L
            assert markov_parameters(padded, L) == markov_parameters(sys, L)
            assert not is_controllable(padded)
            assert not is_observable(padded)


@pytest.mark.criterion(7, "parity-check matrices annihilate codewords and the five conditions agree")
def test_criterion_07_equivalences():
    groups = [(CodeParams(2, 1, 1), 3), (CodeParams(2, 1, 1), 5), (CodeParams(3, 2, 1), 3), (CodeParams(3, 2, 1), 5)]
    with Stopwatch(60.0):
        systems = 0
        for params, q in groups:
            for sys in minimal_systems(params, q, 50, seed0=700):
                G = generator_matrix(sys)
                H = parity_check_matrix(sys, G)
                assert (H @ G).is_zero()
                rng = np.random.default_rng(systems)
                for _ in range(100):
                    length = int(rng.integers(1, 6))
                    U = terminate_inputs(sys, rng.integers(0, q, size=(length, sys.k)))
                    V = encode(sys, U)
                    assert (H @ codeword_polynomial(sys.field, V)).is_zero()
                    assert check_equivalences(sys, U, H)
                    assert all(equivalence_conditions(sys, U, H).values())
                systems += 1
    assert systems == 200


@pytest.mark.criterion(8, "sliding parity-check criterion equals the state-space criterion")
def test_criterion_08_duality():
    F = GF(5)
    params = CodeParams(2, 1, 1)
    with Stopwatch(60.0):
        pos = neg = 0
        seed = 800
        disagreements = 0
        while pos < 50 or neg < 50:
            sys = random_system(params, F, seed)
            seed += 1
            if not (is_controllable(sys) and is_observable(sys)):
                continue
            verdict = is_mdp(sys)
            if (verdict and pos >= 50) or (not verdict and neg >= 50):
                continue
            record(sys)
            disagreements += mdp_from_parity(parity_check_matrix(sys), params) != verdict
            pos += verdict
            neg += not verdict
    assert pos + neg == 100 and pos >= 10
    assert disagreements == 0


@pytest.mark.criterion(9, "fraction of random (2,1,1) systems that are MDP is at least 1/2 and grows with q")
def test_criterion_09_genericity():
    params = CodeParams(2, 1, 1)
    with Stopwatch(30.0):
        fractions = []
        for q in (9, 11, 13):
            F = GF(q)
            hits = sum(is_mdp(record(random_system(params, F, seed))) for seed in range(500))
            fractions.append(hits / 500)
    print(f"MDP fractions over GF(9), GF(11), GF(13): {fractions}")
    assert all(f >= 0.5 for f in fractions)
    assert fractions[0] < fractions[1] < fractions[2]


def _check_bounds(sys, J):
    prof = column_distances(sys, J)  # DistanceProfile raises on a bound or monotonicity violation
    assert all(dj <= column_bound(j, sys.params) for j, dj in enumerate(prof.d))
    assert all(a <= b for a, b in zip(prof.d, prof.d[1:]))
    if is_observable(sys):
        assert free_distance(sys) <= code_indices(sys.params).singleton


@pytest.mark.criterion(10, "distance bounds hold on every system constructed by the suite")
def test_criterion_10_bounds():
    corpus = list(CONSTRUCTED)
    for params, q in [(CodeParams(2, 1, 1), 7), (CodeParams(3, 1, 2), 3), (CodeParams(3, 2, 2), 4), (CodeParams(4, 2, 1), 5)]:
        corpus.extend(random_system(params, GF(q), s) for s in range(25))
    checked = 0
    for sys in corpus:
        J = code_indices(sys.params).L
        # stay inside the default encoding budget for the largest padded systems
        while J > 0 and sys.field.q ** (sys.k * (J + 1)) > 2**20:
            J -= 1
        try:
            _check_bounds(sys, J)
        except BudgetExceeded:
            continue
        checked += 1
    assert checked == len(corpus)
