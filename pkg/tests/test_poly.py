import numpy as np
import pytest

from mdpcodes.distance import column_distances, is_mdp, code_indices
from mdpcodes.errors import DimensionMismatch, NotControllable, NotObservable
from mdpcodes.gf import GF, FieldMatrix
from mdpcodes.poly import (
    PolyMatrix,
    check_equivalences,
    codeword_polynomial,
    equivalence_conditions,
    generator_matrix,
    mdp_from_parity,
    parity_check_matrix,
    parity_level_criterion,
    poly_arith,
    poly_rank,
    poly_right_kernel_basis,
    reverse_rows,
    sliding_parity_matrix,
    system_polynomial_matrix,
)
from mdpcodes.state_space import (
    CodeParams,
    StateSpace,
    encode,
    is_controllable,
    is_observable,
    pad_realization,
    random_system,
    terminate_inputs,
)


def P(F, coeffs):
    """Polynomial matrix from a list of constant coefficient matrices, low degree first."""
    mats = [FieldMatrix(F, c) for c in coeffs]
    return PolyMatrix(F, mats[0].rows, mats[0].cols, mats)


def minimal_systems(params, q, count, seed0=0):
    F = GF(q)
    out, seed = [], seed0
    while len(out) < count:
        sys = random_system(params, F, seed)
        seed += 1
        if is_controllable(sys) and is_observable(sys):
            out.append(sys)
    return out


def test_poly_arith_examples(gf3):
    a = P(gf3, [[[1]], [[1]]])
    b = P(gf3, [[[2]], [[1]]])
    prod = poly_arith("mul", a, b)
    assert prod == P(gf3, [[[2]], [[0]], [[1]]])
    assert prod.to_string() == "[[z^2 + 2]]"
    assert poly_arith("add", a, -a).is_zero()
    I = PolyMatrix.identity(gf3, 1)
    assert poly_arith("mul", I, a) == a
    with pytest.raises(DimensionMismatch):
        poly_arith("mul", P(gf3, [[[1, 1]]]), P(gf3, [[[1, 1]]]))


def test_trimming_and_degree(gf3):
    a = P(gf3, [[[1]], [[0]], [[0]]])
    assert a.degree == 0 and len(a.coeffs) == 1
    assert PolyMatrix.zeros(gf3, 2, 2).degree == -1


def test_system_polynomial_matrix(example):
    M = system_polynomial_matrix(example)
    assert M.to_string() == "[[z + 1, 0, 2], [2, 1, 2]]"
    assert M.shape == (2, 3) and M.degree == 1


def test_system_polynomial_matrix_static():
    F = GF(5)
    sys = StateSpace.from_lists(F, [], [], [[], []], [[1, 2], [3, 4]])
    M = system_polynomial_matrix(sys)
    assert M.degree == 0
    assert M.coefficient(0).tolist() == [[1, 0, 4, 3], [0, 1, 2, 1]]


def test_poly_kernel_examples(gf3):
    assert poly_right_kernel_basis(PolyMatrix.identity(gf3, 2), 3).cols == 0
    M = P(gf3, [[[1, 1]], [[1, 2]]])
    K = poly_right_kernel_basis(M, 1)
    assert K.cols == 1 and (M @ K).is_zero()
    assert K.to_string() == "[[z + 2], [z + 1]]"


def test_poly_kernel_random():
    F = GF(5)
    rng = np.random.default_rng(0)
    for _ in range(30):
        r, c = int(rng.integers(1, 3)), int(rng.integers(2, 5))
        M = PolyMatrix(F, r, c, [FieldMatrix.random(F, r, c, rng) for _ in range(2)])
        K = poly_right_kernel_basis(M, 3)
        assert (M @ K).is_zero()
        assert poly_rank(K) == K.cols


def test_generator_and_parity_example(example):
    G = generator_matrix(example)
    H = parity_check_matrix(example, G)
    assert G.to_string() == "[[z + 2], [z + 1]]"
    assert H.to_string() == "[[z + 1, 2z + 1]]"
    assert (H @ G).is_zero()


def test_static_code_parity():
    F = GF(5)
    sys = StateSpace.from_lists(F, [], [], [[], []], [[1, 2], [3, 4]])
    G = generator_matrix(sys)
    assert G.degree == 0
    G0 = G.coefficient(0)
    # [D; I] up to column scaling: the y-block is D times the u-block, which is diagonal
    Gy, Gu = FieldMatrix(F, G0.tolist()[:2]), FieldMatrix(F, G0.tolist()[2:])
    assert Gy == sys.D @ Gu
    assert Gu.data[0, 1] == 0 and Gu.data[1, 0] == 0 and Gu.det() != F(0)
    H = parity_check_matrix(sys, G)
    assert H.coefficient(0).tolist() == [[4, 0, 1, 2], [0, 4, 3, 4]]


def test_generator_requires_minimal(example):
    with pytest.raises(NotControllable):
        generator_matrix(pad_realization(example, 1))
    gf3 = example.field
    with pytest.raises(NotObservable):
        generator_matrix(StateSpace.from_lists(gf3, [[2]], [[1]], [[0]], [[1]]))


@pytest.mark.parametrize("params,q", [(CodeParams(2, 1, 1), 3), (CodeParams(3, 2, 1), 5), (CodeParams(3, 1, 2), 5), (CodeParams(4, 2, 2), 3)])
def test_pair_properties(params, q):
    for sys in minimal_systems(params, q, 15):
        G = generator_matrix(sys)
        H = parity_check_matrix(sys, G)
        assert G.shape == (sys.n, sys.k) and H.shape == (sys.n - sys.k, sys.n)
        assert (H @ G).is_zero()
        assert poly_rank(G) == sys.k and poly_rank(H) == sys.n - sys.k
        # the degrees of a minimal G add up to the McMillan degree
        assert sum(G.col_degrees()) == sys.delta


def test_codeword_soundness():
    for sys in minimal_systems(CodeParams(3, 2, 2), 5, 10):
        H = parity_check_matrix(sys)
        rng = np.random.default_rng(sys.delta)
        for _ in range(20):
            U = terminate_inputs(sys, rng.integers(0, 5, size=(4, sys.k)))
            w = codeword_polynomial(sys.field, encode(sys, U))
            assert (H @ w).is_zero()


def test_sliding_parity_examples(gf3):
    H = P(gf3, [[[1, 1]], [[1, 2]]])
    S = sliding_parity_matrix(H, 1)
    assert S.matrix.tolist() == [[1, 1, 0, 0], [1, 2, 1, 1]]
    S2 = sliding_parity_matrix(H, 2)
    assert S2.matrix.shape == (3, 6)
    assert S2.matrix.tolist()[2] == [0, 0, 1, 2, 1, 1]
    C = P(gf3, [[[1, 2]]])
    assert sliding_parity_matrix(C, 2).matrix.tolist() == [[1, 2, 0, 0, 0, 0], [0, 0, 1, 2, 0, 0], [0, 0, 0, 0, 1, 2]]


def test_sliding_block_placement():
    F = GF(7)
    rng = np.random.default_rng(5)
    H = PolyMatrix(F, 2, 3, [FieldMatrix.random(F, 2, 3, rng) for _ in range(2)])
    for j in range(3):
        S = sliding_parity_matrix(H, j).matrix.data
        for r in range(j + 1):
            for c in range(j + 1):
                blk = S[2 * r:2 * r + 2, 3 * c:3 * c + 3]
                assert (blk == H.coefficient(r - c).data).all() if r >= c else not blk.any()


def test_reverse_rows(gf3):
    H = P(gf3, [[[1, 1]], [[1, 2]]])
    assert reverse_rows(H).to_string() == "[[z + 1, z + 2]]"


def test_mdp_from_parity_example(example, bad_gf2):
    assert mdp_from_parity(parity_check_matrix(example), example.params)
    assert not mdp_from_parity(parity_check_matrix(bad_gf2), bad_gf2.params)


def test_mdp_from_parity_zero_entry():
    F = GF(5)
    H = P(F, [[[1, 0, 1]]])
    assert not mdp_from_parity(H, CodeParams(3, 2, 0), convention="delay")


@pytest.mark.parametrize("params,q", [(CodeParams(2, 1, 1), 5), (CodeParams(3, 2, 1), 5), (CodeParams(3, 1, 1), 7), (CodeParams(2, 1, 2), 11)])
def test_duality(params, q):
    seen = set()
    for sys in minimal_systems(params, q, 30):
        verdict = is_mdp(sys)
        assert mdp_from_parity(parity_check_matrix(sys), params) == verdict
        seen.add(verdict)
    assert seen == {True, False}


def test_level_criterion_matches_column_distances():
    params = CodeParams(2, 1, 2)
    for sys in minimal_systems(params, 5, 25):
        H = parity_check_matrix(sys)
        L = code_indices(params).L
        flags = column_distances(sys, L).maximal_flags
        for j in range(L + 1):
            assert parity_level_criterion(H, params, j) == flags[j]


def test_codeword_polynomial_orientation(gf3):
    w = codeword_polynomial(gf3, [[1, 1], [1, 0], [2, 0]])
    # time 0 sits at the highest power
    assert w.coefficient(2).tolist() == [[1], [1]]
    assert w.coefficient(0).tolist() == [[2], [0]]


def test_equivalence_examples(example):
    assert check_equivalences(example, [1, 1])
    assert all(equivalence_conditions(example, [1, 1]).values())
    assert check_equivalences(example, [0, 0, 0])
    # unterminated input: every condition fails together
    cond = equivalence_conditions(example, [1])
    assert not any(cond.values())
    assert check_equivalences(example, [1])


def test_equivalences_random():
    for params, q in [(CodeParams(2, 1, 1), 3), (CodeParams(3, 2, 1), 5), (CodeParams(3, 1, 2), 3)]:
        for sys in minimal_systems(params, q, 10):
            H = parity_check_matrix(sys)
            rng = np.random.default_rng(sys.n)
            for length in range(1, 5):
                U = rng.integers(0, q, size=(length, sys.k))
                cond = equivalence_conditions(sys, U, H)
                assert len(set(cond.values())) == 1
                Ut = terminate_inputs(sys, U)
                assert all(equivalence_conditions(sys, Ut, H).values())


def test_to_string_extension_field():
    F = GF(4)
    a = P(F, [[[2]], [[3]]])
    assert a.to_string() == "[[(a + 1)z + a]]"
    b = P(F, [[[3, 1]], [[1, 0]]])
    assert b.to_string() == "[[z + (a + 1), 1]]"
