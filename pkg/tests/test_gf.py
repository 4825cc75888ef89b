import itertools
import pickle

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdpcodes.errors import (
    DimensionMismatch,
    FieldMismatch,
    IndexOutOfRange,
    NonPrimeCharacteristic,
    NotSquare,
    NotStrictlyIncreasing,
    ReducibleModulus,
)
from mdpcodes.gf import (
    GF,
    FieldElement,
    FieldMatrix,
    determinant,
    field_create,
    mat_arith,
    rank,
    right_kernel_basis,
    solve,
    solve_lexmin,
    submatrix,
)

from oracles import laplace_det

SMALL_FIELDS = [2, 3, 4, 8, 9]


def test_prime_fields():
    F = field_create(2, 1)
    assert (F.p, F.m, F.q) == (2, 1, 2)
    assert F.add(1, 1) == 0
    F3 = field_create(3, 1)
    assert F3.mul(2, 2) == 1
    assert F3.inv(2) == 2


def test_default_modulus_gf4():
    F = field_create(2, 2)
    assert F.modulus == (1, 1, 1)
    # x * x = x + 1
    assert F.mul(2, 2) == 3


def test_default_modulus_is_smallest_irreducible():
    assert field_create(2, 3).modulus == (1, 1, 0, 1)
    assert field_create(3, 2).modulus == (1, 0, 1)


def test_same_inputs_same_field():
    assert field_create(2, 4) is field_create(2, 4)
    assert field_create(2, 4).modulus == field_create(2, 4).modulus


def test_explicit_modulus():
    F = field_create(2, 3, (1, 0, 1, 1))
    assert F.modulus == (1, 0, 1, 1)
    assert F != field_create(2, 3)


def test_bad_characteristic():
    with pytest.raises(NonPrimeCharacteristic):
        field_create(4, 1)
    with pytest.raises(NonPrimeCharacteristic):
        GF(6)


def test_reducible_modulus():
    # x^2 + 1 = (x + 1)^2 over GF(2)
    with pytest.raises(ReducibleModulus):
        field_create(2, 2, (1, 0, 1))


@pytest.mark.parametrize("q", SMALL_FIELDS)
def test_field_axioms_exhaustive(q):
    F = GF(q)
    els = list(range(q))
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
    for a, b, c in itertools.product(els, repeat=3):
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in els[1:]:
        assert F.mul(a, F.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@pytest.mark.parametrize("q", SMALL_FIELDS)
def test_vector_ops_match_scalar(q):
    F = GF(q)
    a, b = np.array(np.meshgrid(range(q), range(q))).reshape(2, -1)
    assert F.vadd(a, b).tolist() == [F.add(x, y) for x, y in zip(a, b)]
    assert F.vmul(a, b).tolist() == [F.mul(x, y) for x, y in zip(a, b)]
    assert F.vneg(a).tolist() == [F.neg(x) for x in a]


def test_element_operators(gf3):
    a, b = gf3(2), gf3(1)
    assert a + b == gf3(0)
    assert a * a == gf3(1)
    assert a / a == gf3(1)
    assert -b == gf3(2)
    assert gf3(-1) == gf3(2)
    assert a ** 2 == gf3(1)
    assert FieldElement(GF(4), 3).coeffs == [1, 1]
    with pytest.raises(FieldMismatch):
        gf3(1) + GF(5)(1)


def test_field_pickles():
    F = GF(9)
    G = pickle.loads(pickle.dumps(F))
    assert G == F and G.mul(4, 7) == F.mul(4, 7)


# -- matrices --------------------------------------------------------------------------


def test_identity_product(gf3):
    M = FieldMatrix(gf3, [[1, 2], [0, 1]])
    assert FieldMatrix.identity(gf3, 2) @ M == M


def test_product_example(gf3):
    M = FieldMatrix(gf3, [[1, 1], [1, 2]])
    v = FieldMatrix(gf3, [[1], [1]])
    assert (M @ v).tolist() == [[2], [0]]
    assert mat_arith("mul", M, v).tolist() == [[2], [0]]


def test_zero_scalar(gf3):
    M = FieldMatrix(gf3, [[1, 2], [2, 1]])
    assert (M * 0).is_zero()
    assert mat_arith("scalar_mul", M, gf3(0)).is_zero()


def test_arith_errors(gf3):
    M = FieldMatrix(gf3, [[1, 2]])
    with pytest.raises(DimensionMismatch):
        M @ M
    with pytest.raises(DimensionMismatch):
        M + FieldMatrix(gf3, [[1], [2]])
    with pytest.raises(FieldMismatch):
        M + FieldMatrix(GF(5), [[1, 2]])
    with pytest.raises(ValueError):
        mat_arith("div", M, M)


def test_matrix_is_immutable(gf3):
    M = FieldMatrix(gf3, [[1]])
    with pytest.raises(AttributeError):
        M.field = GF(5)
    with pytest.raises(ValueError):
        M.data[0, 0] = 2


def test_determinant_examples(gf3):
    assert determinant(FieldMatrix.identity(gf3, 4)) == gf3(1)
    assert determinant(FieldMatrix(gf3, [[1, 2], [1, 2]])) == gf3(0)
    assert determinant(FieldMatrix(gf3, [[1, 1], [1, 2]])) == gf3(1)
    assert determinant(FieldMatrix.zeros(gf3, 0, 0)) == gf3(1)
    with pytest.raises(NotSquare):
        determinant(FieldMatrix(gf3, [[1, 2]]))


def test_rank_examples():
    F2 = GF(2)
    assert rank(FieldMatrix.zeros(F2, 3, 2)) == 0
    assert rank(FieldMatrix.identity(F2, 4)) == 4
    assert rank(FieldMatrix(F2, [[1, 1], [1, 1]])) == 1


def test_kernel_examples(gf3):
    assert right_kernel_basis(FieldMatrix.identity(gf3, 3)).cols == 0
    K = right_kernel_basis(FieldMatrix.zeros(gf3, 2, 2))
    assert K == FieldMatrix.identity(gf3, 2)
    K = right_kernel_basis(FieldMatrix(gf3, [[1, 2]]))
    assert K.tolist() == [[1], [1]]


def test_submatrix(gf3):
    M = FieldMatrix(gf3, [[1, 2, 0], [0, 1, 2], [2, 0, 1]])
    assert submatrix(M, [1, 2, 3], [1, 2, 3]) == M
    assert submatrix(M, [1], [1]).tolist() == [[1]]
    assert submatrix(M, [2, 3], [1, 2]).tolist() == [[0, 1], [2, 0]]
    with pytest.raises(IndexOutOfRange):
        submatrix(M, [4], [1])
    with pytest.raises(NotStrictlyIncreasing):
        submatrix(M, [2, 1], [1, 2])


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_det_nonzero_iff_full_rank(q):
    F = GF(q)
    rng = np.random.default_rng(q)
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        M = FieldMatrix.random(F, n, n, rng)
        assert (determinant(M) != F(0)) == (rank(M) == n)


@pytest.mark.parametrize("q", [2, 3])
def test_det_matches_laplace(q):
    F = GF(q)
    rng = np.random.default_rng(100 + q)
    for _ in range(500):
        n = int(rng.integers(1, 6))
        M = FieldMatrix.random(F, n, n, rng)
        assert determinant(M).value == laplace_det(M.tolist(), F)


def test_det_matches_laplace_extension_field():
    F = GF(9)
    rng = np.random.default_rng(9)
    for _ in range(200):
        M = FieldMatrix.random(F, 4, 4, rng)
        assert determinant(M).value == laplace_det(M.tolist(), F)


@pytest.mark.parametrize("q", [2, 3, 4, 7, 8])
def test_kernel_property(q):
    F = GF(q)
    rng = np.random.default_rng(q)
    for _ in range(200):
        r, c = (int(x) for x in rng.integers(1, 6, size=2))
        M = FieldMatrix.random(F, r, c, rng)
        K = right_kernel_basis(M)
        assert K.cols == c - rank(M)
        assert (M @ K).is_zero()
        assert rank(K) == K.cols


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_solve_consistency(r, c, seed):
    F = GF(5)
    rng = np.random.default_rng(seed)
    M = FieldMatrix.random(F, r, c, rng)
    x0 = FieldMatrix.random(F, c, 1, rng)
    b = M @ x0
    x = solve(M, b)
    assert x is not None and M @ x == b
    xl = solve_lexmin(M, b)
    assert M @ xl == b
    # lexicographic minimality against brute force
    best = min(
        v for v in itertools.product(range(5), repeat=c) if (M @ FieldMatrix(F, [[a] for a in v])) == b
    )
    assert tuple(xl.data[:, 0]) == best


def test_solve_inconsistent(gf3):
    M = FieldMatrix(gf3, [[1, 1], [1, 1]])
    assert solve(M, FieldMatrix(gf3, [[1], [2]])) is None
