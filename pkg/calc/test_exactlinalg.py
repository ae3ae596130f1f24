import random

import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from exactlinalg import (
    IntegerMatrix,
    MatrixShapeError,
    SmithForm,
    agrees_with_minors,
    determinant,
    minor_gcd,
    smith_normal_form,
)


def _sympy_divisors(m: IntegerMatrix):
    """Absolute diagonal of sympy's Smith form, zeros last."""
    d = sympy_snf(Matrix(m.to_rows()), domain=ZZ)
    diag = [abs(int(d[i, i])) for i in range(min(m.rows, m.cols))]
    return tuple(sorted((x for x in diag if x), key=int) + [0] * diag.count(0))


def _random_matrix(rng: random.Random) -> IntegerMatrix:
    rows, cols = rng.randint(1, 6), rng.randint(1, 6)
    spread = rng.choice((1, 2, 5, 20))
    return IntegerMatrix.from_rows(
        [[rng.randint(-spread, spread) for _ in range(cols)] for _ in range(rows)], cols=cols
    )


# ========================= IntegerMatrix =========================

def test_from_rows_rejects_ragged_rows():
    with pytest.raises(MatrixShapeError):
        IntegerMatrix.from_rows([[1, 2], [3]])


def test_index_out_of_range():
    m = IntegerMatrix.identity(2)
    assert m[1, 1] == 1
    with pytest.raises(MatrixShapeError):
        m[2, 0]


def test_matmul_and_transpose():
    a = IntegerMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert (a @ a.transpose()).to_rows() == [[14, 32], [32, 77]]
    with pytest.raises(MatrixShapeError):
        a @ a


def test_determinant_and_minor_gcd():
    assert determinant([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == -144
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2], [2, 4]]) == 0
    m = IntegerMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert minor_gcd(m, 1) == 2
    assert minor_gcd(m, 2) == 12
    assert minor_gcd(m, 3) == 144
    with pytest.raises(MatrixShapeError):
        minor_gcd(m, 4)


# ========================= Smith normal form =========================

def test_known_smith_form():
    m = IntegerMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert smith_normal_form(m).divisors == (2, 6, 12)


def test_identity_and_zero():
    assert smith_normal_form(IntegerMatrix.identity(4)).counts() == {1: 4}
    zero = smith_normal_form(IntegerMatrix.zeros(3, 2))
    assert zero.divisors == (0, 0)
    assert zero.rank == 0


def test_rectangular_rank_deficient():
    m = IntegerMatrix.from_rows([[2, 4, 6, 8], [1, 2, 3, 4], [0, 0, 0, 6]])
    form = smith_normal_form(m)
    assert form.divisors == (1, 6, 0)
    assert form.rank == 2
    assert list(form.counts()) == [1, 6, 0]


def test_empty_matrix():
    assert smith_normal_form(IntegerMatrix.zeros(0, 3)).divisors == ()


def test_is_chain():
    assert SmithForm((1, 2, 6, 0)).is_chain()
    assert not SmithForm((2, 3)).is_chain()
    assert not SmithForm((0, 2)).is_chain()


def test_random_matrices_agree_with_minor_gcds():
    rng = random.Random(7)
    for _ in range(500):
        m = _random_matrix(rng)
        assert agrees_with_minors(m), m.to_rows()


def test_unimodular_changes_keep_divisors():
    rng = random.Random(11)
    for _ in range(50):
        m = _random_matrix(rng)
        rows = list(range(m.rows))
        cols = list(range(m.cols))
        rng.shuffle(rows)
        rng.shuffle(cols)
        moved = m.permuted(rows, cols).with_row_negated(0)
        assert smith_normal_form(moved) == smith_normal_form(m)


def test_sympy_oracle():
    rng = random.Random(3)
    fixed = [
        IntegerMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]),
        IntegerMatrix.from_rows([[12, 6, 4], [3, 9, 6], [2, 16, 14]]),
        IntegerMatrix.diagonal([4, 6, 10]),
    ]
    samples = fixed + [IntegerMatrix.from_rows([[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)])
                       for _ in range(20)]
    for m in samples:
        assert smith_normal_form(m).divisors == _sympy_divisors(m), m.to_rows()


def test_diagonal_is_normalised_into_a_chain():
    assert smith_normal_form(IntegerMatrix.diagonal([4, 6, 10])).divisors == (2, 2, 60)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
