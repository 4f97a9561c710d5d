import pytest

from stabilizer_nonlocality.exceptions import DimensionError, SingularMatrix
from stabilizer_nonlocality.gf2 import (
    BitMatrix,
    EchelonBasis,
    bits_to_vector,
    dot,
    in_span,
    nullspace,
    rank,
    solve,
    vector_to_bits,
)


def test_vector_bit_packing():
    assert vector_to_bits([1, 0, 1]) == 0b101
    assert bits_to_vector(0b110, 3) == (0, 1, 1)


def test_dot_is_parity():
    assert dot(0b1011, 0b0011) == 0
    assert dot(0b1011, 0b0010) == 1


class TestBitMatrix:
    def test_entries_and_columns(self):
        m = BitMatrix.from_lists([[1, 1], [0, 1]])
        assert m[0, 1] == 1
        assert m[1, 0] == 0
        assert m.column(0) == 0b01
        assert m.column(1) == 0b11
        assert m.to_lists() == [[1, 1], [0, 1]]

    def test_upper_triangular_is_its_own_inverse(self):
        m = BitMatrix.from_lists([[1, 1], [0, 1]])
        assert m.inverse() == m
        assert (m @ m.inverse()) == BitMatrix.identity(2)

    def test_inverse_of_three_by_three(self):
        m = BitMatrix.from_lists([[1, 1, 0], [0, 1, 1], [1, 1, 1]])
        assert m @ m.inverse() == BitMatrix.identity(3)
        assert m.inverse() @ m == BitMatrix.identity(3)

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            BitMatrix.from_lists([[1, 1], [1, 1]]).inverse()
        with pytest.raises(SingularMatrix):
            BitMatrix.zeros(2, 3).inverse()

    def test_transpose_and_symmetry(self):
        m = BitMatrix.from_lists([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
        assert m.T == m
        assert m.is_symmetric()
        assert m.has_zero_diagonal()
        assert BitMatrix.from_lists([[0, 1], [0, 0]]).T.to_lists() == [[0, 0], [1, 0]]

    def test_matvec(self):
        m = BitMatrix.from_lists([[0, 1], [1, 0]])
        assert m.matvec(0b10) == 0b01

    def test_xor_and_shape_checks(self):
        a = BitMatrix.identity(2)
        assert (a ^ a).is_zero()
        with pytest.raises(DimensionError):
            a ^ BitMatrix.zeros(3)
        with pytest.raises(DimensionError):
            a @ BitMatrix.zeros(3)
        with pytest.raises(DimensionError):
            BitMatrix.from_lists([[1, 0], [1]])

    def test_rank(self):
        assert BitMatrix.from_lists([[1, 1, 0], [0, 1, 1], [1, 0, 1]]).rank() == 2


class TestEchelonBasis:
    def test_add_reports_dependence(self):
        basis = EchelonBasis()
        assert basis.add(0b011)
        assert basis.add(0b110)
        assert not basis.add(0b101)
        assert basis.dimension == 2

    def test_decompose_names_the_inputs(self):
        basis = EchelonBasis()
        for vector in (0b0011, 0b0110, 0b1000):
            basis.add(vector)
        assert basis.decompose(0b0101) == 0b011
        assert basis.decompose(0b1101) == 0b111
        assert basis.decompose(0b0001) is None

    def test_contains(self):
        basis = EchelonBasis()
        basis.add(0b11)
        assert basis.contains(0)
        assert basis.contains(0b11)
        assert not basis.contains(0b01)


def test_module_rank_and_span():
    assert rank([0b011, 0b110, 0b101]) == 2
    assert in_span(0b101, [0b011, 0b110])
    assert not in_span(0b100, [0b011, 0b110])


def test_solve_consistent_system():
    rows = [0b011, 0b110]
    u = solve(rows, [1, 0], 3)
    assert u is not None
    assert [dot(r, u) for r in rows] == [1, 0]


def test_solve_inconsistent_system():
    assert solve([0b011, 0b011], [0, 1], 2) is None


def test_nullspace_is_orthogonal_and_complete():
    rows = [0b0011, 0b0110]
    basis = nullspace(rows, 4)
    assert len(basis) == 2
    assert all(dot(r, v) == 0 for r in rows for v in basis)
    assert rank(basis) == 2
