import numpy as np
import pytest

from stabilizer_nonlocality.exceptions import DimensionError, DomainError, ParseError
from stabilizer_nonlocality.pauli import (
    PauliOperator,
    commutation_phase,
    multiply,
    parse_pauli,
    restrict,
    site_commutation_phases,
    site_letter,
    site_pauli,
    to_text,
)


class TestParse:
    def test_letters_and_sign(self):
        op = parse_pauli("+XZZXI")
        assert op.x == (1, 0, 0, 1, 0)
        assert op.z == (0, 1, 1, 0, 0)
        assert op.phase == 0
        assert op.to_text() == "+XZZXI"

    def test_y_carries_a_phase_of_one(self):
        op = parse_pauli("Y")
        assert (op.x, op.z, op.phase) == ((1,), (1,), 1)
        assert op.is_hermitian()

    def test_minus_yy_prints_back(self):
        op = parse_pauli("-YY")
        assert op.phase == 0
        assert op.hermitian_sign == 1
        assert to_text(op) == "-YY"

    def test_imaginary_prefix(self):
        op = parse_pauli("-iXZ")
        assert op.phase == 3
        assert not op.is_hermitian()
        assert op.to_text() == "-iXZ"

    def test_bracketed_xz_token(self):
        op = parse_pauli("(XZ)I")
        assert op.x == (1, 0)
        assert op.z == (1, 0)
        assert op.phase == 0
        # XZ = -iY
        assert op.to_text() == "-iYI"

    def test_tensor_separators(self):
        op = parse_pauli("X ⊗ Z ⊗ I ⊗ XZ")
        assert op.n_sites == 4
        assert op.x == (1, 0, 0, 1)
        assert op.z == (0, 1, 0, 1)
        assert parse_pauli("X*Z*I*XZ") == op

    def test_invalid_letter_reports_column(self):
        with pytest.raises(ParseError) as info:
            parse_pauli("XQ")
        assert info.value.column == 2

    def test_empty_text(self):
        with pytest.raises(ParseError):
            parse_pauli("   ")

    def test_sign_without_sites(self):
        with pytest.raises(ParseError):
            parse_pauli("-i")

    def test_qudit_tokens(self):
        op = parse_pauli("w^1 X^1Z^2.X^0Z^1.I", d=3)
        assert op.d == 3
        assert op.x == (1, 0, 0)
        assert op.z == (2, 1, 0)
        assert op.phase == 1
        assert parse_pauli(op.to_text(), d=3) == op

    def test_qudit_shorthands(self):
        op = parse_pauli("X.Z.XZ.X^2", d=5)
        assert op.x == (1, 0, 1, 2)
        assert op.z == (0, 1, 1, 0)

    def test_bad_qudit_token(self):
        with pytest.raises(ParseError):
            parse_pauli("X.Q", d=3)

    def test_dimension_below_two(self):
        with pytest.raises(DomainError):
            parse_pauli("X", d=1)


class TestAlgebra:
    def test_x_times_z_and_z_times_x(self):
        x, z = parse_pauli("X"), parse_pauli("Z")
        assert multiply(x, z).phase == 0
        assert multiply(z, x).phase == 2

    def test_group_relation_closes(self):
        xx, zz = parse_pauli("XX"), parse_pauli("ZZ")
        result = multiply(multiply(multiply(xx, zz), xx), zz)
        assert result.is_identity()
        assert result.phase == 0

    def test_xx_times_zz_is_minus_yy(self):
        assert multiply(parse_pauli("XX"), parse_pauli("ZZ")).to_text() == "-YY"

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_multiply_matches_dense_matrices(self, d, rng):
        for _ in range(10):
            a = PauliOperator(
                d=d,
                x=tuple(rng.integers(0, d, 2)),
                z=tuple(rng.integers(0, d, 2)),
                phase=int(rng.integers(0, 2 * d)),
            )
            b = PauliOperator(
                d=d,
                x=tuple(rng.integers(0, d, 2)),
                z=tuple(rng.integers(0, d, 2)),
                phase=int(rng.integers(0, 2 * d)),
            )
            np.testing.assert_allclose(
                multiply(a, b).to_matrix(), a.to_matrix() @ b.to_matrix(), atol=1e-12
            )

    def test_commutation_phase_for_qubits(self):
        assert commutation_phase(parse_pauli("XZZXI"), parse_pauli("ZXIXZ")) == 0
        assert commutation_phase(parse_pauli("XI"), parse_pauli("ZI")) == 1

    def test_qudit_commutation_phase_matches_matrices(self):
        x, z = parse_pauli("X", d=3), parse_pauli("Z", d=3)
        c = commutation_phase(x, z)
        omega = np.exp(2j * np.pi / 3)
        np.testing.assert_allclose(
            z.to_matrix() @ x.to_matrix(), omega**c * (x.to_matrix() @ z.to_matrix()), atol=1e-12
        )

    def test_site_phases_sum_to_total(self):
        a, b = parse_pauli("XZZXI"), parse_pauli("ZXIXZ")
        phases = site_commutation_phases(a, b)
        assert phases == (1, 1, 0, 0, 0)
        assert sum(phases) % 2 == commutation_phase(a, b)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            multiply(parse_pauli("XX"), parse_pauli("X"))
        with pytest.raises(DimensionError):
            multiply(parse_pauli("X"), parse_pauli("X", d=3))

    def test_power_of_qudit_x(self):
        x = parse_pauli("X", d=3)
        assert x.power(3).is_identity()
        assert x.power(2).x == (2,)


class TestRestriction:
    def test_restrict_keeps_letters(self):
        op = parse_pauli("X⊗Z⊗I⊗XZ")
        sub = restrict(op, {1, 3})
        assert sub.letters == "XI"
        assert sub.phase == 0

    def test_restrict_drops_phase(self):
        sub = restrict(parse_pauli("-YY"), [2])
        assert (sub.x, sub.z, sub.phase) == ((1,), (1,), 0)

    def test_restrict_errors(self):
        op = parse_pauli("XX")
        with pytest.raises(DomainError):
            restrict(op, [])
        with pytest.raises(DomainError):
            restrict(op, [3])

    def test_site_letters(self):
        g3, g4 = parse_pauli("XIXZZ"), parse_pauli("ZXIXZ")
        assert site_letter(g3, 2) == "I"
        assert site_letter(g4, 2) == "X"
        assert site_pauli(parse_pauli("Y"), 1) == "Y"


class TestDenseOracle:
    def test_single_site_convention(self):
        x = parse_pauli("X", d=3).to_matrix()
        basis = np.eye(3)
        np.testing.assert_allclose(x @ basis[0], basis[1])

    def test_site_one_is_most_significant(self):
        op = parse_pauli("XI").to_matrix()
        ket = np.zeros(4)
        ket[0] = 1.0
        assert np.argmax(np.abs(op @ ket)) == 2

    def test_apply_matches_matrix(self, rng):
        op = parse_pauli("-YXZ")
        vector = rng.normal(size=8) + 1j * rng.normal(size=8)
        np.testing.assert_allclose(op.apply(vector), op.to_matrix() @ vector, atol=1e-12)

    def test_hermitian_operators_square_to_identity(self):
        for text in ("XZZXI", "-YY", "ZYX"):
            m = parse_pauli(text).to_matrix()
            np.testing.assert_allclose(m @ m, np.eye(m.shape[0]), atol=1e-12)
