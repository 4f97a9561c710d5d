import itertools

import numpy as np
import pytest

from stabilizer_nonlocality.exceptions import (
    DimensionError,
    DomainError,
    InvalidPhase,
    MinusIdentity,
    NotAbelian,
    SingularMatrix,
)
from stabilizer_nonlocality.gf2 import BitMatrix
from stabilizer_nonlocality.pauli import commutation_phase, parse_pauli
from stabilizer_nonlocality.stabilizer import (
    BasisChange,
    GroupValidator,
    StabilizerGroup,
    apply_basis_change,
    bipartition_count,
    commutation_matrices,
    enumerate_group,
    is_gme,
    max_gme_dimension,
    random_stabilizer_group,
    subspace_dimension,
    validate_and_canonicalize,
)


class TestValidation:
    def test_dependent_generators_are_dropped(self):
        ops = [parse_pauli(t) for t in ("II", "XX", "ZZ", "-YY")]
        with pytest.warns(UserWarning):
            group = validate_and_canonicalize(ops)
        assert group.k == 2
        assert group.texts() == ["+XX", "+ZZ"]
        assert group.dropped == (1, 4)

    def test_anticommuting_generators(self):
        with pytest.raises(NotAbelian) as info:
            StabilizerGroup.from_texts(["XX", "ZX"])
        assert (info.value.i, info.value.j) == (1, 2)

    def test_minus_identity(self):
        with pytest.raises(MinusIdentity):
            StabilizerGroup.from_texts(["XX", "-XX"])
        with pytest.raises(MinusIdentity):
            StabilizerGroup.from_texts(["XX", "ZZ", "YY"])

    def test_non_hermitian_generator(self):
        with pytest.raises(InvalidPhase) as info:
            StabilizerGroup.from_texts(["ZZ", "iXX"])
        assert info.value.i == 2

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            validate_and_canonicalize([])
        with pytest.raises(DomainError):
            validate_and_canonicalize([parse_pauli("II"), parse_pauli("II")])
        with pytest.raises(DimensionError):
            validate_and_canonicalize([parse_pauli("XX"), parse_pauli("ZZZ")])

    def test_echelon_form_spans_the_same_group(self, five_qubit):
        echelon = StabilizerGroup.from_texts(
            ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], echelon=True
        )
        assert echelon.canonical_flag
        assert echelon.k == 4
        original = {op.to_text() for op in enumerate_group(five_qubit)}
        assert {op.to_text() for op in enumerate_group(echelon)} == original

    def test_subspace_dimension(self, five_qubit, bell):
        assert subspace_dimension(five_qubit) == 2
        assert subspace_dimension(bell) == 1
        assert subspace_dimension(StabilizerGroup.from_texts(["XXX", "ZZI"])) == 2


class TestEnumeration:
    def test_bell_group_in_mask_order(self, bell):
        assert [op.to_text() for op in enumerate_group(bell)] == ["+II", "+XX", "+ZZ", "-YY"]

    def test_elements_are_hermitian_and_commute(self, five_qubit):
        elements = enumerate_group(five_qubit)
        assert len(elements) == 16
        assert len({op.to_text() for op in elements}) == 16
        assert all(op.is_hermitian() for op in elements)
        assert all(commutation_phase(a, b) == 0 for a, b in itertools.combinations(elements, 2))

    def test_element_by_mask(self, five_qubit):
        assert five_qubit.element(0b0100).to_text() == "+XIXZZ"
        assert five_qubit.element(0).is_identity()


class TestCommutationMatrices:
    def test_first_party_of_the_five_qubit_code(self, five_qubit):
        cms = commutation_matrices(five_qubit)
        assert cms[1].to_lists() == [
            [0, 0, 0, 1],
            [0, 0, 0, 0],
            [0, 0, 0, 1],
            [1, 0, 1, 0],
        ]

    def test_matrices_are_symmetric_with_zero_diagonal(self, five_qubit):
        cms = commutation_matrices(five_qubit)
        for alpha in range(1, 6):
            assert cms[alpha].is_symmetric()
            assert cms[alpha].has_zero_diagonal()

    def test_sum_over_all_parties_vanishes(self, five_qubit, ghz3):
        assert commutation_matrices(five_qubit).fact1_holds()
        assert commutation_matrices(ghz3).fact1_holds()

    def test_party_out_of_range(self, bell):
        with pytest.raises(DomainError):
            commutation_matrices(bell)[3]


class TestGME:
    def test_five_qubit_code_is_gme(self, five_qubit):
        verdict = is_gme(five_qubit)
        assert verdict.is_gme
        assert verdict.n_parties == 5
        assert verdict.bipartitions_checked == bipartition_count(5) == 15
        assert verdict.violating_bipartition is None

    def test_product_state(self, product_pair):
        verdict = is_gme(product_pair)
        assert not verdict
        assert verdict.violating_bipartition == (1,)

    def test_bell_and_ghz(self, bell, ghz3):
        assert is_gme(bell).is_gme
        assert is_gme(ghz3).is_gme

    def test_worker_count_does_not_change_the_verdict(self):
        group = StabilizerGroup.from_texts(["XII", "IXX", "IZZ"])
        single = is_gme(group)
        assert not single.is_gme
        assert single.violating_bipartition == (1,)
        for workers in (2, 3, 4):
            parallel = is_gme(group, workers=workers)
            assert parallel.is_gme == single.is_gme
            assert parallel.violating_bipartition == single.violating_bipartition

    def test_single_party(self):
        with pytest.raises(DomainError):
            is_gme(StabilizerGroup.from_texts(["Z"]))

    @pytest.mark.parametrize("n_parties, expected", [(4, 2), (5, 2), (11, 64)])
    def test_max_gme_dimension(self, n_parties, expected):
        assert max_gme_dimension(n_parties) == expected

    def test_max_gme_dimension_needs_four_parties(self):
        with pytest.raises(DomainError):
            max_gme_dimension(3)


class TestBasisChange:
    def test_bell_basis_change(self, bell):
        changed = apply_basis_change(bell, BasisChange.from_lists([[1, 1], [0, 1]]))
        assert changed.texts() == ["+XX", "-YY"]

    def test_commutation_matrices_transform_by_congruence(self, five_qubit):
        a = BitMatrix.from_lists([[1, 0, 1, 0], [1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]])
        changed = apply_basis_change(five_qubit, a)
        before = commutation_matrices(five_qubit)
        after = commutation_matrices(changed)
        for alpha in range(1, 6):
            assert after[alpha] == a.T @ before[alpha] @ a

    def test_gme_is_basis_independent(self, five_qubit, product_pair):
        a = BitMatrix.from_lists([[1, 1, 0, 0], [0, 1, 0, 0], [0, 1, 1, 0], [1, 0, 0, 1]])
        assert is_gme(apply_basis_change(five_qubit, a)).is_gme
        swap = BitMatrix.from_lists([[0, 1], [1, 1]])
        assert not is_gme(apply_basis_change(product_pair, swap)).is_gme

    def test_singular_change(self, bell):
        with pytest.raises(SingularMatrix):
            BasisChange.from_lists([[1, 1], [1, 1]])
        with pytest.raises(SingularMatrix):
            apply_basis_change(bell, BitMatrix.from_lists([[1, 0], [1, 0]]))

    def test_wrong_size(self, bell):
        with pytest.raises(DimensionError):
            apply_basis_change(bell, BitMatrix.identity(3))


class TestRandomGroups:
    @pytest.mark.parametrize("seed", range(5))
    def test_random_group_is_valid(self, seed):
        group = random_stabilizer_group(6, 4, rng=seed)
        assert group.k == 4
        rebuilt = validate_and_canonicalize(list(group.generators))
        assert rebuilt.k == 4
        assert commutation_matrices(group).fact1_holds()

    def test_reproducible_with_seed(self):
        assert (
            random_stabilizer_group(5, 3, rng=11).texts()
            == random_stabilizer_group(5, 3, rng=11).texts()
        )

    def test_k_out_of_range(self):
        with pytest.raises(DomainError):
            random_stabilizer_group(3, 4)
        with pytest.raises(DomainError):
            random_stabilizer_group(3, 0, rng=np.random.default_rng(0))


class TestGroupValidator:
    def test_reports_all_problems(self):
        ops = [parse_pauli(t) for t in ("XX", "ZX", "iZZ")]
        result = GroupValidator.validate(ops)
        assert not result.is_valid
        assert any("not Hermitian" in e for e in result.errors)
        assert any("do not commute" in e for e in result.errors)

    def test_details_of_a_valid_group(self):
        ops = [parse_pauli(t) for t in ("XX", "ZZ", "-YY")]
        result = GroupValidator.validate(ops)
        assert result.is_valid
        assert result.details["k"] == 2
        assert result.details["subspace_dimension"] == 1
        assert result.details["dropped"] == [3]
        assert result.has_warnings()

    def test_minus_identity_is_reported(self):
        result = GroupValidator.validate([parse_pauli("ZZ"), parse_pauli("-ZZ")])
        assert not result.is_valid
        assert "-I" in result.errors[0]

    def test_mixed_site_counts(self):
        result = GroupValidator.validate([parse_pauli("XX"), parse_pauli("Z")])
        assert not result.is_valid
