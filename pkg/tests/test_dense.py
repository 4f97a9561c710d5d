import numpy as np
import pytest

from stabilizer_nonlocality.exceptions import CapacityError, DimensionError, DomainError, ZeroProbability
from stabilizer_nonlocality.pauli import parse_pauli
from stabilizer_nonlocality.sim.dense import (
    PHI_PLUS,
    DenseState,
    basis_eigenvector,
    corrected_fidelity,
    dense_projector,
    dense_pure_code_state,
    dense_run_protocol,
)
from stabilizer_nonlocality.stabilizer import StabilizerGroup, random_stabilizer_group, subspace_dimension
from stabilizer_nonlocality.witness import (
    corrective_unitaries,
    find_witness,
    post_measurement_stabilizers,
    synthesize_protocol,
    witness_from_vectors,
)


def test_projector_of_a_single_qubit():
    state = dense_projector(StabilizerGroup.from_texts(["Z"]))
    np.testing.assert_allclose(state.matrix, np.diag([1.0, 0.0]), atol=1e-12)


def test_bell_projector_is_phi_plus(bell):
    state = dense_projector(bell)
    np.testing.assert_allclose(state.matrix, np.outer(PHI_PLUS, PHI_PLUS.conj()), atol=1e-12)


def test_five_qubit_code_space(five_qubit):
    state = dense_projector(five_qubit)
    assert state.is_valid()
    assert state.rank() == subspace_dimension(five_qubit) == 2
    for generator in five_qubit.generators:
        assert state.expectation(generator) == pytest.approx(1.0)


def test_expectations_on_phi_plus():
    state = DenseState(2, vector=PHI_PLUS)
    assert state.expectation(parse_pauli("XX")) == pytest.approx(1.0)
    assert state.expectation(parse_pauli("-YY")) == pytest.approx(1.0)
    assert state.expectation(parse_pauli("XI")) == pytest.approx(0.0)


def test_state_construction_errors():
    with pytest.raises(DomainError):
        DenseState(1)
    with pytest.raises(DimensionError):
        DenseState(2, vector=np.ones(2))
    with pytest.raises(DimensionError):
        DenseState(2, vector=PHI_PLUS).expectation(parse_pauli("X"))


@pytest.mark.parametrize("basis", ["X", "Y", "Z"])
@pytest.mark.parametrize("outcome", [0, 1])
def test_basis_eigenvectors(basis, outcome):
    vector = basis_eigenvector(basis, outcome)
    eigenvalue = 1 - 2 * outcome
    np.testing.assert_allclose(parse_pauli(basis).to_matrix() @ vector, eigenvalue * vector, atol=1e-12)


def test_unknown_basis():
    with pytest.raises(DomainError):
        basis_eigenvector("W", 0)


class TestProtocol:
    @pytest.fixture
    def protocol(self, five_qubit):
        return synthesize_protocol(
            witness_from_vectors(five_qubit, 1, 4, (0, 0, 1, 0), (0, 0, 0, 1))
        )

    def test_every_five_qubit_branch(self, five_qubit, protocol):
        rho = dense_projector(five_qubit)
        total = 0.0
        for outcomes in protocol.outcome_vectors():
            reduced, probability = dense_run_protocol(rho, protocol, outcomes)
            assert probability == pytest.approx(0.125)
            total += probability
            s_i, s_j = post_measurement_stabilizers(protocol, outcomes)
            assert reduced.expectation(s_i) == pytest.approx(1.0)
            assert reduced.expectation(s_j) == pytest.approx(1.0)
            rule = corrective_unitaries(s_i, s_j)
            assert corrected_fidelity(reduced, rule) == pytest.approx(1.0, abs=1e-9)
        assert total == pytest.approx(1.0)

    def test_pure_code_states(self, five_qubit, protocol):
        state = dense_pure_code_state(five_qubit, rng=3)
        assert state.is_pure and state.is_valid()
        for outcomes in protocol.outcome_vectors():
            try:
                reduced, _ = dense_run_protocol(state, protocol, outcomes)
            except ZeroProbability:
                continue
            rule = corrective_unitaries(*post_measurement_stabilizers(protocol, outcomes))
            assert corrected_fidelity(reduced, rule) == pytest.approx(1.0, abs=1e-9)

    def test_bell_pair_needs_no_measurement(self, bell):
        protocol = synthesize_protocol(find_witness(bell, 1, 2))
        reduced, probability = dense_run_protocol(dense_projector(bell), protocol, {})
        assert probability == pytest.approx(1.0)
        assert corrected_fidelity(reduced) == pytest.approx(1.0)

    def test_impossible_branch(self, ghz3):
        group = ghz3
        protocol = synthesize_protocol(witness_from_vectors(group, 1, 2, (1, 0, 0), (0, 1, 0)))
        assert dict(protocol.bases) == {3: "X"}
        product_state = dense_projector(StabilizerGroup.from_texts(["XXI", "ZZI", "IIX"]))
        with pytest.raises(ZeroProbability):
            dense_run_protocol(product_state, protocol, {3: 1})


def test_capacity_cap():
    with pytest.raises(CapacityError) as info:
        dense_projector(random_stabilizer_group(11, 3, rng=0))
    assert info.value.cap_name == "DENSE_MATRIX_MAX_QUBITS"


def test_fidelity_needs_two_qubits():
    with pytest.raises(DimensionError):
        corrected_fidelity(DenseState(1, vector=np.array([1.0, 0.0], dtype=complex)))
