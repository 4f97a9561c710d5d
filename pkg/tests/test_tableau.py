import numpy as np
import pytest

from stabilizer_nonlocality.exceptions import ContradictionError, DomainError
from stabilizer_nonlocality.pauli import PauliOperator, parse_pauli
from stabilizer_nonlocality.sim.tableau import (
    StabilizerTableau,
    tableau_measure,
    tableau_run_protocol,
)
from stabilizer_nonlocality.stabilizer import StabilizerGroup
from stabilizer_nonlocality.witness import (
    post_measurement_stabilizers,
    synthesize_protocol,
    witness_from_vectors,
)


def _tableau(*texts: str) -> StabilizerTableau:
    return StabilizerTableau.from_group(StabilizerGroup.from_texts(texts))


class TestMeasurement:
    def test_deterministic_z_on_zero(self):
        outcome, after = tableau_measure(_tableau("Z"), 1, "Z")
        assert outcome == 0
        assert after.texts() == ["+Z"]

    def test_forced_x_outcome_on_zero(self):
        outcome, after = tableau_measure(_tableau("Z"), 1, "X", forced_outcome=1)
        assert outcome == 1
        assert after.texts() == ["-X"]

    def test_random_outcome_uses_the_generator(self):
        outcomes = {
            tableau_measure(_tableau("Z"), 1, "X", rng=np.random.default_rng(seed))[0]
            for seed in range(20)
        }
        assert outcomes == {0, 1}

    def test_contradiction(self):
        with pytest.raises(ContradictionError) as info:
            tableau_measure(_tableau("Z"), 1, "Z", forced_outcome=1)
        assert info.value.determined == 0

    def test_measuring_half_of_a_bell_pair(self):
        for r in (0, 1):
            _, after = tableau_measure(_tableau("XX", "ZZ"), 1, "Z", forced_outcome=r)
            assert after.sign_of(parse_pauli("IZ")) == r
            assert after.sign_of(parse_pauli("XX")) is None

    def test_commuting_free_measurement_appends_a_row(self):
        outcome, after = tableau_measure(_tableau("ZI"), 2, "Z", forced_outcome=1)
        assert outcome == 1
        assert after.texts() == ["+ZI", "-IZ"]

    def test_input_tableau_is_untouched(self):
        before = _tableau("XX", "ZZ")
        tableau_measure(before, 1, "Z", forced_outcome=1)
        assert before.texts() == ["+XX", "+ZZ"]

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            tableau_measure(_tableau("Z"), 1, "Q")
        with pytest.raises(DomainError):
            tableau_measure(_tableau("Z"), 1, "X", forced_outcome=2)


class TestSigns:
    def test_sign_of_products(self):
        t = _tableau("XX", "ZZ")
        assert t.sign_of(parse_pauli("YY")) == 1
        assert t.expectation(parse_pauli("-YY")) == 1
        assert t.expectation(parse_pauli("YY")) == -1
        assert t.expectation(parse_pauli("XI")) == 0
        assert t.signs == [0, 0]


class TestProtocolRun:
    def test_five_qubit_branches_match_the_symbolic_pairs(self, five_qubit):
        witness = witness_from_vectors(five_qubit, 1, 4, (0, 0, 1, 0), (0, 0, 0, 1))
        protocol = synthesize_protocol(witness)
        for outcomes in protocol.outcome_vectors():
            got = tableau_run_protocol(five_qubit, protocol, outcomes)
            assert got == post_measurement_stabilizers(protocol, outcomes)

    def test_first_branch_of_the_five_qubit_code(self, five_qubit):
        witness = witness_from_vectors(five_qubit, 1, 4, (0, 0, 1, 0), (0, 0, 0, 1))
        protocol = synthesize_protocol(witness)
        s_i, s_j = tableau_run_protocol(five_qubit, protocol, {2: 0, 3: 0, 5: 0})
        assert (s_i.to_text(), s_j.to_text()) == ("+XZ", "+ZX")

    def test_outcomes_must_cover_the_measured_sites(self, five_qubit):
        witness = witness_from_vectors(five_qubit, 1, 4, (0, 0, 1, 0), (0, 0, 0, 1))
        protocol = synthesize_protocol(witness)
        with pytest.raises(DomainError):
            tableau_run_protocol(five_qubit, protocol, {2: 0})

    def test_single_site_rows(self):
        op = PauliOperator.single_site("Y", 2, 3, sign=1)
        assert op.to_text() == "-IYI"
