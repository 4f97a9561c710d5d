import pytest

from stabilizer_nonlocality.clifford import HADAMARD, IDENTITY, PAULI_Z
from stabilizer_nonlocality.exceptions import (
    DomainError,
    InvalidWitness,
    NoTwoSiteWitness,
    NotGME,
)
from stabilizer_nonlocality.pauli import parse_pauli
from stabilizer_nonlocality.sim.certify import verify_mfnl_certificate
from stabilizer_nonlocality.stabilizer import is_gme
from stabilizer_nonlocality.witness import (
    apply_correction,
    corrective_unitaries,
    enumerate_witness_pairs,
    find_all_witnesses,
    find_witness,
    post_measurement_stabilizers,
    protocol_corrections,
    synthesize_protocol,
    witness_from_vectors,
    witness_problems,
)


@pytest.fixture
def five_qubit_protocol(five_qubit):
    witness = witness_from_vectors(five_qubit, 1, 4, (0, 0, 1, 0), (0, 0, 0, 1))
    return synthesize_protocol(witness)


class TestWitnessSearch:
    def test_five_qubit_witness_for_pair_one_four(self, five_qubit):
        witness = find_witness(five_qubit, 1, 4)
        assert witness.pair == (1, 4)
        assert witness_problems(witness.s_i, witness.s_j, (1, 4)) == []

    def test_all_pairs_of_the_five_qubit_code(self, five_qubit):
        witnesses = find_all_witnesses(five_qubit)
        assert len(witnesses) == 10
        for pair, witness in witnesses.items():
            assert witness.pair == pair
            assert witness_problems(witness.s_i, witness.s_j, pair) == []

    def test_parallel_search_is_deterministic(self, five_qubit):
        serial = find_all_witnesses(five_qubit)
        parallel = find_all_witnesses(five_qubit, workers=4)
        assert {k: w.to_dict() for k, w in serial.items()} == {
            k: w.to_dict() for k, w in parallel.items()
        }

    def test_bell_witness_is_the_generators(self, bell):
        witness = find_witness(bell, 1, 2)
        assert witness.u == (1, 0)
        assert witness.v == (0, 1)
        assert (witness.s_i.to_text(), witness.s_j.to_text()) == ("+XX", "+ZZ")

    def test_pair_order_is_normalized(self, five_qubit):
        assert find_witness(five_qubit, 4, 1).pair == (1, 4)

    def test_product_state_has_no_witness(self, product_pair):
        with pytest.raises(NotGME) as info:
            find_witness(product_pair, 1, 2)
        assert info.value.bipartition == (1,)
        assert info.value.pair == (1, 2)

    def test_same_party_twice(self, five_qubit):
        with pytest.raises(DomainError):
            find_witness(five_qubit, 2, 2)
        with pytest.raises(DomainError):
            find_witness(five_qubit, 1, 6)

    def test_exhaustive_scan_agrees(self, ghz3, product_pair):
        assert enumerate_witness_pairs(ghz3, 1, 3, first_only=True)
        assert enumerate_witness_pairs(product_pair, 1, 2) == []

    def test_vectors_that_break_the_pattern(self, five_qubit):
        with pytest.raises(InvalidWitness):
            witness_from_vectors(five_qubit, 1, 2, (0, 0, 1, 0), (0, 0, 0, 1))
        with pytest.raises(InvalidWitness):
            witness_from_vectors(five_qubit, 1, 4, (0, 0, 0, 0), (0, 0, 0, 1))


class TestGMEWithoutWitness:
    """Six qubits entangled across every cut, with two pairs lacking a witness."""

    @pytest.mark.parametrize("pair", [(1, 3), (2, 6)])
    def test_pair_without_witness(self, gme_without_witnesses, pair):
        assert is_gme(gme_without_witnesses).is_gme
        with pytest.raises(NoTwoSiteWitness) as info:
            find_witness(gme_without_witnesses, pair[1], pair[0])
        assert info.value.pair == pair
        assert not isinstance(info.value, NotGME)
        assert enumerate_witness_pairs(gme_without_witnesses, *pair) == []

    def test_other_pairs_have_witnesses(self, gme_without_witnesses):
        for pair in [(1, 2), (3, 4), (5, 6)]:
            hits = enumerate_witness_pairs(gme_without_witnesses, *pair, first_only=True)
            try:
                witness = find_witness(gme_without_witnesses, *pair)
            except NoTwoSiteWitness:
                assert hits == []
            else:
                assert hits
                assert witness_problems(witness.s_i, witness.s_j, pair) == []

    def test_all_pairs_stops_at_the_first_gap(self, gme_without_witnesses):
        with pytest.raises(NoTwoSiteWitness) as info:
            find_all_witnesses(gme_without_witnesses)
        assert info.value.pair == (1, 3)

    def test_certificate_is_refused(self, gme_without_witnesses):
        with pytest.raises(NoTwoSiteWitness):
            verify_mfnl_certificate(gme_without_witnesses, mode="tableau")


class TestProtocol:
    def test_five_qubit_bases_and_signs(self, five_qubit_protocol):
        p = five_qubit_protocol
        assert p.witness.s_i.to_text() == "+XIXZZ"
        assert p.witness.s_j.to_text() == "+ZXIXZ"
        assert dict(p.bases) == {2: "X", 3: "X", 5: "Z"}
        assert dict(p.tau_i) == {2: (0, 0), 3: (0, 1), 5: (0, 1)}
        assert dict(p.tau_j) == {2: (0, 1), 3: (0, 0), 5: (0, 1)}
        assert p.branch_count == 8

    def test_ghz_measures_x_on_the_third_party(self, ghz3):
        witness = witness_from_vectors(ghz3, 1, 2, (1, 0, 0), (0, 1, 0))
        protocol = synthesize_protocol(witness)
        assert dict(protocol.bases) == {3: "X"}

    @pytest.mark.parametrize(
        "outcomes, expected",
        [
            ({2: 0, 3: 0, 5: 0}, ("+XZ", "+ZX")),
            ({2: 1, 3: 0, 5: 0}, ("+XZ", "-ZX")),
            ({2: 0, 3: 1, 5: 0}, ("-XZ", "+ZX")),
            ({2: 0, 3: 0, 5: 1}, ("-XZ", "-ZX")),
            ({2: 1, 3: 1, 5: 1}, ("+XZ", "+ZX")),
        ],
    )
    def test_post_measurement_pairs(self, five_qubit_protocol, outcomes, expected):
        s_i, s_j = post_measurement_stabilizers(five_qubit_protocol, outcomes)
        assert (s_i.to_text(), s_j.to_text()) == expected

    def test_outcome_keys_must_match(self, five_qubit_protocol):
        with pytest.raises(DomainError):
            post_measurement_stabilizers(five_qubit_protocol, {2: 0, 3: 0})
        with pytest.raises(DomainError):
            post_measurement_stabilizers(five_qubit_protocol, {2: 0, 3: 0, 5: 2})

    def test_serialized_protocol(self, five_qubit_protocol):
        data = five_qubit_protocol.to_dict()
        assert data["pair"] == [1, 4]
        assert data["bases"] == {"2": "X", "3": "X", "5": "Z"}
        assert data["tau_i"]["3"] == [0, 1]


class TestCorrections:
    def test_xz_zx_needs_a_hadamard_on_the_second_site(self):
        rule = corrective_unitaries(parse_pauli("XZ"), parse_pauli("ZX"))
        assert rule.u_first == IDENTITY
        assert rule.u_second == HADAMARD
        assert rule.residual == "I"

    def test_sign_flip_is_fixed_with_z(self):
        rule = corrective_unitaries(parse_pauli("-XX"), parse_pauli("ZZ"))
        assert rule.residual == "Z"
        assert rule.u_first == PAULI_Z
        assert rule.u_second == IDENTITY

    def test_already_bell(self):
        rule = corrective_unitaries(parse_pauli("XX"), parse_pauli("ZZ"))
        assert rule.u_first.is_identity() and rule.u_second.is_identity()

    @pytest.mark.parametrize(
        "first, second",
        [("-YZ", "XY"), ("YY", "-ZX"), ("-ZX", "-XZ"), ("XY", "ZZ")],
    )
    def test_rule_reaches_the_bell_pair(self, first, second):
        s_i, s_j = parse_pauli(first), parse_pauli(second)
        rule = corrective_unitaries(s_i, s_j)
        assert apply_correction(rule, s_i).to_text() == "+XX"
        assert apply_correction(rule, s_j).to_text() == "+ZZ"

    def test_rejects_operators_that_commute_somewhere(self):
        with pytest.raises(InvalidWitness):
            corrective_unitaries(parse_pauli("XX"), parse_pauli("XX"))
        with pytest.raises(InvalidWitness):
            corrective_unitaries(parse_pauli("XZ"), parse_pauli("ZZ"))
        with pytest.raises(InvalidWitness):
            corrective_unitaries(parse_pauli("XXX"), parse_pauli("ZZZ"))

    def test_every_branch_of_the_five_qubit_protocol(self, five_qubit_protocol):
        corrections = protocol_corrections(five_qubit_protocol)
        assert len(corrections) == 8
        for outcomes, rule in corrections:
            s_i, s_j = post_measurement_stabilizers(five_qubit_protocol, outcomes)
            assert apply_correction(rule, s_i).to_text() == "+XX"
            assert apply_correction(rule, s_j).to_text() == "+ZZ"
            assert rule.bell_class == f"{s_i.to_text()},{s_j.to_text()}"
