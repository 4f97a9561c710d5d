import json

import pytest

from stabilizer_nonlocality import cli
from stabilizer_nonlocality.cli import RunConfig, main
from stabilizer_nonlocality.exceptions import ConvergenceError, DomainError


def _run(capsys, *argv):
    status = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def _run_json(capsys, *argv):
    status, out, err = _run(capsys, *argv)
    return status, json.loads(out), err


class TestGroupCommands:
    def test_gme_five_qubit(self, capsys, fixtures_dir):
        status, document, err = _run_json(capsys, "gme", fixtures_dir / "five_qubit.stab")
        assert status == 0
        assert document["kind"] == "gme_verdict"
        assert document["gme"] is True
        assert document["subspace_dimension"] == 2
        assert "GME: true (15 bipartitions checked)" in err

    def test_gme_product(self, capsys, fixtures_dir):
        status, document, err = _run_json(capsys, "gme", fixtures_dir / "product.stab")
        assert status == 1
        assert document["gme"] is False
        assert "Q=" in err

    def test_validate_drops_dependent_generators(self, capsys, fixtures_dir):
        status, document, _ = _run_json(capsys, "validate", fixtures_dir / "toric_2x2.stab")
        assert status == 0
        assert document["is_valid"]
        assert document["details"]["dropped"] == [4, 8]
        assert document["details"]["k"] == 6

    def test_validate_echelon(self, capsys, fixtures_dir):
        status, document, _ = _run_json(capsys, "validate", fixtures_dir / "ghz3.stab", "--echelon")
        assert status == 0
        assert len(document["echelon"]) == 3

    def test_noncommuting_file(self, capsys, tmp_path):
        path = tmp_path / "bad.stab"
        path.write_text("XI\nZI\n", encoding="utf-8")
        status, document, _ = _run_json(capsys, "validate", path)
        assert status == 1
        assert document["errors"] == ["generators 1 and 2 do not commute"]

        status, out, err = _run(capsys, "gme", path)
        assert status == 2
        assert out == ""
        assert "lines 1 and 2" in err


class TestWitnessCommand:
    def test_five_qubit(self, capsys, fixtures_dir):
        status, document, _ = _run_json(capsys, "witness", fixtures_dir / "five_qubit.stab")
        assert status == 0
        assert document["kind"] == "witness_certificate"
        assert len(document["pairs"]) == 10
        assert all(len(entry["corrections"]) == 8 for entry in document["pairs"])

    def test_single_pair_with_oracle(self, capsys, fixtures_dir):
        status, document, _ = _run_json(
            capsys, "witness", fixtures_dir / "five_qubit.stab", "--pair", "4,1", "--oracle"
        )
        assert status == 0
        [entry] = document["pairs"]
        assert entry["pair"] == [1, 4]
        assert entry["oracle_confirms"] is True

    def test_pair_out_of_range(self, capsys, fixtures_dir):
        status, _, _ = _run(capsys, "witness", fixtures_dir / "bell.stab", "--pair", "1,3")
        assert status == 2

    def test_qudit_file_runs_the_pattern_scan(self, capsys, fixtures_dir):
        status, document, _ = _run_json(capsys, "witness", fixtures_dir / "qutrit_ghz.stab")
        assert status == 1
        assert document["kind"] == "pattern_scan"
        assert document["d"] == 3
        assert len(document["pairs"]) == 3


class TestVerifyCommand:
    def test_five_qubit_both_engines(self, capsys, fixtures_dir):
        status, document, err = _run_json(
            capsys, "verify", fixtures_dir / "five_qubit.stab", "--mode", "both"
        )
        assert status == 0
        assert document["kind"] == "mfnl_certificate"
        assert document["passed"]
        assert "MFNL certificate passed: 10 pairs, 80 branches (both)" in err

    def test_written_certificate_rechecks(self, capsys, fixtures_dir, tmp_path):
        target = tmp_path / "cert.json"
        status, out, _ = _run(
            capsys, "verify", fixtures_dir / "five_qubit.stab", "--mode", "tableau", "--out", target
        )
        assert status == 0
        assert out == ""
        status, document, _ = _run_json(capsys, "verify", target, "--recheck")
        assert status == 0
        assert document["kind"] == "recheck"
        assert document["is_valid"]

    def test_not_gme(self, capsys, fixtures_dir):
        status, document, _ = _run_json(capsys, "verify", fixtures_dir / "product.stab")
        assert status == 1
        assert document["kind"] == "not_gme"
        assert document["violating_bipartition"] == [1]

    def test_bad_tolerance(self, capsys, fixtures_dir):
        status, _, err = _run(
            capsys, "verify", fixtures_dir / "bell.stab", "--tol-fidelity", "0"
        )
        assert status == 2
        assert "fidelity tolerance" in err


class TestMissingWitness:
    def test_gme_verdict_is_positive(self, capsys, fixtures_dir):
        status, document, _ = _run_json(capsys, "gme", fixtures_dir / "gme_no_witness_6.stab")
        assert status == 0
        assert document["gme"] is True

    @pytest.mark.parametrize("command", ["witness", "verify"])
    def test_artifact_names_the_pair(self, capsys, fixtures_dir, command):
        status, document, err = _run_json(capsys, command, fixtures_dir / "gme_no_witness_6.stab")
        assert status == 1
        assert document["kind"] == "no_witness"
        assert document["gme"] is True
        assert document["pair"] == [1, 3]
        assert "no two-site witness for pair (1, 3)" in err

    def test_other_failures_still_write_json(self, capsys, fixtures_dir, monkeypatch):
        def diverge(config):
            raise ConvergenceError("optimizer stalled")

        monkeypatch.setitem(cli.COMMANDS, "gme", diverge)
        status, document, err = _run_json(capsys, "gme", fixtures_dir / "bell.stab")
        assert status == 1
        assert document["kind"] == "failure"
        assert document["error"] == "ConvergenceError"
        assert "optimizer stalled" in err


class TestGraphCommand:
    def test_triangle(self, capsys, fixtures_dir):
        status, document, _ = _run_json(capsys, "graph", fixtures_dir / "triangle_d3.graph")
        assert status == 0
        assert document["kind"] == "graph_certificate"
        assert document["passed"]

    def test_disconnected(self, capsys, fixtures_dir):
        status, document, err = _run_json(capsys, "graph", fixtures_dir / "disconnected.graph")
        assert status == 1
        assert not document["passed"]
        assert "connected=false" in err


class TestNumericCommands:
    def test_chained_range(self, capsys):
        status, document, _ = _run_json(capsys, "chained", "--n", 2, "--n-max", 4, "--grid")
        assert status == 0
        assert [row["n"] for row in document["rows"]] == [2, 3, 4]
        assert document["rows"][0]["value"] == pytest.approx(0.585786, abs=1e-6)
        assert document["rows"][2]["grid_value"] == pytest.approx(0.304482, abs=1e-6)

    def test_chained_behavior(self, capsys, fixtures_dir):
        status, document, _ = _run_json(capsys, "chained", "--behavior", fixtures_dir / "pr_box.csv")
        assert status == 0
        assert document["kind"] == "behavior_chained"
        assert document["value"] == pytest.approx(2.0)
        assert document["violates_local_bound"] is False

    def test_chained_reversed_range(self, capsys):
        status, _, _ = _run(capsys, "chained", "--n", 4, "--n-max", 2)
        assert status == 2

    def test_bound_from_a_spec(self, capsys):
        status, document, err = _run_json(capsys, "bound", "--n", 5, "--pairs", "all=0.874")
        assert status == 0
        assert document["raw"] == pytest.approx(0.685)
        assert not document["vacuous"]
        assert err.startswith("p_NL >= 0.685000")

    def test_vacuous_bound(self, capsys):
        status, document, _ = _run_json(capsys, "bound", "--n", 5, "--pairs", "all=0")
        assert status == 1
        assert document["raw"] == pytest.approx(-1.5)
        assert document["clamped"] == 0.0

    def test_bound_from_a_file(self, capsys, fixtures_dir):
        status, document, _ = _run_json(
            capsys, "bound", "--n", 5, "--pairs-file", fixtures_dir / "pairs_five_qubit.csv"
        )
        assert status == 0
        assert document["raw"] == pytest.approx(0.685)

    def test_bound_needs_a_source(self, capsys):
        status, _, _ = _run(capsys, "bound", "--n", 5)
        assert status == 2

    def test_thresholds(self, capsys):
        status, document, _ = _run_json(capsys, "thresholds", "--n", 5)
        assert status == 0
        assert document["kind"] == "gmnl_threshold"
        assert (document["n_min"], document["m"]) == (4, 11)
        assert document["pair_requirement"] == pytest.approx(0.6)

    def test_figures(self, capsys):
        status, out, err = _run(capsys, "figures", "fig1", "--range", "4,6")
        assert status == 0
        assert out == "N,n_min,m\n4,3,9\n5,4,11\n6,4,11\n"
        assert "fig1: 3 rows" in err

    def test_figures_to_a_file(self, capsys, tmp_path):
        target = tmp_path / "fig2.csv"
        status, out, _ = _run(capsys, "figures", "fig2", "--range", "4,4", "--out", target)
        assert status == 0
        assert out == ""
        header, row = target.read_text(encoding="utf-8").splitlines()
        assert header == "m,p_nl_lower"
        assert row.startswith("11,0.238")


class TestInputErrors:
    def test_missing_file(self, capsys, tmp_path):
        status, out, err = _run(capsys, "gme", tmp_path / "nothing.stab")
        assert status == 2
        assert out == ""
        assert err.startswith("error:")

    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["gme"],
            ["figures", "fig9"],
            ["figures", "fig1", "--range", "4"],
            ["thresholds"],
        ],
    )
    def test_bad_arguments(self, capsys, argv):
        status, _, _ = _run(capsys, *argv)
        assert status == 2

    def test_gme_on_a_qudit_file(self, capsys, fixtures_dir):
        status, _, err = _run(capsys, "gme", fixtures_dir / "qutrit_ghz.stab")
        assert status == 2
        assert "qubit file" in err

    def test_worker_count(self, capsys, fixtures_dir):
        status, _, _ = _run(capsys, "gme", fixtures_dir / "bell.stab", "--workers", 0)
        assert status == 2

    def test_run_config_rejects_unknown_modes(self):
        with pytest.raises(DomainError):
            RunConfig(command="verify", mode="fast")
        with pytest.raises(DomainError):
            RunConfig(command="plot")
