import json

import pytest
from click.testing import CliRunner

from stepkit.cli import main
from stepkit.machines import copy_machine, increment_tm
from stepkit.stm import from_classical_tm


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def fig1_file(tmp_path, runner):
    path = tmp_path / "fig1.json"
    result = runner.invoke(
        main, ["compile", "a.(b||c).d", "--out", str(path)]
    )
    assert result.exit_code == 0
    return str(path)


@pytest.fixture
def copy_file(tmp_path):
    path = tmp_path / "copy.json"
    path.write_text(copy_machine().to_json())
    return str(path)


class TestLang:
    def test_diamond(self, runner):
        result = runner.invoke(main, ["lang", "a.(b||c)", "--size", "3"])
        assert result.exit_code == 0
        assert result.output == "a.(b||c)\n"

    def test_empty_language_exits_zero(self, runner):
        result = runner.invoke(main, ["lang", "0", "--size", "3"])
        assert result.exit_code == 0 and result.output == ""

    def test_star_unrolling(self, runner):
        result = runner.invoke(main, ["lang", "a*", "--size", "2"])
        assert result.output == "1\na\na.a\n"

    def test_parse_error_exits_two(self, runner):
        result = runner.invoke(main, ["lang", "a..b"])
        assert result.exit_code == 2


class TestCompile:
    def test_reports_states_and_nesting(self, runner):
        result = runner.invoke(main, ["compile", "a.(b||c).d"])
        assert result.exit_code == 0
        assert "states: 4" in result.output
        assert "well-nested: yes" in result.output

    def test_single_state_for_one(self, runner):
        result = runner.invoke(main, ["compile", "1"])
        assert "states: 1" in result.output

    def test_width_cap_exits_two_with_message(self, runner):
        result = runner.invoke(main, ["compile", "a^*", "--width", "2"])
        assert result.exit_code == 2
        assert "W=2" in result.output

    def test_writes_files_with_trailing_newline(self, runner, tmp_path):
        out = tmp_path / "auto.json"
        dot = tmp_path / "auto.dot"
        result = runner.invoke(
            main, ["compile", "a||b", "--out", str(out), "--dot", str(dot)]
        )
        assert result.exit_code == 0
        assert out.read_text().endswith("\n")
        assert dot.read_text().endswith("}\n")
        json.loads(out.read_text())


class TestEquiv:
    def test_distribution(self, runner):
        result = runner.invoke(main, ["equiv", "(a+b).c", "a.c+b.c", "--size", "3"])
        assert result.exit_code == 0

    def test_witness_and_exit_one(self, runner):
        result = runner.invoke(main, ["equiv", "a||b", "a.b", "--size", "2"])
        assert result.exit_code == 1
        assert "a||b" in result.output

    def test_reflexive(self, runner):
        assert runner.invoke(main, ["equiv", "a", "a", "--size", "1"]).exit_code == 0


class TestAxioms:
    def test_all_hold_with_seed(self, runner):
        result = runner.invoke(
            main, ["axioms", "--samples", "1", "--seed", "7", "--size", "3"]
        )
        assert result.exit_code == 0
        lines = [line for line in result.output.splitlines() if "holds" in line]
        assert len(lines) == 28

    def test_deterministic_given_seed(self, runner):
        args = ["axioms", "--samples", "1", "--seed", "7", "--size", "3"]
        assert runner.invoke(main, args).output == runner.invoke(main, args).output


class TestAutomatonCommands:
    def test_accept(self, runner, fig1_file):
        result = runner.invoke(
            main, ["accept", fig1_file, "a.<b,c>.d", "--state", "a.(b||c).d"]
        )
        assert result.exit_code == 0 and "accepted" in result.output

    def test_reject_exits_one(self, runner, fig1_file):
        result = runner.invoke(
            main, ["accept", fig1_file, "a.b.c.d", "--state", "a.(b||c).d"]
        )
        assert result.exit_code == 1 and "rejected" in result.output

    def test_words(self, runner, fig1_file):
        result = runner.invoke(
            main, ["words", fig1_file, "--state", "a.(b||c).d", "--len", "5"]
        )
        assert result.output == "a.<b,c>.d\n"

    def test_extract(self, runner, fig1_file):
        result = runner.invoke(main, ["extract", fig1_file, "--state", "a.(b||c).d"])
        assert result.exit_code == 0
        recovered = result.output.strip()
        check = runner.invoke(main, ["equiv", recovered, "a.(b||c).d", "--size", "4"])
        assert check.exit_code == 0

    def test_bad_word_exits_two(self, runner, fig1_file):
        result = runner.invoke(
            main, ["accept", fig1_file, "<a", "--state", "a.(b||c).d"]
        )
        assert result.exit_code == 2

    def test_missing_file_exits_two(self, runner):
        result = runner.invoke(main, ["words", "nope.json", "--state", "q"])
        assert result.exit_code == 2


class TestStmCommands:
    def test_run_accepts(self, runner, copy_file):
        result = runner.invoke(main, ["stm", "run", copy_file, "--input", "101"])
        assert result.exit_code == 0
        assert "accepted 101" in result.output

    def test_zero_budget_exits_one(self, runner, copy_file):
        result = runner.invoke(
            main, ["stm", "run", copy_file, "--input", "101", "--max-steps", "0"]
        )
        assert result.exit_code == 1 and "bound_exceeded" in result.output

    def test_trace_rendering(self, runner, copy_file):
        result = runner.invoke(
            main, ["stm", "run", copy_file, "--input", "101", "--trace"]
        )
        assert "□[1]01□" in result.output

    def test_words(self, runner, copy_file):
        result = runner.invoke(
            main, ["stm", "words", copy_file, "--input", "10", "--max-steps", "50"]
        )
        assert result.output == "1.0\n"

    def test_malformed_machine_exits_two(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"states": []}')
        result = runner.invoke(main, ["stm", "run", str(bad)])
        assert result.exit_code == 2

    def test_increment_machine(self, runner, tmp_path):
        path = tmp_path / "increment.json"
        path.write_text(from_classical_tm(increment_tm()).to_json())
        result = runner.invoke(
            main, ["stm", "run", str(path), "--input", "1011"]
        )
        assert result.exit_code == 0
        assert "accepted 1100" in result.output
