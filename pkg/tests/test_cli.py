"""Command line behavior, exercised in process through cli.main."""

import json

import pytest

from axf import TransformError
from axf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParse:
    def test_canonical_output(self, capsys, path_program):
        from axf import print_program

        code, out, err = run(capsys, "parse", "samples/path.axp")
        assert code == 0 and err == ""
        assert out == print_program(path_program)
        assert out.endswith("\n")

    def test_json_output(self, capsys):
        code, out, _ = run(capsys, "parse", "samples/path.axp", "--json")
        blob = json.loads(out)
        assert blob["objects"] == ["a", "b", "c"]

    def test_bad_program_exit_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.axp"
        bad.write_text("(program (objects a a) (basic (B 1)) (derived))")
        code, out, err = run(capsys, "parse", str(bad))
        assert code == 2
        assert "declared twice" in err
        assert str(bad) in err

    def test_missing_file_exit_2(self, capsys):
        code, _, err = run(capsys, "parse", "no/such/file.axp")
        assert code == 2
        assert err != ""


class TestEval:
    def test_derived_atoms_sorted(self, capsys):
        code, out, _ = run(capsys, "eval", "samples/path.axp", "samples/path_state.st")
        assert code == 0
        assert out.splitlines() == [
            "(acyclic)",
            "(path a b)",
            "(path a c)",
            "(path b c)",
        ]

    def test_stages(self, capsys):
        code, out, _ = run(
            capsys, "eval", "samples/path.axp", "samples/path_state.st", "--stages"
        )
        assert code == 0
        assert out.splitlines() == [
            "stratum 0",
            "  (path a b): 1",
            "  (path a c): 2",
            "  (path b c): 1",
            "  f: 2",
            "stratum 1",
            "  (acyclic): 1",
            "  f: 1",
        ]

    def test_json(self, capsys):
        code, out, _ = run(
            capsys,
            "eval",
            "samples/path.axp",
            "samples/path_state.st",
            "--stages",
            "--json",
        )
        blob = json.loads(out)
        assert "(path a c)" in blob["derived"]
        assert blob["stages"][0]["fixpoint"] == 2
        assert blob["stages"][0]["atoms"]["(path a c)"] == 2

    def test_state_errors_exit_2(self, capsys, tmp_path):
        st = tmp_path / "s.st"
        st.write_text("(state (path a b))")
        code, _, err = run(capsys, "eval", "samples/path.axp", str(st))
        assert code == 2 and "derived" in err


class TestTransform:
    def test_matches_golden(self, capsys):
        golden = open("tests/golden/path_transformed.axp").read()
        code, out, _ = run(capsys, "transform", "samples/path.axp")
        assert code == 0
        assert out == golden

    def test_runs_are_identical(self, capsys):
        _, first, _ = run(capsys, "transform", "samples/path.axp")
        _, second, _ = run(capsys, "transform", "samples/path.axp")
        assert first == second

    def test_output_file_and_report(self, capsys, tmp_path):
        out_file = tmp_path / "out.axp"
        report_file = tmp_path / "report.json"
        code, out, _ = run(
            capsys,
            "transform",
            "samples/path.axp",
            "-o",
            str(out_file),
            "--report",
            str(report_file),
        )
        assert code == 0 and out == ""
        golden = open("tests/golden/path_transformed.axp").read()
        assert out_file.read_text() == golden
        report = json.loads(report_file.read_text())
        assert report["iterations"] == 1
        assert report["replacements"][0]["replacement"] == "nleq__path__path__r1"

    def test_transformed_output_reparses(self, capsys, tmp_path):
        from axf import check_stratified, parse_program

        out_file = tmp_path / "out.axp"
        run(capsys, "transform", "samples/path.axp", "-o", str(out_file))
        prog = parse_program(out_file.read_text(), str(out_file))
        assert check_stratified(prog) == []
        assert len(prog.strata) == 3

    def test_merge_simplify(self, capsys):
        code, out, _ = run(
            capsys, "transform", "samples/path.axp", "--merge", "--simplify"
        )
        assert code == 0
        assert "    (axiom (acyclic)\n      (forall (?x) (nleq__path__path__r1 ?x ?x ?x ?x)))" in out
        # single stratum after the merge
        assert out.count("(stratum") == 1

    def test_json_mode(self, capsys):
        code, out, _ = run(capsys, "transform", "samples/path.axp", "--json")
        blob = json.loads(out)
        assert set(blob) == {"program", "report"}
        assert blob["report"]["algorithm"] == "iterated-worklist"

    def test_optimize_aux(self, capsys):
        code, out, _ = run(capsys, "transform", "samples/path.axp", "--optimize-aux")
        assert code == 0
        assert "aux_empty__r1" in out and "aux_fix__path__r1" in out


class TestVerify:
    def test_full_pass(self, capsys):
        code, out, err = run(capsys, "verify", "samples/path.axp", "--universe", "2")
        assert code == 0 and err == ""
        lines = out.splitlines()
        assert lines[0] == "PASS polarity"
        assert "PASS theorem1[n=2,stratum=0] states=16" in lines
        assert all(line.startswith("PASS") for line in lines)

    def test_quiet(self, capsys):
        code, out, _ = run(
            capsys, "verify", "samples/path.axp", "--universe", "2", "--quiet"
        )
        assert code == 0 and out == ""

    def test_checks_subset(self, capsys):
        code, out, _ = run(
            capsys,
            "verify",
            "samples/path.axp",
            "--universe",
            "2",
            "--checks",
            "polarity,theorem2",
        )
        assert code == 0
        names = [line.split()[1] for line in out.splitlines()]
        assert names == ["polarity", "theorem2[n=2,stratum=0]", "theorem2[n=2,stratum=1]"]

    def test_unknown_check_exit_2(self, capsys):
        code, _, err = run(
            capsys, "verify", "samples/path.axp", "--checks", "theorem9"
        )
        assert code == 2 and "theorem9" in err

    def test_sampled_mode(self, capsys):
        code, out, _ = run(
            capsys,
            "verify",
            "samples/path.axp",
            "--universe",
            "2",
            "--samples",
            "7",
            "--seed",
            "zz",
            "--checks",
            "theorem1",
        )
        assert code == 0
        assert "states=7" in out

    def test_transformed_pass(self, capsys, tmp_path):
        out_file = tmp_path / "out.axp"
        run(capsys, "transform", "samples/path.axp", "-o", str(out_file))
        code, out, _ = run(
            capsys,
            "verify",
            "samples/path.axp",
            "--transformed",
            str(out_file),
            "--universe",
            "2",
        )
        assert code == 0
        names = [line.split()[1] for line in out.splitlines()]
        assert names == ["polarity", "equivalence[n=2]"]

    def test_transformed_failure_exit_1(self, capsys, tmp_path):
        wrong = tmp_path / "wrong.axp"
        # drop the acyclic axiom: outputs diverge on acyclic states
        wrong.write_text(
            open("tests/golden/path_transformed.axp")
            .read()
            .replace(
                "(forall (?x) (not (not (nleq__path__path__r1 ?x ?x ?x ?x))))",
                "false",
            )
        )
        code, out, _ = run(
            capsys,
            "verify",
            "samples/path.axp",
            "--transformed",
            str(wrong),
            "--universe",
            "2",
        )
        assert code == 1
        lines = out.splitlines()
        assert any(line.startswith("FAIL equivalence") for line in lines)
        assert any(line.startswith("  state:") for line in lines)
        assert any("acyclic" in line for line in lines if line.startswith("  detail:"))

    def test_transformed_restricts_checks(self, capsys, tmp_path):
        out_file = tmp_path / "out.axp"
        run(capsys, "transform", "samples/path.axp", "-o", str(out_file))
        code, _, err = run(
            capsys,
            "verify",
            "samples/path.axp",
            "--transformed",
            str(out_file),
            "--checks",
            "theorem1",
        )
        assert code == 2
        assert "transformed" in err

    def test_json(self, capsys):
        code, out, _ = run(
            capsys,
            "verify",
            "samples/path.axp",
            "--universe",
            "2",
            "--checks",
            "polarity,equivalence",
            "--json",
        )
        assert code == 0
        blob = json.loads(out)
        assert all(c["failures"] == 0 for c in blob["checks"])

    def test_parallel_output_matches(self, capsys, monkeypatch):
        monkeypatch.delenv("AXF_THREADS", raising=False)
        _, serial, _ = run(
            capsys, "verify", "samples/path.axp", "--universe", "2", "--checks", "equivalence"
        )
        monkeypatch.setenv("AXF_THREADS", "2")
        _, parallel, _ = run(
            capsys, "verify", "samples/path.axp", "--universe", "2", "--checks", "equivalence"
        )
        assert serial == parallel

    def test_bad_threads_exit_2(self, capsys, monkeypatch):
        monkeypatch.setenv("AXF_THREADS", "abc")
        code, _, err = run(
            capsys, "verify", "samples/path.axp", "--universe", "2", "--checks", "equivalence"
        )
        assert code == 2 and "AXF_THREADS" in err


class TestStats:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "stats", "samples/path.axp")
        assert code == 0
        lines = out.splitlines()
        assert lines[0].split() == [
            "stratum",
            "members",
            "max-arity",
            "total-arity",
            "occurrences",
            "size",
        ]
        assert lines[1].split() == ["0", "1", "2", "2", "1", "16"]
        assert lines[2].split() == ["1", "1", "0", "0", "0", "7"]
        assert lines[3] == "signature size: 7"
        assert lines[4] == "program size: 30"


class TestExitCodes:
    def test_internal_error_exit_3(self, capsys, monkeypatch):
        import axf.cli as cli_mod

        def boom(program, **kwargs):
            raise TransformError("internal error: synthetic failure")

        monkeypatch.setattr(cli_mod, "eliminate_negative_occurrences", boom)
        code, _, err = run(capsys, "transform", "samples/path.axp")
        assert code == 3
        assert "internal error" in err

    def test_unexpected_exception_exit_3(self, capsys, monkeypatch):
        import axf.cli as cli_mod

        def boom(program, **kwargs):
            raise RuntimeError("wat")

        monkeypatch.setattr(cli_mod, "eliminate_negative_occurrences", boom)
        code, _, err = run(capsys, "transform", "samples/path.axp")
        assert code == 3
        assert "internal error" in err and "wat" in err

    def test_logic_error_exit_2(self, capsys, tmp_path):
        # a valid parse that the transform rejects is a user error
        prog = tmp_path / "p.axp"
        prog.write_text("(program (objects a) (basic (B 1)) (derived))")
        code, _, err = run(capsys, "verify", str(prog), "--transformed", str(prog), "--checks", "theorem1")
        assert code == 2

    def test_no_command_shows_help(self, capsys):
        with pytest.raises(SystemExit):
            main([])
