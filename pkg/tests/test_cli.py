"""Tests for the command-line front end."""

from fractions import Fraction
import json

import pytest

from superprolong.cli import Command, build_parser, dispatch, main
from superprolong.const import EXIT_OK, EXIT_USAGE, MODE_G_LE_K
from superprolong.exceptions import UsageError


def command(*argv):
    return Command.from_options(vars(build_parser().parse_args(list(argv))))


class TestOptions:
    """Option validation through the verb schemas."""

    def test_prolong_defaults(self):
        cmd = command("prolong", "--diagram", "I", "--crosses", "3,2,3")
        assert cmd.options["crosses"] == (2, 3)
        assert cmd.options["mode"] == "m"
        assert cmd.options["cutoff"] == 6
        assert cmd.spec.label == "p23I"

    def test_gk_needs_k(self):
        with pytest.raises(UsageError):
            command("prolong", "--diagram", "I", "--crosses", "1", "--mode", MODE_G_LE_K)
        cmd = command("prolong", "--diagram", "I", "--crosses", "1", "--mode", MODE_G_LE_K, "--k", "1")
        assert cmd.options["k"] == 1

    @pytest.mark.parametrize(
        "argv",
        [
            ("grading", "--diagram", "V", "--crosses", "1"),
            ("grading", "--diagram", "I", "--crosses", "4"),
            ("grading", "--diagram", "I", "--crosses", "x"),
            ("prolong", "--diagram", "I", "--crosses", "1", "--cutoff", "-1"),
            ("realize", "--model", "p2I"),
            ("reductions", "--case", "p1I"),
            ("construct", "--eval", "a"),
            ("construct", "-v", "-q"),
            ("verify",),
        ],
    )
    def test_invalid(self, argv):
        with pytest.raises(UsageError):
            command(*argv)

    def test_eval_point(self):
        cmd = command("construct", "--eval", "a=2/3")
        assert cmd.options["eval"] == {"a": Fraction(2, 3)}

    def test_verify_only(self):
        cmd = command("verify", "--only", "roots", "--only", "forms")
        assert cmd.options["only"] == ["roots", "forms"]
        assert not cmd.options["all"]


class TestMain:
    """Exit codes and output."""

    def test_usage_errors(self, capsys):
        assert main([]) == EXIT_USAGE
        assert main(["grading", "--diagram", "I", "--crosses", "7"]) == EXIT_USAGE
        assert "superprolong:" in capsys.readouterr().err

    def test_help(self):
        assert main(["--help"]) == EXIT_OK

    def test_exceptional_point(self):
        assert main(["construct", "--eval", "a=-1"]) == EXIT_USAGE

    def test_construct_json(self, capsys):
        assert main(["construct", "--eval", "a=2", "--json", "-q"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["verb"] == "construct"
        assert data["payload"]["sdim"] == [9, 8]
        assert data["payload"]["jacobi_violations"] == 0
        assert data["payload"]["killing_form_zero"]

    def test_grading_text(self, capsys):
        assert main(["grading", "--diagram", "I", "--crosses", "2", "--eval", "a=2", "-q"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "p2I: depth 1" in out
        assert "g_-1: (2|2)" in out

    def test_save(self, tmp_path):
        assert main(["construct", "--eval", "a=3", "--save", str(tmp_path), "-q"]) == EXIT_OK
        assert (tmp_path / "superprolong.construct.json").exists()

    def test_verify_selected(self, capsys):
        assert main(["verify", "--only", "roots", "--eval", "a=2", "-q"]) == EXIT_OK
        assert "1/1 checks passed" in capsys.readouterr().out


def test_dispatch_grading_report():
    report = dispatch(command("grading", "--diagram", "IV", "--crosses", "1,2,3", "--eval", "a=2"))
    assert report.verb == "grading"
    assert report.ok
    assert report.payload["depth"] == 3
    assert report.duration >= 0
