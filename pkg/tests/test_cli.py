import json

import pytest

from golden_cases import CASES, GOLDEN, S1, run
from stgkit.cli import main
from stgkit.grammar_io import fixture_path, load_grammar
from stgkit.stg import stg_language


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, code):
    got, out = run(argv)
    assert got == code
    assert out == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


def test_member_in_process(capsys):
    assert main(["member", str(fixture_path("coord.stg")), S1]) == 0
    assert capsys.readouterr().out == "true\n"


def test_unknown_tokens_reported(capsys):
    assert main(["member", str(fixture_path("abplus.stg")), "a z"]) == 1
    assert capsys.readouterr().out == "false\nunknown tokens: z\n"


@pytest.mark.parametrize("argv", [
    [],
    ["enumerate"],
    ["bogus"],
    ["enumerate", "x.stg", "--max-len", "three"],
    ["compile", "fixtures/abplus.stg", "--to", "dfa"],
    ["--format", "yaml", "validate", "fixtures/l4.tag"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_wrong_compile_target(capsys):
    assert main(["compile", str(fixture_path("anbn.tsg")), "--to", "regex"]) == 2
    assert "stg grammar" in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["validate", "no/such/file.stg"]) == 2


def test_regex2stg_output_file(tmp_path, capsys):
    target = tmp_path / "out.stg"
    assert main(["regex2stg", "( a | b ) * c", "--terminals", "a,b,c", "-o", str(target)]) == 0
    g = load_grammar(target)
    assert ("a", "b", "c") in stg_language(g, 3)
    assert ("c", "a") not in stg_language(g, 3)


def test_structured_is_json(capsys):
    assert main(["--format", "structured", "member", str(fixture_path("l4.tag")), "a b c d"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record == {"accepted": True, "command": "member", "method": "bounded-search",
                      "sentence": ["a", "b", "c", "d"], "unknown_tokens": []}


def test_format_after_subcommand(capsys):
    assert main(["validate", str(fixture_path("l4.tag")), "--format", "structured"]) == 0
    assert json.loads(capsys.readouterr().out)["ok"] is True
