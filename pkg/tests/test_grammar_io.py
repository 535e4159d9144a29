import pytest
from hypothesis import given, settings, strategies as st

from stgkit.errors import FormalismLexicalViolation, GrammarSyntaxError, ValidationFailed
from stgkit.grammar_io import fixture_names, load_fixture, parse_grammar, print_grammar
from stgkit.stg import StgGrammar
from stgkit.tag import TagGrammar
from stgkit.tsg import TsgGrammar

CATALOG = ["abplus.stg", "anbn.tsg", "compl.tsg", "coord-bare.stg", "coord.stg", "l4.tag",
           "mod.tag", "stages/1-coord.stg", "stages/2-compl.tsg", "stages/3-mod.tag"]


def test_catalog_is_shipped():
    names = fixture_names()
    for n in CATALOG:
        assert n in names


@pytest.mark.parametrize("name", fixture_names())
def test_round_trip(name):
    g = load_fixture(name)
    text = print_grammar(g)
    again = parse_grammar(text)
    assert again == g
    assert print_grammar(again) == text


def test_coord_shape():
    g = load_fixture("coord.stg")
    assert isinstance(g, StgGrammar)
    schematic = [n for n, t in g.initial_trees if any(x.annotation.value for _, x in t.walk())]
    assert schematic == ["coord"]
    assert all(t.label == "NP" for n, t in g.initial_trees if n != "coord")


def test_formalism_dispatch():
    assert isinstance(load_fixture("anbn.tsg"), TsgGrammar)
    g = load_fixture("l4.tag")
    assert isinstance(g, TagGrammar) and g.require_adjoining


def test_single_tree_print():
    g = parse_grammar("formalism: stg\nstart: S\nnonterminals: S\nterminals: a\ntree s: (S a)\n")
    assert print_grammar(g).splitlines() == [
        "formalism: stg", "start: S", "nonterminals: S", "terminals: a", "tree s: (S a)"]


def test_order_and_whitespace_do_not_matter():
    a = parse_grammar("formalism: tsg\nstart: S\nnonterminals: S\nterminals: a b\n"
                      "tree base: (S a b)\ntree wrap: (S a S b)\n")
    b = parse_grammar("# comment\n\n  tree wrap:   (S  a S b )\nterminals: b a\n"
                      "tree base: (S a b)\nstart: S\nformalism: tsg\nnonterminals: S\n")
    assert a == b


def _err(text):
    with pytest.raises(GrammarSyntaxError) as err:
        parse_grammar(text)
    return err.value


def test_tsg_with_plus_is_lexical_violation():
    e = _err("formalism: tsg\nstart: S\nnonterminals: S IP\nterminals: a\ntree t: (S IP+ a)\n")
    assert isinstance(e, FormalismLexicalViolation)
    assert (e.line, e.column) == (5, 14)


@pytest.mark.parametrize("text", [
    "formalism: stg\nstart: S\nnonterminals: S\nterminals: a\ntree t: (S <eps>)\n",
    "formalism: tag\nstart: S\nnonterminals: S\nterminals: a\ntree t: (S a S@)\n",
    "formalism: tsg\nstart: S\nnonterminals: S\nterminals: a\ntree t: (S! a)\n",
    "formalism: stg\nstart: S\nnonterminals: S\nterminals: a\naux t: (S a S@)\n",
    "formalism: stg\nstart: S\nnonterminals: S\nterminals: a\nrequire-adjoining: true\ntree t: (S a)\n",
])
def test_lexical_violations(text):
    assert isinstance(_err(text), FormalismLexicalViolation)


def test_error_positions():
    e = _err("formalism: stg\nstart: S\nnonterminals: S\nterminals: a\ntree t: (S a\n")
    assert (e.line, e.column) == (5, 9)
    e = _err("formalism: stg\nstart: S\nbogus: 1\n")
    assert (e.line, e.column) == (3, 1)
    e = _err("formalism: stg\nstart: S\nnonterminals: S\nterminals: a\ntree t: (S a))\n")
    assert (e.line, e.column) == (5, 14)
    e = _err("formalism: cfg\nstart: S\n")
    assert (e.line, e.column) == (1, 12)


def test_missing_and_duplicate_declarations():
    _err("start: S\nnonterminals: S\n")
    _err("formalism: stg\nformalism: stg\nstart: S\n")
    _err("formalism: stg\nstart: S\nnonterminals: S\nterminals: a\ntree t: (S a)\ntree t: (S a a)\n")


def test_validation_failure():
    with pytest.raises(ValidationFailed) as err:
        parse_grammar("formalism: stg\nstart: S\nnonterminals: S\nterminals: a\ntree t: (S+ a)\n")
    assert err.value.report.codes() == ["AnnotatedRoot"]


def test_validate_false_skips_validator():
    g = parse_grammar("formalism: stg\nstart: S\nnonterminals: S\nterminals: a\ntree t: (S+ a)\n",
                      validate=False)
    assert g.initial_trees[0][1].annotation.value == "+"


words = st.text(alphabet="abcxyz", min_size=1, max_size=3)


@given(st.lists(words, min_size=1, max_size=4, unique=True), st.integers(0, 3))
@settings(max_examples=50)
def test_generated_tsg_round_trip(terms, seed):
    trees = [f"tree t{i}: (S {' '.join(terms[: i + 1])})" for i in range(seed + 1)]
    text = "formalism: tsg\nstart: S\nnonterminals: S\nterminals: " + " ".join(terms) + "\n" + "\n".join(trees)
    g = parse_grammar(text)
    assert parse_grammar(print_grammar(g)) == g
