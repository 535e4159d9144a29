import warnings

import pytest

from oracles import anbncndn
from stgkit.equiv import tag_source
from stgkit.errors import (LabelMismatch, LengthCeilingExceeded, NotAnAdjunctionSite,
                           TagCompletenessUnavailable, UnknownToken, ValidationFailed)
from stgkit.grammar_io import load_fixture, parse_grammar
from stgkit.tag import (AuxiliaryTree, TagGrammar, adjoin, auxiliary, enumerate_tag, member_tag,
                        replay_tag, tag_language, validate_tag)
from stgkit.trees import Alphabet, is_complete, parse_tree, yield_of
from stgkit.tsg import substitute_tsg

SENT2 = "cookie monster touches grover after jumping over the fence".split()
S4 = Alphabet.of("S", "a b c d")


def tag(text):
    return parse_grammar("formalism: tag\n" + text)


def test_l4_validates():
    report = validate_tag(load_fixture("l4.tag"))
    assert report.ok and not report.warnings


def test_multiple_feet():
    aux = AuxiliaryTree(parse_tree("(S a S S)", S4), ((1,), (2,)))
    g = TagGrammar.build({"S"}, {"a"}, "S", {"i": parse_tree("(S a)", S4)}, {"x": aux})
    assert "MultipleFeet" in validate_tag(g).codes()


def test_multiple_feet_from_text():
    with pytest.raises(ValidationFailed) as err:
        tag("start: S\nnonterminals: S\nterminals: a\ntree i: (S a)\naux x: (S a S@ S@)\n")
    assert "MultipleFeet" in err.value.report.codes()


def test_foot_label_mismatch():
    al = Alphabet.of("S T", "a")
    g = TagGrammar.build({"S", "T"}, {"a"}, "S", {"i": parse_tree("(S a)", al)},
                         {"x": auxiliary(parse_tree("(S a T)", al), (1,))})
    assert "FootLabelMismatch" in validate_tag(g).codes()


def test_l4_adjoin_steps():
    g = load_fixture("l4.tag")
    init = g.initial_trees[0][1]
    aux = dict(g.auxiliary_trees)["abcd"]
    one = adjoin(init, (), aux)
    assert yield_of(one) == tuple("abcd")
    two = adjoin(one, (1,), aux)
    assert yield_of(two) == tuple("aabbccdd")
    with pytest.raises(NotAnAdjunctionSite):
        adjoin(one, (), aux)  # root bars adjoining


def test_adjoin_errors():
    al = Alphabet.of("S T", "a b")
    aux = auxiliary(parse_tree("(S a S)", al), (1,))
    host = parse_tree("(S (T b) b)", al)
    with pytest.raises(NotAnAdjunctionSite):
        adjoin(host, (1,), aux)
    with pytest.raises(LabelMismatch):
        adjoin(host, (0,), aux)


def test_yield_decomposition():
    """Adjoining at a node with yield x inside u x w gives u l x r w."""
    al = Alphabet.of("S T", "a b c d")
    host = parse_tree("(S a (T b c) d)", al)
    aux = auxiliary(parse_tree("(T c T d)", al), (1,))
    assert yield_of(adjoin(host, (1,), aux)) == tuple("a c b c d d".split())


def test_modification_adjoin():
    g = load_fixture("mod.tag")
    trees = dict(g.initial_trees)
    host = trees["s-touches"]
    host = substitute_tsg(host, (0,), trees["np-cookie-monster"])
    host = substitute_tsg(host, (1, 1), trees["np-grover"])
    out = adjoin(host, (1,), dict(g.auxiliary_trees)["vp-after"])
    out = substitute_tsg(out, out.sites()[0], trees["np-the-fence"])
    assert "touches grover after jumping over the fence" in " ".join(yield_of(out))


def test_l4_language():
    g = load_fixture("l4.tag")
    found = list(enumerate_tag(g, 20, 5))
    assert {yield_of(t) for t, _ in found} == anbncndn(5)
    for t, trace in found:
        assert is_complete(t)
        assert replay_tag(g, trace) == t


def test_no_auxiliaries():
    g = tag("start: S\nnonterminals: S\nterminals: a\ntree i: (S a)\n")
    assert [str(t) for t, _ in enumerate_tag(g, 5, 3)] == ["(S a)"]


def test_mod_contains_sentence():
    g = load_fixture("mod.tag")
    assert tuple(SENT2) in tag_language(g, 12, 6)


def test_member_l4():
    g = load_fixture("l4.tag")
    assert member_tag(g, "a a b b c c d d".split())
    assert not member_tag(g, "a a b c c d d".split())
    assert not member_tag(g, [])
    with pytest.raises(UnknownToken):
        member_tag(g, ["a", "x"])
    with pytest.raises(LengthCeilingExceeded):
        member_tag(g, ["a"] * 21)


def test_member_mod():
    assert member_tag(load_fixture("mod.tag"), SENT2)


def test_unconstrained_adjoining_overgenerates():
    # without the ! flags the same trees generate strings outside the language
    g = tag("start: S\nnonterminals: S\nterminals: a b c d\nrequire-adjoining: true\n"
            "tree init: (S <eps>)\naux abcd: (S a (S b S@ c) d)\n")
    lang = tag_language(g, 8, 3)
    assert tuple("ababcdcd") in lang
    assert not lang <= anbncndn(2)


def test_nonlexicalized_warns():
    g = tag("start: S\nnonterminals: S A\nterminals: a\ntree i: (S (A a))\naux x: (A A@)\n")
    assert validate_tag(g).warnings
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        tag_source(g)
    assert any(issubclass(w.category, TagCompletenessUnavailable) for w in caught)
