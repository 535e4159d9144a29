import random

import pytest
from hypothesis import given, settings, strategies as st

from stgkit.errors import (InvalidAddress, TerminalWithChildren, UnbalancedBrackets,
                           UnknownToken)
from stgkit.trees import (EPS, Alphabet, Kind, SyntaxTree, ancestor_labels, is_complete,
                          leaf, node, parse_tree, print_tree, replace_at, yield_of)

AB = Alphabet.of("S A B", "a b")


def test_parse_simple():
    t = parse_tree("(S a b)", AB)
    assert t.label == "S"
    assert [c.label for c in t.children] == ["a", "b"]
    assert all(c.kind is Kind.TERMINAL for c in t.children)


def test_parse_bare_terminal():
    t = parse_tree("a", AB)
    assert t == SyntaxTree("a", (), Kind.TERMINAL)


def test_parse_nonterminal_leaf():
    t = parse_tree("(S (A a) B)", AB)
    assert t.children[0] == node("A", leaf("a"))
    assert t.children[1] == SyntaxTree("B", (), Kind.NONTERMINAL)
    assert t.sites() == [(1,)]


@pytest.mark.parametrize("text", ["(S a", "S a)", "(S a))", "()", "(S (A a)"])
def test_unbalanced(text):
    with pytest.raises(UnbalancedBrackets):
        parse_tree(text, AB)


def test_unknown_token():
    with pytest.raises(UnknownToken) as err:
        parse_tree("(S a z)", AB)
    assert err.value.token == "z"


def test_terminal_with_children():
    with pytest.raises(TerminalWithChildren):
        parse_tree("(S (a b))", AB)


def test_yield_examples():
    assert yield_of(parse_tree("(S (A a) (B b))", AB)) == ("a", "b")
    assert yield_of(parse_tree("(S <eps>)", AB)) == ()


def test_is_complete():
    assert is_complete(parse_tree("(S a b)", AB))
    assert not is_complete(parse_tree("(S (A a) B)", AB))


def test_replace_root_and_child():
    t = parse_tree("(S A B)", AB)
    r = parse_tree("(B b)", AB)
    assert replace_at(t, (), r) == r
    assert replace_at(t, (1,), r) == parse_tree("(S A (B b))", AB)


def test_replace_invalid_address():
    t = parse_tree("(S A B)", AB)
    with pytest.raises(InvalidAddress):
        replace_at(t, (2,), leaf("a"))
    with pytest.raises(InvalidAddress):
        replace_at(t, (0, 0), leaf("a"))


def test_ancestor_labels():
    t = parse_tree("(S (A (B a)))", AB)
    assert ancestor_labels(t, (0, 0, 0)) == {"S", "A", "B"}
    assert ancestor_labels(t, (0,)) == {"S"}
    assert ancestor_labels(t, ()) == frozenset()


def _random_tree(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([leaf("a"), leaf("b"), SyntaxTree("A", (), Kind.NONTERMINAL), leaf(EPS)])
    return node(rng.choice("SAB"), *(_random_tree(rng, depth - 1) for _ in range(rng.randint(1, 3))))


def _naive_yield(t):
    if not t.children:
        return [] if t.kind is Kind.EPSILON else [t.label]
    return [x for c in t.children for x in _naive_yield(c)]


def test_replace_then_yield_splices():
    rng = random.Random(7)
    for _ in range(100):
        t = _random_tree(rng, 4)
        leaves = [a for a, n in t.walk() if not n.children]
        addr = rng.choice(leaves)
        r = _random_tree(rng, 2)
        before = [x for a, n in t.walk() if not n.children and a < addr for x in _naive_yield(n)]
        after = [x for a, n in t.walk() if not n.children and a > addr for x in _naive_yield(n)]
        assert list(yield_of(replace_at(t, addr, r))) == before + _naive_yield(r) + after


trees = st.recursive(
    st.sampled_from([leaf("a"), leaf("b"), leaf(EPS), SyntaxTree("B", (), Kind.NONTERMINAL)]),
    lambda kids: st.builds(lambda lab, cs: node(lab, *cs), st.sampled_from("SAB"),
                           st.lists(kids, min_size=1, max_size=3)),
    max_leaves=12)


@given(trees)
@settings(max_examples=200)
def test_print_parse_round_trip(t):
    assert parse_tree(print_tree(t), AB) == t


@given(trees)
def test_yield_matches_naive(t):
    assert list(yield_of(t)) == _naive_yield(t)


def test_no_adjoin_marker_round_trips():
    t = parse_tree("(S! a (S b S!) c)", Alphabet.of("S", "a b c"))
    assert t.no_adjoin and not t.children[1].no_adjoin
    assert print_tree(t) == "(S! a (S b S!) c)"
