import random

import pytest
from hypothesis import given, settings, strategies as st

from treecoder.tree import (
    EmptyTree,
    Kind,
    MultipleRoots,
    UnbalancedParens,
    find_head,
    get_s,
    kind_of,
    np_specifier,
    parse_sexpr,
)

from treegen import oracle_head, random_sexpr

PROTEST = "(S (NP (NN PROTESTERS)) (VP (VBD DESTROYED) (NP (DT THE) (NN MONUMENT))) (. .))"


def word(tree, token):
    return next(n for n in tree.nodes if n.token == token)


def test_protest_tree_shape():
    t = parse_sexpr(PROTEST)
    assert len(t.nodes) == 9
    assert t.root.kind is Kind.S
    assert t.tokens() == ["PROTESTERS", "DESTROYED", "THE", "MONUMENT", "."]


def test_single_word_tree():
    t = parse_sexpr("(NN dog)")
    assert t.root.kind is Kind.WORD
    assert t.root.token == "DOG"
    assert t.root.children == []


@pytest.mark.parametrize("text", ["(S (NP", "(S (NP (NN X))))", ")("])
def test_unbalanced(text):
    with pytest.raises(UnbalancedParens) as info:
        parse_sexpr(text)
    assert info.value.position >= 0


def test_empty_and_multiple_roots():
    with pytest.raises(EmptyTree):
        parse_sexpr("   ")
    with pytest.raises(MultipleRoots):
        parse_sexpr("(NN A) (NN B)")


def test_root_wrapper_removed(section5_text):
    t = parse_sexpr(section5_text)
    assert t.root.label == "S"
    assert parse_sexpr("((S (NP (NN X)) (VP (VBD Y))))").root.label == "S"


def test_function_tags_stripped():
    assert kind_of("NP-SBJ-1") is Kind.NP
    assert kind_of("PP-LOC") is Kind.PP
    assert kind_of("SBAR") is Kind.S
    assert kind_of("-NONE-") is Kind.WORD
    assert kind_of("ADVP") is Kind.OTHER


@given(st.text(alphabet=st.characters(blacklist_characters="() \t\n"), min_size=1, max_size=8))
def test_kind_total(label):
    assert kind_of(label) in set(Kind)


def test_structure_links(section5_text):
    t = parse_sexpr(section5_text)
    for n in t.nodes:
        if n.is_word:
            assert n.token and not n.children
        else:
            assert n.token is None and n.children
        for i, c in enumerate(n.children):
            assert c.parent is n and c.index == i
    assert [n.position for n in t.nodes] == list(range(len(t.nodes)))


@settings(max_examples=200)
@given(st.integers(0, 2**32))
def test_leaf_round_trip(seed):
    text = random_sexpr(random.Random(seed))
    t = parse_sexpr(text)
    again = parse_sexpr(t.to_sexpr())
    assert again.tokens() == t.tokens()
    assert again.to_sexpr() == t.to_sexpr()


def test_find_head_examples(section5_text):
    t = parse_sexpr(section5_text)
    gaza = word(t, "GAZA").parent
    assert find_head(gaza).token == "STRIP"
    m = parse_sexpr("(NP (NN MONUMENT))")
    assert find_head(m.root).token == "MONUMENT"
    assert find_head(word(t, "SAID")).token == "SAID"


def test_find_head_backs_off_leftward():
    # rightmost NP child dead-ends, so the search falls back to the left one
    t = parse_sexpr("(NP (NP (NN LEFT)) (NP (JJ RED)))")
    assert find_head(t.root).token == "LEFT"


def test_find_head_none_without_chain():
    t = parse_sexpr("(NP (ADJP (NN HIDDEN)) (JJ BIG))")
    assert find_head(t.root) is None


@settings(max_examples=300)
@given(st.integers(0, 2**32))
def test_find_head_matches_oracle(seed):
    t = parse_sexpr(random_sexpr(random.Random(seed)))
    for node in t.nodes:
        if node.kind in (Kind.NP, Kind.VP, Kind.PP, Kind.WORD):
            assert find_head(node) is oracle_head(node)


def test_get_s(section5_text):
    p = parse_sexpr(PROTEST)
    assert get_s(word(p, "DESTROYED")) is p.root
    assert get_s(p.root) is p.root
    t = parse_sexpr(section5_text)
    inner = get_s(word(t, "LAUNCHED"))
    assert inner is not t.root
    assert inner.parent.label == "SBAR"
    assert get_s(parse_sexpr("(NP (NN X))").root) is None


@settings(max_examples=100)
@given(st.integers(0, 2**32))
def test_get_s_idempotent(seed):
    t = parse_sexpr(random_sexpr(random.Random(seed)))
    for n in t.nodes:
        s = get_s(n)
        assert get_s(s) is s


def test_np_specifier(section5_text):
    p = parse_sexpr(PROTEST)
    assert np_specifier(word(p, "DESTROYED").parent).text() == "PROTESTERS"
    t = parse_sexpr(section5_text)
    launched = word(t, "LAUNCHED").parent
    assert np_specifier(launched).text() == "A MORTAR BOMB"
    bare = parse_sexpr("(S (VP (VB GO) (ADVP (RB HOME))))")
    assert np_specifier(bare.root.children[0]) is None
