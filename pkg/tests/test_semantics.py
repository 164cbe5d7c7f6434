import pytest

from treecoder import codes, parse_sexpr
from treecoder.dictionaries import parse_transformation
from treecoder.pipeline import get_events
from treecoder.semantics import PLACEHOLDER, Analyzer, Event, is_valid

ACTIVE = "(S (NP (DT THE) (NNS PROTESTERS)) (VP (VBD DESTROYED) (NP (DT THE) (NN MONUMENT))) (. .))"
PASSIVE = (
    "(S (NP (DT THE) (NN MONUMENT)) (VP (VBD WAS) (VP (VBN DESTROYED)"
    " (PP (IN BY) (NP (NNS PROTESTERS))))) (. .))"
)
INTEND = (
    "(S (NP (NNP IRAQ)) (VP (VBZ INTENDS) (S (VP (TO TO) (VP (VB HELP) (NP (NNP JORDAN)))))))"
)
WILL_NOT = "(S (NP (NNP IRAQ)) (VP (MD WILL) (RB NOT) (VP (VB HELP) (NP (NNP JORDAN)))))"
NOT_REFUSE = (
    "(S (NP (NNP IRAQ)) (VP (MD WILL) (RB NOT) (VP (VB REFUSE)"
    " (S (VP (TO TO) (VP (VB HELP) (NP (NNP JORDAN))))))))"
)


def parse(text):
    return parse_sexpr(text, "t")


def node(tree, token):
    return next(n for n in tree.nodes if n.token == token)


def verb_phrase(tree, token):
    return node(tree, token).parent


def test_np_priority_words_before_pp(store):
    t = parse("(NP (NP (JJ AMERICAN) (NNS TROOPS)) (PP (IN IN) (NP (NNP IRAQ))))")
    assert Analyzer(store, t).meaning(t.root).codes() == ["USAMIL"]
    flat = parse("(NP (JJ AMERICAN) (NNS TROOPS) (PP (IN IN) (NP (NNP IRAQ))))")
    assert Analyzer(store, flat).meaning(flat.root).codes() == ["USAMIL"]


def test_np_agent_takes_actor_from_pp(store):
    t = parse("(NP (NP (NNS TROOPS)) (PP (IN IN) (NP (NNP IRAQ))))")
    assert Analyzer(store, t).meaning(t.root).codes() == ["IRQMIL"]


def test_np_without_hits(store):
    t = parse("(NP (DT THE) (JJ OLD) (NN BRIDGE))")
    assert not Analyzer(store, t).meaning(t.root)


def test_lone_agent_gets_placeholder(store):
    t = parse("(NP (DT THE) (NNS PROTESTERS))")
    assert Analyzer(store, t).meaning(t.root).codes() == ["---OPP"]


def test_pp_meaning(store, section5_text):
    t = parse(section5_text)
    a = Analyzer(store, t)
    from_pp = node(t, "FROM").parent
    m = a.meaning(from_pp)
    assert m.codes() == ["PSEGZA"] and m.head_token == "FROM"
    assert a.meaning(node(t, "AT").parent).codes() == ["ISR"]
    assert not a.meaning(node(t, "ON").parent)


def pronoun_tree(pronoun):
    return parse(
        "(S (NP (NNP A)) (VP (VBD SAID) (SBAR (S (NP (NNP B))"
        f" (VP (VBD HURT) (NP (PRP {pronoun})))))))"
    )


def test_reflexive_binds_local_subject(store):
    t = pronoun_tree("ITSELF")
    a = Analyzer(store, t)
    assert a.resolve_pronoun(node(t, "ITSELF")).codes() == ["BBB"]
    assert [e.target for e in a.meaning(verb_phrase(t, "HURT")).events] == ["BBB"]


def test_plain_pronoun_binds_higher_clause(store):
    t = pronoun_tree("IT")
    a = Analyzer(store, t)
    assert a.resolve_pronoun(node(t, "IT")).codes() == ["AAA"]
    assert [e.target for e in a.meaning(verb_phrase(t, "HURT")).events] == ["AAA"]


@pytest.mark.parametrize("pronoun", ["HE", "SHE"])
def test_no_gender_agreement(store, pronoun):
    t = parse(
        "(S (NP (NNP OBAMA)) (VP (VBD TOLD) (NP (NNP HILLARY)) (SBAR (IN THAT)"
        f" (S (NP (PRP {pronoun})) (VP (MD SHOULD) (VP (VB RUN)))))))"
    )
    assert Analyzer(store, t).resolve_pronoun(node(t, pronoun)).codes() == ["USAHRC"]


def test_unresolved_pronoun(store):
    t = parse("(S (NP (PRP IT)) (VP (VBD RAN)))")
    assert not Analyzer(store, t).resolve_pronoun(node(t, "IT"))


def test_get_upper(store, section5_text):
    t = parse(section5_text)
    assert Analyzer(store, t).get_upper(verb_phrase(t, "SAID")) == ["ISR"]
    bare = parse("(S (VP (VB HELP) (NP (NNP JORDAN))))")
    assert Analyzer(store, bare).get_upper(bare.root.children[0]) == []
    odd = parse("(S (NP (NN NOBODY)) (VP (VB HELPED) (NP (NNP JORDAN))))")
    assert Analyzer(store, odd).get_upper(verb_phrase(odd, "HELPED")) == []


def test_get_lower_helping_chain(store, section5_text):
    t = parse(section5_text)
    lower, via = Analyzer(store, t).get_lower(verb_phrase(t, "WAS"))
    assert via == "vp"
    assert lower.events == [Event("PSEGZA", "ISR", 0x00A0, ("LAUNCH",))]


def test_get_lower_negation(store):
    t = parse(WILL_NOT)
    lower, via = Analyzer(store, t).get_lower(verb_phrase(t, "WILL"))
    assert via == "vp" and lower.negated


def test_get_lower_uncoded_object(store, tmp_path):
    t = parse("(S (NP (NNS PROTESTERS)) (VP (VBD DESTROYED) (NP (DT THE) (NN STATUE))))")
    lower, via = Analyzer(store, t).get_lower(verb_phrase(t, "DESTROYED"))
    assert not lower.actors and via is None


def test_get_code_voice_invariance(store):
    results = []
    for text in (ACTIVE, PASSIVE):
        t = parse(text)
        a = Analyzer(store, t)
        vp = verb_phrase(t, "DESTROYED")
        match = a.get_code(vp)
        events = a.meaning(top_vp(t)).events
        results.append((match.code, match.pattern.source_text, events))
    assert results[0] == results[1]
    assert results[0][0] == codes.to_internal("145")
    assert [(e.source, e.target) for e in results[0][2]] == [("---OPP", "MON")]


def top_vp(tree):
    return next(c for c in tree.root.children if c.kind.name == "VP")


def test_passive_detected(store):
    t = parse(PASSIVE)
    frame = Analyzer(store, t).frame(verb_phrase(t, "DESTROYED"))
    assert frame.passive and frame.agent_pp.text() == "BY PROTESTERS"
    assert not Analyzer(store, parse(ACTIVE)).frame(verb_phrase(parse(ACTIVE), "DESTROYED")).passive


def test_passive_without_agent(store):
    t = parse("(S (NP (NNP ISRAEL)) (VP (VBD WAS) (VP (VBN ATTACKED))))")
    events = Analyzer(store, t).meaning(top_vp(t)).events
    assert events == [Event(PLACEHOLDER, "ISR", 0x00A0, ("ATTACK",))]


def test_most_specific_pattern_wins(store):
    police = parse("(S (NP (NNS POLICE)) (VP (VBD DESTROYED) (NP (DT THE) (NN MONUMENT))))")
    assert Analyzer(store, police).get_code(verb_phrase(police, "DESTROYED")).code == codes.to_internal("180")
    t = parse(ACTIVE)
    assert Analyzer(store, t).get_code(verb_phrase(t, "DESTROYED")).code == codes.to_internal("145")


def test_unknown_verb_has_no_code(store):
    t = parse("(S (NP (NNP ISRAEL)) (VP (VBD SNEEZED)))")
    assert Analyzer(store, t).get_code(verb_phrase(t, "SNEEZED")) is None


SUSPECTED_NP = "(S (NP (VP (VBN SUSPECTED) (NP (NNS MILITANTS)))) (VP (VBD ATTACKED) (NP (NNP ISRAEL))))"
SUSPECTED_S = "(S (VP (VBN SUSPECTED) (NP (NNS MILITANTS))) (VP (VBD ATTACKED) (NP (NNP ISRAEL))))"
SUSPECTED_SS = (
    "(S (S (VP (VBN SUSPECTED) (NP (NNS MILITANTS)))) (VP (VBD ATTACKED) (NP (NNP ISRAEL))))"
)


@pytest.mark.parametrize("text", [SUSPECTED_NP, SUSPECTED_S, SUSPECTED_SS])
def test_participle_in_noun_position(store, text):
    t = parse(text)
    assert not is_valid(verb_phrase(t, "SUSPECTED"))
    assert get_events(t, store).events == [("---REB", "ISR", "190")]


def test_finite_and_auxiliary_verbs_valid(store):
    assert is_valid(verb_phrase(parse(ACTIVE), "DESTROYED"))
    assert is_valid(verb_phrase(parse(PASSIVE), "DESTROYED"))
    assert is_valid(verb_phrase(parse("(S (NP (NNP ISRAEL)) (VP (VBN ATTACKED) (NP (NNP IRAQ))))"), "ATTACKED"))


def test_section5_inner_and_outer(store, section5_text):
    t = parse(section5_text)
    a = Analyzer(store, t)
    inner = a.meaning(verb_phrase(t, "LAUNCHED")).events
    assert [(e.source, e.target, e.code) for e in inner] == [("PSEGZA", "ISR", 0x00A0)]
    outer = a.meaning(verb_phrase(t, "SAID")).events
    assert [(e.source, e.target, e.code) for e in outer] == [("ISR", "PSEGZA", codes.to_internal("112"))]


def test_intend_to_help(store):
    t = parse(INTEND)
    events = Analyzer(store, t).meaning(top_vp(t)).events
    assert [(e.source, e.target, e.code) for e in events] == [("IRQ", "JOR", 0x3040)]


def test_will_not_help(store):
    t = parse(WILL_NOT)
    events = Analyzer(store, t).meaning(top_vp(t)).events
    assert [e.code for e in events] == [-0xFFBF]


def test_double_negation_restores_code(store):
    t = parse(NOT_REFUSE)
    events = Analyzer(store, t).meaning(top_vp(t)).events
    assert [(e.source, e.target, e.code) for e in events] == [("IRQ", "JOR", 0x0040)]


def test_collision_keeps_lower_event(store):
    # SAY (0x1000) over TELL (0x1000) collides on the act digit
    t = parse(
        "(S (NP (NNP IRAQ)) (VP (VBD SAID) (SBAR (S (NP (NNP JORDAN))"
        " (VP (VBD TOLD) (NP (NNP ISRAEL)))))))"
    )
    events = Analyzer(store, t).meaning(top_vp(t)).events
    assert Event("JOR", "ISR", 0x1000, ("TELL",)) in events
    assert Event("IRQ", PLACEHOLDER, 0x1000, ("SAY",)) in events


def test_fan_out_over_lower_actors(store):
    t = parse("(S (NP (NNP IRAQ)) (VP (VBD ATTACKED) (NP (NP (NNP ISRAEL)) (CC AND) (NP (NNP JORDAN)))))")
    events = Analyzer(store, t).meaning(top_vp(t)).events
    assert [(e.source, e.target) for e in events] == [("IRQ", "ISR"), ("IRQ", "JOR")]


def test_match_transform_examples(store):
    a = Analyzer(store, parse("(NN X)"))
    will = parse_transformation("a (a b WILL_ATTACK) SAY = a b 138")
    say = codes.to_internal("010")
    inner = Event("AAA", "BBB", 0x00A0, ("WILL", "ATTACK"))
    got = a.match_transform("AAA", "SAY", say, inner, rules=[will])
    assert (got.source, got.target, got.code) == ("AAA", "BBB", codes.to_internal("138"))
    other = Event("BBB", "CCC", 0x00A0, ("WILL", "ATTACK"))
    assert a.match_transform("AAA", "SAY", say, other, rules=[will]) is None
    blame = Event("PSEGZA", "ISR", 0x00A0, ("LAUNCH",))
    got = a.match_transform("ISR", "SAY", say, blame)
    assert (got.source, got.target, got.code) == ("ISR", "PSEGZA", codes.to_internal("112"))


def test_transform_precedes_combine(store, section5_text):
    t = parse(section5_text)
    events = Analyzer(store, t).meaning(verb_phrase(t, "SAID")).events
    assert all(e.transformed for e in events)
    assert codes.combine(0x1000, 0x00A0) not in [e.code for e in events]


def test_will_attack_rule_end_to_end(store):
    t = parse(
        "(S (NP (NNP A)) (VP (VBD SAID) (SBAR (S (NP (NNP A)) (VP (MD WILL)"
        " (VP (VB ATTACK) (NP (NNP B))))))))"
    )
    assert get_events(t, store).events == [("AAA", "BBB", "138")]


def test_meaning_is_deterministic(store, section5_text):
    runs = {str(Analyzer(store, parse(section5_text)).meaning(parse(section5_text).root)) for _ in range(5)}
    assert len(runs) == 1


def test_trace_near_miss(store):
    t = parse("(S (NP (NNP IRAQ)) (VP (VBD LAUNCHED) (NP (NNS ROCKETS)) (PP (IN INTO) (NP (NNP ISRAEL)))))")
    trace = []
    Analyzer(store, t, trace).meaning(top_vp(t))
    text = "\n".join(trace)
    assert "pattern * (at) [190] failed at post-preps" in text
