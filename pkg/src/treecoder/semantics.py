"""Recursive meaning of parse-tree nodes.

Every node is assigned a :class:`Meaning`: either a list of actor codes or
a list of events.  Noun phrases look for actors, prepositional phrases pass
on the meaning of their object, and verb phrases combine the subject they
find above them with the verb code and whatever their complements mean.
One :class:`Analyzer` handles one sentence and caches the meaning of each
node, so asking for the top verb phrase evaluates the whole tree once.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from . import codes
from .dictionaries import DictionaryStore, NounSpec, PrepSpec, Triple, TransformRule, Var, VerbEntry, VerbPattern, Wildcard
from .tree import Kind, ParseNode, ParseTree, find_head, get_s, np_specifier, top_of_chain

PLACEHOLDER = "---"
BE_FORMS = frozenset({"BE", "IS", "ARE", "WAS", "WERE", "BEEN", "BEING", "AM", "'S", "'RE", "'M"})
NEGATORS = frozenset({"NOT", "N'T", "NEVER"})
AGENT_PREPS = ("BY", "FROM", "IN")
PRONOUN_TAGS = frozenset({"PRP", "PRP$"})
VERB_TAGS = frozenset({"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"})


@dataclass(frozen=True)
class Event:
    source: str
    target: str
    code: Optional[int]
    verbs: tuple[str, ...] = ()
    transformed: bool = False
    origin: Optional[int] = field(default=None, compare=False)

    @property
    def complete(self) -> bool:
        return self.source != PLACEHOLDER and self.target != PLACEHOLDER and self.code is not None

    def __str__(self) -> str:
        code = codes.format_code(self.code) if self.code is not None else PLACEHOLDER
        return f"({self.source} {self.target} {code})"


@dataclass
class Meaning:
    actors: list[str] = field(default_factory=list)
    agents: list[str] = field(default_factory=list)
    events: list[Event] = field(default_factory=list)
    negated: bool = False
    head_token: Optional[str] = None

    def codes(self) -> list[str]:
        """Actor codes, or placeholder-prefixed agent codes when no actor is known."""
        if self.actors:
            return list(self.actors)
        return [PLACEHOLDER + a for a in self.agents]

    def __bool__(self) -> bool:
        return bool(self.actors or self.agents or self.events)

    def __str__(self) -> str:
        if self.events:
            return " ".join(str(e) for e in self.events)
        return " ".join(self.codes()) or "-"


@dataclass
class PatternMatch:
    code: int
    entry: VerbEntry
    pattern: Optional[VerbPattern] = None


@dataclass
class VerbFrame:
    verb: Optional[ParseNode]
    entry: Optional[VerbEntry]
    modal: Optional[ParseNode]
    passive: bool
    subject: Optional[ParseNode]
    agent_pp: Optional[ParseNode]

    @property
    def lemma(self) -> Optional[str]:
        return self.entry.lemma if self.entry else None


def _with_agent(code: str, agents: Sequence[str]) -> str:
    if not agents or code.endswith(agents[0]):
        return code
    return code + agents[0]


def _unique(items: Iterable) -> list:
    out = []
    for x in items:
        if x not in out:
            out.append(x)
    return out


def preposition(pp: ParseNode) -> Optional[str]:
    for child in pp.children:
        if child.is_word:
            return child.token
        break
    return None


def is_reflexive(token: str) -> bool:
    return token.endswith("SELF") or token.endswith("SELVES")


def is_valid(vp: ParseNode) -> bool:
    """False for a past participle misparsed as a verb phrase in noun position.

    ``(NP (VP (VBN SUSPECTED) (NP MILITANTS)))`` is really an adjective plus
    a noun; such a VP is analysed as a noun phrase instead of an event.
    """
    kids = vp.children
    if len(kids) != 2 or not kids[0].is_word or kids[0].tag != "VBN" or kids[1].kind is not Kind.NP:
        return True
    parent = vp.parent
    if parent is None or parent.kind is Kind.VP:
        return True
    if parent.kind is not Kind.S:
        return False
    if np_specifier(vp) is not None:
        return True
    if any(s.kind is Kind.VP for s in parent.children[vp.index + 1:]):
        return False
    grand = parent.parent
    if len(parent.children) == 1 and grand is not None and grand.kind is Kind.S:
        return not any(s.kind is Kind.VP for s in grand.children[parent.index + 1:])
    return True


class Analyzer:
    """Meaning computation for one sentence against one dictionary store."""

    def __init__(self, store: DictionaryStore, tree: ParseTree, trace: Optional[list[str]] = None):
        self.store = store
        self.tree = tree
        self.date = tree.date
        self.trace = trace
        self._cache: dict[int, Meaning] = {}
        self._busy: set[int] = set()

    def note(self, node: Optional[ParseNode], message: str) -> None:
        if self.trace is not None:
            where = f"{node.tag} {node.text()!r}" if node is not None else ""
            self.trace.append(f"[{where}] {message}" if where else message)

    # ------------------------------------------------------------ dispatch

    def meaning(self, node: ParseNode) -> Meaning:
        key = node.position
        if key in self._cache:
            return self._cache[key]
        if key in self._busy:
            return Meaning()
        self._busy.add(key)
        try:
            if node.kind is Kind.NP or node.kind is Kind.OTHER:
                result = self.np_meaning(node)
            elif node.kind is Kind.PP:
                result = self.pp_meaning(node)
            elif node.kind is Kind.VP:
                result = self.vp_meaning(node)
            elif node.kind is Kind.S:
                result = self.clause_meaning(node)
            elif node.tag in PRONOUN_TAGS:
                result = self.resolve_pronoun(node)
            else:
                result = Meaning()
        finally:
            self._busy.discard(key)
        self._cache[key] = result
        return result

    # ------------------------------------------------------------ nouns

    def _surface_words(self, node: ParseNode) -> list[ParseNode]:
        """Word children, looking through containers such as ADJP or NML."""
        out = []
        for child in node.children:
            if child.is_word:
                out.append(child)
            elif child.kind is Kind.OTHER:
                out.extend(self._surface_words(child))
        return out

    def np_meaning(self, node: ParseNode) -> Meaning:
        """Actors of a noun phrase: own words, then NP, PP and VP children."""
        words = [w for w in self._surface_words(node) if w.tag != "DT"]
        tokens = [w.token for w in words]
        head = find_head(node) if node.kind is Kind.NP else None
        head_token = head.token if head is not None else None

        actor_hits = self.store.scan_actors(tokens, self.date)
        agents = _unique(code for _, _, code, _ in self.store.scan_agents(tokens))
        if actor_hits:
            actors = _unique(_with_agent(code, agents) for _, _, code, _ in actor_hits)
            for start, end, code, _ in actor_hits:
                self.note(node, f"actor {' '.join(tokens[start:end])} -> {code}")
            if agents:
                self.note(node, f"agent -> {agents[0]}")
            return Meaning(actors=actors, head_token=head_token)

        for w in words:
            if w.tag in PRONOUN_TAGS:
                bound = self.meaning(w)
                if bound.actors:
                    return Meaning(actors=_unique(_with_agent(c, agents) for c in bound.actors), head_token=head_token)
                agents = _unique(agents + bound.agents)

        groups = (
            [c for c in node.children if c.kind is Kind.NP or (c.kind is Kind.VP and not is_valid(c))],
            node.children_of(Kind.PP),
            [c for c in node.children if c.kind is Kind.VP and is_valid(c)],
        )
        for group in groups:
            actors: list[str] = []
            for child in group:
                m = self.meaning(child)
                actors.extend(m.actors)
                agents = _unique(agents + m.agents)
            if actors:
                return Meaning(actors=_unique(_with_agent(c, agents) for c in actors), head_token=head_token)
        return Meaning(agents=agents, head_token=head_token)

    def pp_meaning(self, node: ParseNode) -> Meaning:
        """Meaning of the object of a preposition."""
        objects = [c for c in node.children if not c.is_word]
        result = Meaning()
        for kinds in ((Kind.NP, Kind.OTHER), (Kind.S, Kind.VP, Kind.PP)):
            for child in objects:
                if child.kind in kinds:
                    m = self.meaning(child)
                    result = Meaning(
                        actors=_unique(result.actors + m.actors),
                        agents=_unique(result.agents + m.agents),
                    )
            if result.actors:
                break
        if not result:
            for w in node.children[1:]:
                if w.is_word and w.tag in PRONOUN_TAGS:
                    result = self.meaning(w)
                    break
        return Meaning(actors=list(result.actors), agents=list(result.agents), head_token=preposition(node))

    def resolve_pronoun(self, word: ParseNode) -> Meaning:
        """Bind a pronoun to an antecedent inside the sentence.

        Reflexives take the closest coded noun phrase to their left, or the
        subject of the closest verb phrase above them.  Other pronouns skip
        their own clause and search from above it.
        """
        reflexive = is_reflexive(word.token)
        if reflexive:
            child = word
        else:
            child = get_s(word)
            if child is None:
                self.note(word, f"pronoun {word.token} unresolved (no clause)")
                return Meaning()
        while child.parent is not None:
            anc = child.parent
            for sib in child.left_siblings():
                if sib.kind is Kind.NP or (sib.kind is Kind.VP and not is_valid(sib)):
                    m = self.meaning(sib)
                    if m.actors or m.agents:
                        self.note(word, f"pronoun {word.token} -> {' '.join(m.codes())} (antecedent {sib.text()!r})")
                        return Meaning(actors=list(m.actors), agents=list(m.agents))
            if anc.kind is Kind.VP:
                subj = self.subject_of(anc)
                if subj is not None:
                    m = self.meaning(subj)
                    if m.actors or m.agents:
                        self.note(word, f"pronoun {word.token} -> {' '.join(m.codes())} (subject {subj.text()!r})")
                        return Meaning(actors=list(m.actors), agents=list(m.agents))
            child = anc
        self.note(word, f"pronoun {word.token} unresolved")
        return Meaning()

    # ------------------------------------------------------------ clauses

    def clause_meaning(self, node: ParseNode) -> Meaning:
        parts = [c for c in node.children if c.kind is Kind.S or (c.kind is Kind.VP and is_valid(c))]
        events: list[Event] = []
        for child in parts:
            events.extend(self.meaning(child).events)
        if events:
            return Meaning(events=events)
        for group in (node.children_of(Kind.NP), parts):
            actors: list[str] = []
            agents: list[str] = []
            for child in group:
                m = self.meaning(child)
                actors.extend(m.actors)
                agents.extend(m.agents)
            if actors or agents:
                return Meaning(actors=_unique(actors), agents=_unique(agents))
        return Meaning()

    # ------------------------------------------------------------ verbs

    def subject_of(self, vp: ParseNode) -> Optional[ParseNode]:
        """The NP specifier of ``vp``, accepting participle phrases in noun position."""
        subj = np_specifier(vp)
        if subj is not None:
            return subj
        top = top_of_chain(vp)
        if top.parent is None or top.parent.kind is not Kind.S:
            return None
        for sib in top.left_siblings():
            if sib.kind is Kind.VP and not is_valid(sib):
                return sib
            if sib.kind is Kind.S and len(sib.children) == 1:
                only = sib.children[0]
                if only.kind is Kind.VP and not is_valid(only):
                    return only
        return None

    def frame(self, vp: ParseNode) -> VerbFrame:
        verb = next((c for c in vp.children if c.is_word and c.tag in VERB_TAGS), None)
        modal = next((c for c in vp.children if c.is_word and c.tag == "MD"), None)
        entry = self.store.verb_for(verb.token) if verb is not None else None
        passive = (
            verb is not None
            and verb.tag == "VBN"
            and vp.parent is not None
            and vp.parent.kind is Kind.VP
            and any(c.is_word and c.token in BE_FORMS for c in vp.parent.children)
        )
        agent_pp = None
        if passive:
            cands = [c for c in vp.children_of(Kind.PP) if preposition(c) in AGENT_PREPS]
            cands.sort(key=lambda c: AGENT_PREPS.index(preposition(c)))
            agent_pp = next((c for c in cands if self.meaning(c).codes()), cands[0] if cands else None)
        return VerbFrame(verb, entry, modal, passive, self.subject_of(vp), agent_pp)

    def get_upper(self, vp: ParseNode) -> list[str]:
        """Codes of the subject above ``vp``; empty if it has none."""
        subj = self.subject_of(vp)
        if subj is None:
            return []
        return self.meaning(subj).codes()

    def get_lower(self, vp: ParseNode, exclude: Optional[ParseNode] = None) -> tuple[Meaning, Optional[str]]:
        """Meaning of a VP's complements, and where it came from.

        The second value is ``"vp"`` for a helping-verb chain, ``"clause"``
        for an embedded clause, ``"phrase"`` for NP/PP objects and None when
        nothing was found.
        """
        negated = any(c.is_word and c.token in NEGATORS for c in vp.children)
        vp_kids = [c for c in vp.children if c.kind is Kind.VP and is_valid(c)]
        if vp_kids:
            merged = self._merge(self.meaning(c) for c in vp_kids)
            merged.negated = negated
            if negated:
                self.note(vp, "negated")
            return merged, "vp"

        clauses = vp.children_of(Kind.S)
        events = [e for c in clauses for e in self.meaning(c).events]
        if events:
            return Meaning(events=events), "clause"

        groups = (
            [c for c in vp.children if c.kind is Kind.NP or (c.kind is Kind.VP and not is_valid(c))],
            [c for c in vp.children_of(Kind.PP) if c is not exclude],
            clauses,
        )
        for group in groups:
            actors: list[str] = []
            agents: list[str] = []
            for child in group:
                m = self.meaning(child)
                actors.extend(m.actors)
                agents.extend(m.agents)
                if m and child.kind is Kind.PP:
                    self.note(vp, f"object from {preposition(child)}-phrase: {' '.join(m.codes())}")
            if actors or agents:
                return Meaning(actors=_unique(actors), agents=_unique(agents)), "phrase"
        return Meaning(), None

    @staticmethod
    def _merge(meanings: Iterable[Meaning]) -> Meaning:
        ms = list(meanings)
        events = [e for m in ms for e in m.events]
        if events:
            return Meaning(events=events)
        return Meaning(
            actors=_unique(a for m in ms for a in m.actors),
            agents=_unique(a for m in ms for a in m.agents),
        )

    # pattern matching

    def _np_head(self, node: ParseNode) -> Optional[ParseNode]:
        if node.is_word:
            return node
        if node.kind is Kind.NP:
            return find_head(node)
        nps = node.children_of(Kind.NP)
        return find_head(nps[-1]) if nps else None

    def _noun_fits(self, spec: NounSpec, node: ParseNode) -> bool:
        head = self._np_head(node)
        if head is None or not self.store.noun_matches(spec.head, head.token):
            return False
        if not spec.extra:
            return True
        before = []
        for w in node.words():
            if w is head:
                break
            before.append(w.token)
        i = 0
        for tok in before:
            if i < len(spec.extra) and self.store.noun_matches(spec.extra[i], tok):
                i += 1
        return i == len(spec.extra)

    def _prep_fits(self, spec: PrepSpec, pp: ParseNode) -> bool:
        prep = preposition(pp)
        if prep is None or not self.store.noun_matches(spec.prep, prep):
            return False
        if spec.noun is None:
            return True
        return any(self._noun_fits(spec.noun, c) for c in pp.children if c.kind is Kind.NP)

    @staticmethod
    def _assign(specs, cands, fits) -> bool:
        j = 0
        for spec in specs:
            while j < len(cands) and not fits(spec, cands[j]):
                j += 1
            if j == len(cands):
                return False
            j += 1
        return True

    def _pattern_slots(self, vp: ParseNode, frame: VerbFrame) -> dict[str, list[ParseNode]]:
        top = top_of_chain(vp)
        clause = top.parent if top.parent is not None and top.parent.kind is Kind.S else None
        pre_pps = [c for c in clause.children[: top.index] if c.kind is Kind.PP] if clause else []
        subject = [frame.subject] if frame.subject is not None else []
        objects = [c for c in vp.children if c.kind is Kind.NP or (c.kind is Kind.VP and not is_valid(c))]
        particles = [c for c in vp.children if c.is_word and c.tag == "RP"]
        for prt in vp.children:
            if prt.tag == "PRT":
                particles.extend(w for w in prt.words() if w.tag == "RP")
        if frame.passive:
            agent_nps = [
                np
                for pp in vp.children_of(Kind.PP)
                if preposition(pp) in AGENT_PREPS
                for np in pp.children_of(Kind.NP)
            ]
            pre_nouns, post_nouns = agent_nps, subject
        else:
            pre_nouns, post_nouns = subject, particles + objects
        return {
            "pre-nouns": pre_nouns,
            "pre-preps": pre_pps,
            "post-nouns": post_nouns,
            "post-preps": vp.children_of(Kind.PP),
        }

    def match_pattern(self, pattern: VerbPattern, slots: dict[str, list[ParseNode]]) -> Optional[str]:
        """None if ``pattern`` matches, else the name of the first failing part."""
        checks = (
            ("pre-nouns", pattern.pre_nouns, self._noun_fits),
            ("pre-preps", pattern.pre_preps, self._prep_fits),
            ("post-nouns", pattern.post_nouns, self._noun_fits),
            ("post-preps", pattern.post_preps, self._prep_fits),
        )
        for name, specs, fits in checks:
            if specs and not self._assign(specs, slots[name], fits):
                return name
        return None

    def get_code(self, vp: ParseNode, frame: Optional[VerbFrame] = None) -> Optional[PatternMatch]:
        """Verb code of ``vp`` from its most specific matching pattern, else its base code."""
        frame = frame or self.frame(vp)
        entry = frame.entry
        if entry is None:
            return None
        self.note(vp, f"verb {frame.verb.token} ({entry.lemma}), voice={'passive' if frame.passive else 'active'}")
        slots = self._pattern_slots(vp, frame)
        best = None
        best_key = None
        for order, pattern in enumerate(entry.patterns):
            failed = self.match_pattern(pattern, slots)
            if failed is not None:
                self.note(vp, f"pattern {pattern} failed at {failed}")
                continue
            self.note(vp, f"pattern {pattern} matched")
            key = (pattern.parts, pattern.size, -order)
            if best_key is None or key > best_key:
                best, best_key = pattern, key
        if best is not None:
            return PatternMatch(best.code, entry, best)
        if entry.base_code is not None:
            self.note(vp, f"base code {codes.format_code(entry.base_code)}")
            return PatternMatch(entry.base_code, entry, None)
        return None

    # transformations

    def _bind_actor(self, term, actor: str, bindings: dict) -> bool:
        if isinstance(term, Wildcard):
            return True
        if isinstance(term, Var):
            if actor == PLACEHOLDER:
                return False
            if term.name in bindings:
                return bindings[term.name] == actor
            bindings[term.name] = actor
            return True
        return False

    def _bind_event(self, term, event: Event, bindings: dict) -> bool:
        if isinstance(term, Wildcard):
            return True
        if not isinstance(term, Triple):
            return False
        return (
            self.store.symbol_matches(term.verb, event.verbs, event.code)
            and self._bind_actor(term.source, event.source, bindings)
            and self._bind_actor(term.target, event.target, bindings)
        )

    def match_transform(
        self,
        source: str,
        verb: Optional[str],
        code: Optional[int],
        inner: Event,
        rules: Optional[Sequence[TransformRule]] = None,
    ) -> Optional[Event]:
        """Rewrite ``source (inner) verb`` with the first rule that unifies."""
        outer_verbs = (verb,) if verb else ()
        for rule in self.store.transforms if rules is None else rules:
            pat = rule.pattern
            if not self.store.symbol_matches(pat.verb, outer_verbs, code):
                continue
            bindings: dict[str, str] = {}
            if self._bind_actor(pat.source, source, bindings) and self._bind_event(pat.target, inner, bindings):
                return Event(
                    bindings[rule.result_source],
                    bindings[rule.result_target],
                    rule.code,
                    outer_verbs,
                    transformed=True,
                    origin=inner.origin,
                )
        return None

    # the verb phrase itself

    def vp_meaning(self, vp: ParseNode) -> Meaning:
        if not is_valid(vp):
            self.note(vp, "participle in noun position; read as a noun phrase")
            return self.np_meaning(vp)
        frame = self.frame(vp)
        match = self.get_code(vp, frame)
        lower, via = self.get_lower(vp, exclude=frame.agent_pp)
        subject_codes = self.get_upper(vp)

        if frame.passive:
            sources = self.meaning(frame.agent_pp).codes() if frame.agent_pp is not None else []
            targets = subject_codes or lower.codes()
            if match is not None:
                if frame.agent_pp is not None:
                    self.note(vp, f"source from {preposition(frame.agent_pp)}-phrase: {' '.join(sources) or '-'}")
                else:
                    self.note(vp, "passive without agent phrase; no source")
        else:
            sources = subject_codes
            targets = lower.codes()

        if match is None:
            events = list(lower.events)
            if via == "clause" and sources:
                events = [
                    replace(e, source=sources[0]) if e.source == PLACEHOLDER else e for e in events
                ]
            if frame.modal is not None:
                events = [replace(e, verbs=(frame.modal.token,) + e.verbs) for e in events]
            if lower.negated:
                events = [self._negated(e) for e in events]
            if events:
                return Meaning(events=events)
            return Meaning(actors=list(lower.actors), agents=list(lower.agents))

        code = match.code
        lemma = frame.lemma
        here = (lemma,)
        out: list[Event] = []
        if lower.events:
            for src in sources or [PLACEHOLDER]:
                for inner in lower.events:
                    moved = self.match_transform(src, lemma, code, inner)
                    if moved is not None:
                        self.note(vp, f"transformation {self._rule_text(src, lemma, code, inner)}: {inner} -> {moved}")
                        out.append(moved)
                        continue
                    try:
                        combined = codes.combine(code, inner.code)
                    except codes.CollisionError:
                        self.note(vp, f"cannot combine {codes.format_code(code)} with {inner}")
                        out.append(inner)
                        out.append(Event(src, PLACEHOLDER, code, here, origin=vp.position))
                        continue
                    self.note(vp, f"combined {codes.format_code(code)} + {inner} -> {codes.format_code(combined)}")
                    out.append(Event(src, inner.target, combined, here + inner.verbs, origin=vp.position))
        else:
            for src in sources or [PLACEHOLDER]:
                for tgt in targets or [PLACEHOLDER]:
                    out.append(Event(src, tgt, code, here, origin=vp.position))
        if lower.negated:
            out = [self._negated(e) for e in out]
        self.note(vp, "events " + " ".join(str(e) for e in out))
        return Meaning(events=out)

    def _rule_text(self, src, lemma, code, inner) -> str:
        for rule in self.store.transforms:
            if self.match_transform(src, lemma, code, inner, rules=[rule]) is not None:
                return repr(rule.source_text)
        return "?"

    @staticmethod
    def _negated(event: Event) -> Event:
        if event.code is None:
            return event
        return replace(event, code=codes.combine(codes.NEGATION, event.code))


def analyze(store: DictionaryStore, tree: ParseTree, trace: Optional[list[str]] = None) -> Analyzer:
    return Analyzer(store, tree, trace)
