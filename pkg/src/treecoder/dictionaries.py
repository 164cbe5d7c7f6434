"""Actor, agent, verb and discard dictionaries.

File formats (UTF-8, case-insensitive, ``#`` starts a comment):

actors
    ``PHRASE ; CODE`` gives an undated code.  ``PHRASE ; CODE START END``
    gives a code valid between two YYYYMMDD dates, ``-`` for an open end.
    A line starting with ``;`` adds another (dated or default) code to the
    entry above it.

agents
    ``PHRASE ; CODE``

verbs
    ``&NAME`` opens a synset whose members follow as ``+TOKEN`` lines.
    ``--- LEMMA [CODE] ---`` opens a verb; ``[CODE]`` may be omitted or
    written ``[---]``.  Inside a verb block, ``+FORM`` lists inflections,
    ``- PATTERN [CODE]`` adds a pattern and ``~ RULE`` a transformation.

discard
    one phrase per line.
"""

from __future__ import annotations

import datetime as dt
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from . import codes
from .codes import CodeMap
from .tree import ParseTree

DETERMINERS = frozenset({"THE", "A", "AN"})
MODALS = frozenset(
    {"WILL", "WOULD", "SHALL", "SHOULD", "CAN", "COULD", "MAY", "MIGHT", "MUST", "WO", "CA"}
)


class DictionaryError(Exception):
    def __init__(self, reason: str, file: Optional[str] = None, line: Optional[int] = None):
        where = ""
        if file is not None:
            where = f"{file}:{line}: " if line is not None else f"{file}: "
        super().__init__(where + reason)
        self.reason = reason
        self.file = file
        self.line = line


class DictionarySyntaxError(DictionaryError):
    pass


class DuplicateEntry(DictionaryError):
    pass


class NoVerbMarker(DictionarySyntaxError):
    pass


class NestedBraces(DictionarySyntaxError):
    pass


class BadCode(DictionarySyntaxError):
    pass


class MalformedPostfix(DictionarySyntaxError):
    pass


class UnboundVariable(DictionarySyntaxError):
    pass


# ---------------------------------------------------------------- tries

_END = ""  # tokens are never empty


class PhraseTrie:
    """Token trie keeping the first value stored for each phrase."""

    def __init__(self):
        self._root: dict = {}
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def insert(self, phrase: Sequence[str], value) -> bool:
        node = self._root
        for tok in phrase:
            node = node.setdefault(tok, {})
        if _END in node:
            return False
        node[_END] = value
        self._size += 1
        return True

    def get(self, phrase: Sequence[str]):
        node = self._root
        for tok in phrase:
            node = node.get(tok)
            if node is None:
                return None
        return node.get(_END)

    def longest_prefix(self, tokens: Sequence[str], start: int = 0):
        """``(end, value)`` of the longest phrase starting at ``start``, or None."""
        node = self._root
        best = None
        for i in range(start, len(tokens)):
            node = node.get(tokens[i])
            if node is None:
                break
            if _END in node:
                best = (i + 1, node[_END])
        return best

    def scan(self, tokens: Sequence[str]):
        """Leftmost-longest, non-overlapping matches as ``(start, end, value)``."""
        out = []
        i = 0
        while i < len(tokens):
            hit = self.longest_prefix(tokens, i)
            if hit is None:
                i += 1
            else:
                out.append((i, hit[0], hit[1]))
                i = hit[0]
        return out


# ---------------------------------------------------------------- entries


@dataclass(frozen=True)
class DatedCode:
    code: str
    start: Optional[dt.date] = None
    end: Optional[dt.date] = None

    def covers(self, date: dt.date) -> bool:
        return (self.start is None or self.start <= date) and (self.end is None or date <= self.end)


@dataclass(frozen=True)
class ActorEntry:
    phrase: tuple[str, ...]
    codes: tuple[DatedCode, ...] = ()
    default_code: Optional[str] = None

    def code_for(self, date: Optional[dt.date]) -> Optional[str]:
        if date is not None:
            for span in self.codes:
                if span.covers(date):
                    return span.code
        return self.default_code


@dataclass(frozen=True)
class AgentEntry:
    phrase: tuple[str, ...]
    code: str


@dataclass(frozen=True)
class NounSpec:
    head: str
    extra: tuple[str, ...] = ()

    def text(self) -> str:
        if not self.extra:
            return self.head
        return "{" + " ".join(self.extra + (self.head,)) + "}"

    @property
    def size(self) -> int:
        return 1 + len(self.extra)


@dataclass(frozen=True)
class PrepSpec:
    prep: str
    noun: Optional[NounSpec] = None

    def text(self) -> str:
        if self.noun is None:
            return f"({self.prep})"
        return f"({self.prep} {self.noun.text()})"

    @property
    def size(self) -> int:
        return 1 + (self.noun.size if self.noun else 0)


@dataclass(frozen=True)
class VerbPattern:
    pre_nouns: tuple[NounSpec, ...] = ()
    pre_preps: tuple[PrepSpec, ...] = ()
    post_nouns: tuple[NounSpec, ...] = ()
    post_preps: tuple[PrepSpec, ...] = ()
    code: int = 0
    source_text: str = field(default="", compare=False)

    @property
    def parts(self) -> int:
        return sum(1 for p in (self.pre_nouns, self.pre_preps, self.post_nouns, self.post_preps) if p)

    @property
    def size(self) -> int:
        return sum(s.size for p in (self.pre_nouns, self.pre_preps, self.post_nouns, self.post_preps) for s in p)

    def serialize(self, code_map: Optional[CodeMap] = None) -> str:
        cmap = code_map or codes.default_map()
        left = [s.text() for s in self.pre_nouns] + [s.text() for s in self.pre_preps]
        right = [s.text() for s in self.post_nouns] + [s.text() for s in self.post_preps]
        return " ".join(left + ["*"] + right + [f"[{cmap.to_cameo(self.code)}]"])

    def __str__(self) -> str:
        return self.source_text or self.serialize()


@dataclass
class VerbEntry:
    lemma: str
    forms: set[str] = field(default_factory=set)
    base_code: Optional[int] = None
    patterns: list[VerbPattern] = field(default_factory=list)


# transformation terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Wildcard:
    def __str__(self) -> str:
        return "."


@dataclass(frozen=True)
class Triple:
    source: "Term"
    target: "Term"
    verb: tuple[str, ...]  # symbol parts; WILL_ATTACK -> ("WILL", "ATTACK")

    def __str__(self) -> str:
        return f"({self.source} {self.target} {'_'.join(self.verb)})"

    def variables(self) -> set[str]:
        out = set()
        for t in (self.source, self.target):
            if isinstance(t, Var):
                out.add(t.name)
            elif isinstance(t, Triple):
                out |= t.variables()
        return out


Term = Union[Var, Wildcard, Triple]


@dataclass(frozen=True)
class TransformRule:
    pattern: Triple
    result_source: str
    result_target: str
    code: int
    source_text: str = field(default="", compare=False)

    def __str__(self) -> str:
        return self.source_text


# ---------------------------------------------------------------- compilers

_PATTERN_LEX = re.compile(r"[{}()*]|[^\s{}()*]+")
_BRACKET_CODE = re.compile(r"\[([^\]]*)\]")


def _parse_code(text: str, code_map: CodeMap) -> int:
    text = text.strip()
    try:
        return code_map.to_internal(text)
    except codes.UnknownCameo:
        raise BadCode(f"unknown code {text!r}") from None


def compile_pattern(line: str, code_map: Optional[CodeMap] = None) -> VerbPattern:
    """Compile ``protesters * {nuclear weapon} (against israel) [145]``.

    Raises:
        NoVerbMarker, NestedBraces, BadCode, DictionarySyntaxError
    """
    cmap = code_map or codes.default_map()
    source = line.strip()
    body = source.split("#", 1)[0]
    found = _BRACKET_CODE.findall(body)
    if len(found) != 1:
        raise BadCode("pattern needs exactly one [CODE]")
    code = _parse_code(found[0], cmap)
    body = _BRACKET_CODE.sub(" ", body)

    sides: list[list] = [[], []]
    side = 0
    seen_star = False
    toks = [t.upper() for t in _PATTERN_LEX.findall(body)]
    i = 0

    def read_braces(i: int) -> tuple[NounSpec, int]:
        words = []
        i += 1
        while i < len(toks) and toks[i] != "}":
            if toks[i] == "{":
                raise NestedBraces(f"nested braces in {source!r}")
            if toks[i] in "()*":
                raise DictionarySyntaxError(f"unexpected {toks[i]!r} inside braces in {source!r}")
            words.append(toks[i])
            i += 1
        if i == len(toks):
            raise DictionarySyntaxError(f"unclosed brace in {source!r}")
        if not words:
            raise DictionarySyntaxError(f"empty braces in {source!r}")
        return NounSpec(words[-1], tuple(words[:-1])), i + 1

    while i < len(toks):
        tok = toks[i]
        if tok == "*":
            if seen_star:
                raise DictionarySyntaxError(f"more than one verb marker in {source!r}")
            seen_star = True
            side = 1
            i += 1
        elif tok == "{":
            spec, i = read_braces(i)
            sides[side].append(spec)
        elif tok == "(":
            i += 1
            if i >= len(toks) or toks[i] in "(){}*":
                raise DictionarySyntaxError(f"preposition group without preposition in {source!r}")
            prep = toks[i]
            i += 1
            words: list[str] = []
            noun = None
            while i < len(toks) and toks[i] != ")":
                if toks[i] == "{":
                    if noun is not None or words:
                        raise DictionarySyntaxError(f"two nouns in one preposition group in {source!r}")
                    noun, i = read_braces(i)
                    continue
                if toks[i] in "(*}":
                    raise DictionarySyntaxError(f"unexpected {toks[i]!r} in {source!r}")
                if noun is not None:
                    raise DictionarySyntaxError(f"two nouns in one preposition group in {source!r}")
                words.append(toks[i])
                i += 1
            if i == len(toks):
                raise DictionarySyntaxError(f"unclosed parenthesis in {source!r}")
            if words:
                noun = NounSpec(words[-1], tuple(words[:-1]))
            sides[side].append(PrepSpec(prep, noun))
            i += 1
        elif tok in ")}":
            raise DictionarySyntaxError(f"unbalanced {tok!r} in {source!r}")
        else:
            sides[side].append(NounSpec(tok))
            i += 1

    if not seen_star:
        raise NoVerbMarker(f"no '*' verb marker in {source!r}")

    def split(items):
        return (
            tuple(x for x in items if isinstance(x, NounSpec)),
            tuple(x for x in items if isinstance(x, PrepSpec)),
        )

    pre_n, pre_p = split(sides[0])
    post_n, post_p = split(sides[1])
    pattern = VerbPattern(pre_n, pre_p, post_n, post_p, code, source)
    if pattern.parts == 0:
        raise DictionarySyntaxError(f"pattern {source!r} has nothing besides the verb")
    return pattern


_TERM_LEX = re.compile(r"\(|\)|[^\s()]+")
_VAR = re.compile(r"^[a-z][a-z0-9]*$")


def _term_from(item, source: str) -> Term:
    if isinstance(item, list):
        return _triple_from(item, source)
    if item == ".":
        return Wildcard()
    if _VAR.match(item):
        return Var(item)
    raise MalformedPostfix(f"{item!r} is not a variable, '.' or a bracketed event in {source!r}")


def _triple_from(items: list, source: str) -> Triple:
    if len(items) != 3:
        raise MalformedPostfix(f"expected (source target VERB), got {len(items)} items in {source!r}")
    verb = items[2]
    if isinstance(verb, list) or verb == "." or _VAR.match(verb):
        raise MalformedPostfix(f"verb slot must be a symbol in {source!r}")
    parts = tuple(p for p in verb.upper().lstrip("&").split("_") if p)
    if not parts:
        raise MalformedPostfix(f"empty verb symbol in {source!r}")
    return Triple(_term_from(items[0], source), _term_from(items[1], source), parts)


def parse_transformation(line: str, code_map: Optional[CodeMap] = None) -> TransformRule:
    """Parse ``a (b . ATTACK) SAY = a b 112``.

    Lowercase tokens are variables, ``.`` matches anything, and the last
    element of each (bracketed or top-level) triple is the verb symbol.

    Raises:
        MalformedPostfix, UnboundVariable, BadCode
    """
    cmap = code_map or codes.default_map()
    source = line.split("#", 1)[0].strip()
    if source.count("=") != 1:
        raise MalformedPostfix(f"expected exactly one '=' in {source!r}")
    lhs, rhs = source.split("=")

    stack: list[list] = [[]]
    for tok in _TERM_LEX.findall(lhs):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise MalformedPostfix(f"unbalanced ')' in {source!r}")
            inner = stack.pop()
            stack[-1].append(inner)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise MalformedPostfix(f"unbalanced '(' in {source!r}")
    top = stack[0]
    if len(top) == 1 and isinstance(top[0], list):
        top = top[0]
    pattern = _triple_from(top, source)

    out = rhs.split()
    if len(out) != 3:
        raise MalformedPostfix(f"result must be 'source target CODE' in {source!r}")
    bound = pattern.variables()
    for name in out[:2]:
        if not _VAR.match(name):
            raise MalformedPostfix(f"result actor {name!r} must be a variable in {source!r}")
        if name not in bound:
            raise UnboundVariable(f"variable {name!r} is not bound by the pattern in {source!r}")
    code = _parse_code(out[2], cmap)
    return TransformRule(pattern, out[0], out[1], code, source)


# ---------------------------------------------------------------- store


@dataclass
class DictionaryStore:
    code_map: CodeMap
    actors: PhraseTrie = field(default_factory=PhraseTrie)
    agents: PhraseTrie = field(default_factory=PhraseTrie)
    discards: PhraseTrie = field(default_factory=PhraseTrie)
    verbs: dict[str, VerbEntry] = field(default_factory=dict)
    forms: dict[str, VerbEntry] = field(default_factory=dict)
    synsets: dict[str, frozenset[str]] = field(default_factory=dict)
    transforms: list[TransformRule] = field(default_factory=list)

    # actor and agent lookups

    def resolve_actor(self, tokens: Sequence[str], date: Optional[dt.date] = None) -> Optional[str]:
        """Longest actor phrase at the start of ``tokens``, determiners skipped."""
        toks = [t for t in tokens if t not in DETERMINERS]
        hit = self.actors.longest_prefix(toks)
        if hit is None:
            return None
        return hit[1].code_for(date)

    def match_agent(self, tokens: Sequence[str]) -> Optional[str]:
        toks = [t for t in tokens if t not in DETERMINERS]
        found = self.agents.scan(toks)
        return found[0][2].code if found else None

    def scan_actors(self, tokens: Sequence[str], date: Optional[dt.date] = None):
        """``(start, end, code)`` for every actor phrase in ``tokens``."""
        out = []
        for start, end, entry in self.actors.scan(tokens):
            code = entry.code_for(date)
            if code is not None:
                out.append((start, end, code, entry))
        return out

    def scan_agents(self, tokens: Sequence[str]):
        return [(s, e, entry.code, entry) for s, e, entry in self.agents.scan(tokens)]

    # verbs

    def verb_for(self, token: str) -> Optional[VerbEntry]:
        return self.forms.get(token)

    def in_synset(self, name: str, token: str) -> bool:
        members = self.synsets.get(name.lstrip("&"))
        return members is not None and token in members

    def noun_matches(self, spec_token: str, token: str) -> bool:
        if spec_token.startswith("&"):
            return self.in_synset(spec_token, token)
        return spec_token == token

    def symbol_known(self, part: str) -> bool:
        return (
            part in self.synsets
            or part in self.verbs
            or part in MODALS
            or part in self.code_map
        )

    def part_matches(self, part: str, element: str) -> bool:
        """Does one verb-symbol part match one verb of an event's chain?"""
        if part == element:
            return True
        if part in self.synsets and element in self.synsets[part]:
            return True
        entry = self.verbs.get(part)
        return entry is not None and element in entry.forms

    def symbol_matches(self, parts: Sequence[str], verbs: Sequence[str], code: Optional[int]) -> bool:
        if len(parts) == 1 and parts[0] in self.code_map and parts[0] not in self.verbs:
            if code is None:
                return False
            try:
                return self.code_map.to_cameo(code).startswith(parts[0])
            except codes.Unmappable:
                return False
        if len(parts) != len(verbs):
            return False
        return all(self.part_matches(p, v) for p, v in zip(parts, verbs))

    # discard

    def is_discard(self, tree: Union[ParseTree, Sequence[str]]) -> bool:
        tokens = tree.tokens() if isinstance(tree, ParseTree) else list(tree)
        return bool(self.discards.scan(tokens))


# ---------------------------------------------------------------- loaders


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def _parse_date(text: str, file, lineno) -> Optional[dt.date]:
    if text == "-":
        return None
    try:
        return dt.datetime.strptime(text, "%Y%m%d").date()
    except ValueError:
        raise DictionarySyntaxError(f"bad date {text!r}", file, lineno) from None


def _phrase(text: str) -> tuple[str, ...]:
    return tuple(text.upper().replace("_", " ").split())


def read_actors(path) -> list[tuple[int, ActorEntry]]:
    file = str(path)
    blocks: list[list] = []  # [lineno, phrase, default, spans]
    for lineno, line in _lines(path):
        if line.startswith(";"):
            if not blocks:
                raise DictionarySyntaxError("continuation line before any actor", file, lineno)
            spec = line[1:]
            block = blocks[-1]
        else:
            if ";" not in line:
                raise DictionarySyntaxError("expected 'PHRASE ; CODE'", file, lineno)
            phrase_text, spec = line.split(";", 1)
            phrase = _phrase(phrase_text)
            if not phrase:
                raise DictionarySyntaxError("empty actor phrase", file, lineno)
            block = [lineno, phrase, None, []]
            blocks.append(block)
        fields = spec.split()
        if len(fields) == 1:
            if block[2] is not None and block[2] != fields[0].upper():
                raise DictionarySyntaxError("two undated codes for one actor", file, lineno)
            block[2] = fields[0].upper()
        elif len(fields) == 3:
            start = _parse_date(fields[1], file, lineno)
            end = _parse_date(fields[2], file, lineno)
            if start and end and start > end:
                raise DictionarySyntaxError("date span ends before it starts", file, lineno)
            span = DatedCode(fields[0].upper(), start, end)
            for other in block[3]:
                if _overlap(span, other):
                    raise DictionarySyntaxError(
                        f"date span for {span.code} overlaps {other.code}", file, lineno
                    )
            block[3].append(span)
        else:
            raise DictionarySyntaxError("expected 'CODE' or 'CODE START END'", file, lineno)
    return [(b[0], ActorEntry(b[1], tuple(b[3]), b[2])) for b in blocks]


def _overlap(a: DatedCode, b: DatedCode) -> bool:
    lo = max(a.start or dt.date.min, b.start or dt.date.min)
    hi = min(a.end or dt.date.max, b.end or dt.date.max)
    return lo <= hi


def read_agents(path) -> list[tuple[int, AgentEntry]]:
    out = []
    for lineno, line in _lines(path):
        if ";" not in line:
            raise DictionarySyntaxError("expected 'PHRASE ; CODE'", str(path), lineno)
        phrase_text, code = (s.strip() for s in line.split(";", 1))
        phrase = _phrase(phrase_text)
        if not phrase or not code or len(code.split()) != 1:
            raise DictionarySyntaxError("expected 'PHRASE ; CODE'", str(path), lineno)
        out.append((lineno, AgentEntry(phrase, code.upper())))
    return out


def read_discards(path) -> list[tuple[int, tuple[str, ...]]]:
    return [(lineno, _phrase(line)) for lineno, line in _lines(path)]


_VERB_HEADER = re.compile(r"^---\s*([^\s\[\]]+)\s*(?:\[([^\]]*)\])?\s*---$")


def read_verbs(path, store: DictionaryStore) -> None:
    file = str(path)
    cmap = store.code_map
    current_verb: Optional[VerbEntry] = None
    current_synset: Optional[tuple[str, set]] = None
    synset_sets: dict[str, set] = {}
    with open(path, encoding="utf-8") as fh:
        numbered = list(enumerate(fh, 1))
    for lineno, raw in numbered:
        # comments are stripped by the pattern/rule compilers themselves
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = _VERB_HEADER.match(line.split("#", 1)[0].strip())
        if head:
            lemma = head.group(1).upper()
            if lemma in store.verbs:
                raise DuplicateEntry(f"verb {lemma} defined twice", file, lineno)
            code_text = (head.group(2) or "").strip()
            base = None
            if code_text and code_text != "---":
                try:
                    base = _parse_code(code_text, cmap)
                except BadCode as err:
                    raise BadCode(err.reason, file, lineno) from None
            current_verb = VerbEntry(lemma, {lemma}, base)
            current_synset = None
            store.verbs[lemma] = current_verb
            _add_form(store, current_verb, lemma, file, lineno)
        elif line.startswith("&"):
            name = line.split("#", 1)[0].strip()[1:].upper()
            if not name or len(name.split()) != 1:
                raise DictionarySyntaxError("bad synset header", file, lineno)
            if name in synset_sets:
                raise DuplicateEntry(f"synset {name} defined twice", file, lineno)
            current_synset = (name, set())
            synset_sets[name] = current_synset[1]
            current_verb = None
        elif line.startswith("+"):
            token = line.split("#", 1)[0][1:].strip().upper()
            if not token or len(token.split()) != 1:
                raise DictionarySyntaxError("'+' lines hold exactly one token", file, lineno)
            if current_synset is not None:
                current_synset[1].add(token)
            elif current_verb is not None:
                current_verb.forms.add(token)
                _add_form(store, current_verb, token, file, lineno)
            else:
                raise DictionarySyntaxError("'+' line outside a verb or synset block", file, lineno)
        elif line.startswith("-"):
            if current_verb is None:
                raise DictionarySyntaxError("pattern outside a verb block", file, lineno)
            try:
                current_verb.patterns.append(compile_pattern(line[1:], cmap))
            except DictionaryError as err:
                raise type(err)(err.reason, file, lineno) from None
        elif line.startswith("~"):
            if current_verb is None:
                raise DictionarySyntaxError("transformation outside a verb block", file, lineno)
            try:
                store.transforms.append(parse_transformation(line[1:], cmap))
            except DictionaryError as err:
                raise type(err)(err.reason, file, lineno) from None
        else:
            raise DictionarySyntaxError(f"unrecognised line {line!r}", file, lineno)
    store.synsets.update({k: frozenset(v) for k, v in synset_sets.items()})

    for entry in store.verbs.values():
        for pattern in entry.patterns:
            for spec in _noun_specs(pattern):
                for tok in (spec.head,) + spec.extra:
                    if tok.startswith("&") and tok[1:] not in store.synsets:
                        raise DictionarySyntaxError(
                            f"unknown synset {tok} in pattern {pattern.source_text!r}", file
                        )
    for rule in store.transforms:
        for parts in _rule_symbols(rule.pattern):
            for part in parts:
                if not store.symbol_known(part):
                    raise DictionarySyntaxError(
                        f"unknown verb symbol {part} in rule {rule.source_text!r}", file
                    )


def _add_form(store: DictionaryStore, entry: VerbEntry, form: str, file, lineno) -> None:
    owner = store.forms.get(form)
    if owner is not None and owner is not entry:
        raise DuplicateEntry(f"form {form} already belongs to verb {owner.lemma}", file, lineno)
    store.forms[form] = entry


def _noun_specs(pattern: VerbPattern) -> Iterable[NounSpec]:
    yield from pattern.pre_nouns
    yield from pattern.post_nouns
    for p in pattern.pre_preps + pattern.post_preps:
        if p.noun is not None:
            yield p.noun


def _rule_symbols(term) -> Iterable[tuple[str, ...]]:
    if isinstance(term, Triple):
        yield term.verb
        yield from _rule_symbols(term.source)
        yield from _rule_symbols(term.target)


def load_dictionaries(
    actors=None,
    agents=None,
    verbs=None,
    discard=None,
    code_map: Union[CodeMap, str, Path, None] = None,
) -> DictionaryStore:
    """Load whichever dictionary files are given into one store.

    Raises:
        DictionarySyntaxError: malformed line or invariant violation.
        DuplicateEntry: one phrase given conflicting codes.
    """
    if code_map is None:
        cmap = codes.default_map()
    elif isinstance(code_map, CodeMap):
        cmap = code_map
    else:
        try:
            cmap = CodeMap.load(code_map)
        except (OSError, codes.CodeError) as err:
            raise DictionaryError(str(err), str(code_map)) from None
    store = DictionaryStore(cmap)

    for path, reader in ((actors, "actors"), (agents, "agents"), (verbs, "verbs"), (discard, "discard")):
        if path is not None and not Path(path).is_file():
            raise DictionaryError(f"{reader} file not found", str(path))

    if actors is not None:
        for lineno, entry in read_actors(actors):
            if not store.actors.insert(entry.phrase, entry):
                prior = store.actors.get(entry.phrase)
                if (prior.codes, prior.default_code) != (entry.codes, entry.default_code):
                    raise DuplicateEntry(
                        f"actor {' '.join(entry.phrase)} has conflicting codes", str(actors), lineno
                    )
    if agents is not None:
        for lineno, entry in read_agents(agents):
            if not store.agents.insert(entry.phrase, entry):
                if store.agents.get(entry.phrase).code != entry.code:
                    raise DuplicateEntry(
                        f"agent {' '.join(entry.phrase)} has conflicting codes", str(agents), lineno
                    )
    if discard is not None:
        for lineno, phrase in read_discards(discard):
            store.discards.insert(phrase, phrase)
    if verbs is not None:
        read_verbs(verbs, store)
    return store
