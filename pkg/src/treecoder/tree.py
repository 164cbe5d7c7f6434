"""Penn Treebank bracketings as linked phrase trees.

    >>> tree = parse_sexpr("(S (NP (NN PROTESTERS)) (VP (VBD DESTROYED)))")
    >>> tree.root.kind
    <Kind.S: 'S'>
    >>> find_head(tree.root.children[1]).token
    'DESTROYED'
"""

from __future__ import annotations

import datetime as dt
import enum
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional


class Kind(enum.Enum):
    S = "S"
    NP = "NP"
    VP = "VP"
    PP = "PP"
    WORD = "Word"
    OTHER = "Other"


# Penn Treebank II part-of-speech tags, punctuation included.
POS_TAGS = frozenset(
    "CC CD DT EX FW IN JJ JJR JJS LS MD NN NNS NNP NNPS PDT POS PRP PRP$ RB "
    "RBR RBS RP SYM TO UH VB VBD VBG VBN VBP VBZ WDT WP WP$ WRB "
    ". , : `` '' # $ -LRB- -RRB- -LCB- -RCB- -NONE- HYPH NFP ADD AFX".split()
)
CLAUSE_LABELS = frozenset({"S", "SBAR", "SINV", "SQ", "SBARQ"})

_FUNCTION_TAG = re.compile(r"[-=]")


def bare_label(label: str) -> str:
    """Drop function tags and indices: ``NP-SBJ-1`` -> ``NP``."""
    if label.startswith("-") or label in POS_TAGS:
        return label
    return _FUNCTION_TAG.split(label, 1)[0] or label


def kind_of(label: str) -> Kind:
    bare = bare_label(label)
    if bare in POS_TAGS:
        return Kind.WORD
    if bare in CLAUSE_LABELS:
        return Kind.S
    if bare.startswith("NP"):
        return Kind.NP
    if bare.startswith("VP"):
        return Kind.VP
    if bare.startswith("PP"):
        return Kind.PP
    return Kind.OTHER


class TreeSyntaxError(ValueError):
    pass


class UnbalancedParens(TreeSyntaxError):
    def __init__(self, position: int, message: str = "unbalanced parentheses"):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class EmptyTree(TreeSyntaxError):
    pass


class MultipleRoots(TreeSyntaxError):
    pass


@dataclass(eq=False)
class ParseNode:
    label: str
    kind: Kind
    token: Optional[str] = None
    children: list[ParseNode] = field(default_factory=list)
    parent: Optional[ParseNode] = field(default=None, repr=False)
    index: int = 0
    position: int = 0  # preorder number within the tree

    @property
    def tag(self) -> str:
        return bare_label(self.label)

    @property
    def is_word(self) -> bool:
        return self.kind is Kind.WORD

    def words(self) -> Iterator[ParseNode]:
        if self.is_word:
            yield self
            return
        for child in self.children:
            yield from child.words()

    def tokens(self) -> list[str]:
        return [w.token for w in self.words()]

    def text(self) -> str:
        return " ".join(self.tokens())

    def ancestors(self) -> Iterator[ParseNode]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def left_siblings(self) -> list[ParseNode]:
        """Siblings before this node, closest first."""
        if self.parent is None:
            return []
        return self.parent.children[: self.index][::-1]

    def children_of(self, kind: Kind) -> list[ParseNode]:
        return [c for c in self.children if c.kind is kind]

    def to_sexpr(self) -> str:
        if self.is_word:
            return f"({self.label} {self.token})"
        return "(" + self.label + " " + " ".join(c.to_sexpr() for c in self.children) + ")"

    def __str__(self) -> str:
        return f"{self.tag}[{self.text()}]"


@dataclass(eq=False)
class ParseTree:
    root: ParseNode
    nodes: list[ParseNode]
    sentence_id: str = ""
    date: Optional[dt.date] = None

    def tokens(self) -> list[str]:
        return self.root.tokens()

    def to_sexpr(self) -> str:
        return self.root.to_sexpr()


_LEX = re.compile(r"\(|\)|[^()\s]+")


def _lex(text: str):
    for m in _LEX.finditer(text):
        yield m.group(), m.start()


def parse_sexpr(
    text: str, sentence_id: str = "", date: Optional[dt.date] = None
) -> ParseTree:
    """Read one bracketed parse.

    A CoreNLP-style ``(ROOT ...)`` wrapper or an unlabelled outer pair of
    brackets is removed.  Tokens are uppercased.

    Raises:
        UnbalancedParens, EmptyTree, MultipleRoots
    """
    # each frame: [label, children, open offset]
    stack: list[list] = []
    roots: list = []
    expect_label = False
    for tok, pos in _lex(text):
        if tok == "(":
            stack.append([None, [], pos])
            expect_label = True
        elif tok == ")":
            if not stack:
                raise UnbalancedParens(pos, "unexpected ')'")
            label, kids, start = stack.pop()
            item = (label or "", kids, start)
            if stack:
                stack[-1][1].append(item)
            else:
                roots.append(item)
            expect_label = False
        else:
            if not stack:
                raise TreeSyntaxError(f"token {tok!r} outside brackets at offset {pos}")
            if expect_label:
                stack[-1][0] = tok
                expect_label = False
            else:
                stack[-1][1].append(tok)
    if stack:
        raise UnbalancedParens(stack[-1][2], "unclosed '('")
    if not roots:
        raise EmptyTree("no bracketed tree in input")
    if len(roots) > 1:
        raise MultipleRoots(f"{len(roots)} top-level trees in input")

    item = roots[0]
    while (item[0] in ("", "ROOT", "TOP")) and len(item[1]) == 1 and isinstance(item[1][0], tuple):
        item = item[1][0]

    nodes: list[ParseNode] = []

    def build(item, parent, index) -> ParseNode:
        label, kids, start = item
        if not label:
            raise TreeSyntaxError(f"unlabelled constituent at offset {start}")
        if not kids:
            raise EmptyTree(f"constituent {label} at offset {start} has no children")
        if len(kids) == 1 and isinstance(kids[0], str):
            node = ParseNode(label, Kind.WORD, token=kids[0].upper(), parent=parent, index=index)
            node.position = len(nodes)
            nodes.append(node)
            return node
        if any(isinstance(k, str) for k in kids):
            raise TreeSyntaxError(f"constituent {label} at offset {start} mixes words and phrases")
        kind = kind_of(label)
        if kind is Kind.WORD:
            # POS label over phrases: keep the structure, treat as a container
            kind = Kind.OTHER
        node = ParseNode(label, kind, parent=parent, index=index)
        node.position = len(nodes)
        nodes.append(node)
        node.children = [build(k, node, i) for i, k in enumerate(kids)]
        return node

    root = build(item, None, 0)
    return ParseTree(root=root, nodes=nodes, sentence_id=sentence_id, date=date)


def _head_class(kind: Kind):
    if kind is Kind.NP:
        return lambda tag: tag.startswith("N")
    if kind is Kind.VP:
        return lambda tag: tag.startswith("V")
    if kind is Kind.PP:
        return lambda tag: tag in ("IN", "TO")
    return None


def find_head(node: ParseNode) -> Optional[ParseNode]:
    """Head word of an NP, VP or PP.

    Follows children of the same phrase kind, or words of the matching class
    (N* under NP, V* under VP, IN/TO under PP), taking the rightmost option at
    each branch and backing off leftwards when a branch dead-ends.
    """
    if node.is_word:
        return node
    accepts = _head_class(node.kind)
    if accepts is None:
        return None

    def walk(n: ParseNode) -> Optional[ParseNode]:
        for child in reversed(n.children):
            if child.is_word:
                if accepts(child.tag):
                    return child
            elif child.kind is node.kind:
                found = walk(child)
                if found is not None:
                    return found
        return None

    return walk(node)


def get_s(node: ParseNode) -> Optional[ParseNode]:
    """Nearest clause node at or above ``node``."""
    while node is not None and node.kind is not Kind.S:
        node = node.parent
    return node


def top_of_chain(vp: ParseNode) -> ParseNode:
    """Highest VP reachable from ``vp`` through VP parents."""
    while vp.parent is not None and vp.parent.kind is Kind.VP:
        vp = vp.parent
    return vp


def np_specifier(vp: ParseNode) -> Optional[ParseNode]:
    """The subject NP of the clause whose verb chain contains ``vp``.

    That is the closest NP sibling preceding the top of the VP chain, when
    that chain hangs directly off a clause node.
    """
    top = top_of_chain(vp)
    if top.parent is None or top.parent.kind is not Kind.S:
        return None
    for sib in top.left_siblings():
        if sib.kind is Kind.NP:
            return sib
    return None
