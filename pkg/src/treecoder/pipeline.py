"""Sentence-level coding: from a parse tree to finished CAMEO event triples."""

from __future__ import annotations

import datetime as dt
import enum
import json
from dataclasses import dataclass, field
from typing import Optional, Union

from . import codes
from .dictionaries import DictionaryStore
from .semantics import PLACEHOLDER, Analyzer, Event, is_valid
from .tree import Kind, ParseNode, ParseTree, TreeSyntaxError, parse_sexpr


class Status(str, enum.Enum):
    CODED = "Coded"
    NO_EVENTS = "NoEvents"
    DISCARDED = "Discarded"
    PARSE_ERROR = "ParseError"


@dataclass
class CodedSentence:
    sentence_id: str
    date: Optional[dt.date]
    status: Status
    events: list[tuple[str, str, str]] = field(default_factory=list)
    error: Optional[str] = None

    def to_dict(self) -> dict:
        out = {
            "id": self.sentence_id,
            "date": format_date(self.date),
            "status": self.status.value,
            "events": [{"source": s, "target": t, "code": c} for s, t, c in self.events],
        }
        if self.error:
            out["error"] = self.error
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


def format_date(date: Optional[dt.date]) -> Optional[str]:
    return date.strftime("%Y%m%d") if date is not None else None


def parse_date(text: Union[str, int, None]) -> Optional[dt.date]:
    if text is None or text == "":
        return None
    return dt.datetime.strptime(str(text), "%Y%m%d").date()


def top_verb_phrases(node: ParseNode) -> list[ParseNode]:
    """The uppermost verb phrase of each top-level clause under ``node``."""
    if node.kind is Kind.VP:
        return [node]
    if node.kind is not Kind.S:
        return []
    for child in node.children:
        if child.kind is Kind.VP and is_valid(child):
            return [child]
    out = []
    for child in node.children:
        if child.kind is Kind.S:
            out.extend(top_verb_phrases(child))
    return out


def get_events(
    tree: ParseTree,
    store: DictionaryStore,
    trace: Optional[list[str]] = None,
    require_source: bool = True,
    require_target: bool = True,
) -> CodedSentence:
    """Code one sentence.

    Only events with every required part bound survive; internal codes are
    converted back to CAMEO and repeated triples are dropped.
    """
    if store.is_discard(tree):
        if trace is not None:
            trace.append("discard phrase found; sentence skipped")
        return CodedSentence(tree.sentence_id, tree.date, Status.DISCARDED)

    analyzer = Analyzer(store, tree, trace)
    found: list[Event] = []
    for vp in top_verb_phrases(tree.root):
        found.extend(analyzer.meaning(vp).events)

    triples: list[tuple[str, str, str]] = []
    for event in found:
        if event.code is None:
            continue
        if require_source and event.source == PLACEHOLDER:
            continue
        if require_target and event.target == PLACEHOLDER:
            continue
        if event.source == event.target and not event.transformed:
            analyzer.note(None, f"self-event {event} dropped")
            continue
        try:
            cameo = store.code_map.to_cameo(event.code)
        except codes.Unmappable:
            analyzer.note(None, f"event {event} has no CAMEO equivalent; dropped")
            continue
        triple = (event.source, event.target, cameo)
        if triple not in triples:
            triples.append(triple)

    status = Status.CODED if triples else Status.NO_EVENTS
    if trace is not None:
        trace.append("result " + (" | ".join(" ".join(t) for t in triples) or status.value))
    return CodedSentence(tree.sentence_id, tree.date, status, triples)


def read_record(line: str, lineno: int, default_date: Optional[dt.date] = None):
    """``(id, date, parse_text)`` from a JSON record or a bare bracketing.

    Raises ValueError (with the best id known so far attached as
    ``err.sentence_id``) on malformed records.
    """
    text = line.strip()
    sid = str(lineno)
    if text.startswith("{"):
        try:
            record = json.loads(text)
        except json.JSONDecodeError as err:
            exc = ValueError(f"bad JSON: {err.msg}")
            exc.sentence_id = sid
            raise exc from None
        sid = str(record.get("id", sid))
        try:
            if not isinstance(record.get("parse"), str):
                raise ValueError("record has no 'parse' string")
            date = parse_date(record.get("date")) or default_date
        except ValueError as err:
            err.sentence_id = sid
            raise
        return sid, date, record["parse"]
    return sid, default_date, text


def code_line(
    line: str,
    lineno: int,
    store: DictionaryStore,
    default_date: Optional[dt.date] = None,
    trace: Optional[list[str]] = None,
    require_source: bool = True,
    require_target: bool = True,
) -> CodedSentence:
    """Code one input line; malformed input becomes a ParseError record."""
    try:
        sid, date, parse_text = read_record(line, lineno, default_date)
    except ValueError as err:
        return CodedSentence(getattr(err, "sentence_id", str(lineno)), default_date, Status.PARSE_ERROR, error=str(err))
    try:
        tree = parse_sexpr(parse_text, sid, date)
    except TreeSyntaxError as err:
        return CodedSentence(sid, date, Status.PARSE_ERROR, error=str(err))
    return get_events(tree, store, trace, require_source, require_target)
