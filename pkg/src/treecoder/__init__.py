"""Rule-based political event coder over constituency parse trees."""

from .codes import CodeMap, combine, negate, to_cameo, to_internal
from .dictionaries import DictionaryStore, compile_pattern, load_dictionaries, parse_transformation
from .pipeline import CodedSentence, Status, get_events
from .semantics import Analyzer, Event, Meaning
from .tree import ParseNode, ParseTree, find_head, get_s, np_specifier, parse_sexpr

__version__ = "0.1.0"

__all__ = [
    "Analyzer",
    "CodeMap",
    "CodedSentence",
    "DictionaryStore",
    "Event",
    "Meaning",
    "ParseNode",
    "ParseTree",
    "Status",
    "combine",
    "compile_pattern",
    "find_head",
    "get_events",
    "get_s",
    "load_dictionaries",
    "negate",
    "np_specifier",
    "parse_sexpr",
    "parse_transformation",
    "to_cameo",
    "to_internal",
]
