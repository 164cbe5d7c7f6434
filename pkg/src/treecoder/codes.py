"""Internal event-code algebra.

Verb codes are held internally as signed integers whose non-negative values
are read as four hexadecimal digit positions (act class, reduce/yield,
action class, specifier).  Two verbs combine by adding codes whose nonzero
digits do not overlap, e.g. intend (0x3000) + aid (0x0040) = 0x3040.

Refusals live below zero: the refusal of a cooperative code ``c`` is stored
as ``c - 0xFFFF``.  Because no positive code equals 0xFFFF the result is
always negative, and "not" can be applied as ``combine(negate(0), c)``.

CAMEO strings are only used at the edges; :class:`CodeMap` converts in both
directions using a tab-separated table shipped with the package.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

REFUSAL = 0xFFFF
REFUSAL_PREFIX = "12"
MAX_CODE = 0x10000


class CodeError(ValueError):
    pass


class UnknownCameo(CodeError):
    pass


class Unmappable(CodeError):
    pass


class CollisionError(CodeError):
    pass


class AlreadyNegated(CodeError):
    pass


def _check(code: int) -> None:
    if not isinstance(code, int) or isinstance(code, bool):
        raise TypeError(f"internal code must be int, got {type(code).__name__}")
    if not -REFUSAL <= code < MAX_CODE:
        raise CodeError(f"internal code out of range: {code}")


def digit_mask(code: int) -> int:
    """Bit i set iff hex digit i of the non-negative ``code`` is nonzero."""
    return sum(1 << i for i in range(4) if (code >> (4 * i)) & 0xF)


def positive_part(code: int) -> int:
    """Strip the refusal embedding, if any."""
    _check(code)
    return code + REFUSAL if code < 0 else code


def negate(code: int) -> int:
    _check(code)
    if code < 0:
        raise AlreadyNegated(f"code {format_code(code)} is already a refusal")
    return code - REFUSAL


NEGATION = -REFUSAL  # negate(0): the bare "not"


def combine(a: int, b: int) -> int:
    """Add two codes digit-wise.

    Refusals are unwrapped before adding and re-wrapped afterwards when
    exactly one operand was a refusal; two refusals cancel.

    Raises:
        CollisionError: both codes occupy the same digit position.
    """
    pa, pb = positive_part(a), positive_part(b)
    if digit_mask(pa) & digit_mask(pb):
        raise CollisionError(
            f"{format_code(a)} and {format_code(b)} share a digit position"
        )
    total = pa + pb
    if (a < 0) != (b < 0):
        total -= REFUSAL
    return total


def format_code(code: int) -> str:
    return f"-0x{-code:04X}" if code < 0 else f"0x{code:04X}"


def _ancestors(code: int):
    """``code`` followed by the values obtained by zeroing d0, then d1, then d2."""
    yield code
    for digit in range(3):
        reduced = code & ~((0x10 ** (digit + 1)) - 1)
        if reduced != code:
            yield reduced
            code = reduced


@dataclass(frozen=True)
class CodeMap:
    """Bijective CAMEO <-> internal table."""

    to_code: dict[str, int]
    from_code: dict[int, str] = field(repr=False)

    @classmethod
    def from_pairs(cls, pairs) -> CodeMap:
        to_code: dict[str, int] = {}
        from_code: dict[int, str] = {}
        for cameo, value in pairs:
            if cameo in to_code:
                raise CodeError(f"duplicate CAMEO code {cameo}")
            if not 0 <= value < MAX_CODE:
                raise CodeError(f"{cameo}: hex value out of range")
            if cameo.startswith(REFUSAL_PREFIX):
                value -= REFUSAL
            if value in from_code:
                raise CodeError(
                    f"{cameo}: internal value {format_code(value)} already "
                    f"used by {from_code[value]}"
                )
            to_code[cameo] = value
            from_code[value] = cameo
        return cls(to_code, from_code)

    @classmethod
    def load(cls, path: str | Path) -> CodeMap:
        pairs = []
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 2 or len(parts[1]) != 4:
                    raise CodeError(f"{path}:{lineno}: expected 'CAMEO<TAB>HEX4'")
                try:
                    value = int(parts[1], 16)
                except ValueError:
                    raise CodeError(f"{path}:{lineno}: bad hex {parts[1]!r}") from None
                pairs.append((parts[0], value))
        return cls.from_pairs(pairs)

    def __contains__(self, cameo: str) -> bool:
        return cameo in self.to_code

    def __len__(self) -> int:
        return len(self.to_code)

    def to_internal(self, cameo: str) -> int:
        try:
            return self.to_code[cameo.strip()]
        except KeyError:
            raise UnknownCameo(cameo) from None

    def to_cameo(self, code: int) -> str:
        """CAMEO string for ``code``, falling back to the nearest mapped ancestor.

        Refusals that have no listed complement map to the bare reject
        class (120).
        """
        _check(code)
        if code < 0:
            for anc in _ancestors(code + REFUSAL):
                hit = self.from_code.get(anc - REFUSAL)
                if hit is not None:
                    return hit
            return self.from_code.get(NEGATION, REFUSAL_PREFIX + "0")
        for anc in _ancestors(code):
            hit = self.from_code.get(anc)
            if hit is not None:
                return hit
        raise Unmappable(format_code(code))


def default_map_path() -> Path:
    return Path(str(resources.files("treecoder") / "data" / "cameo_map.tsv"))


@functools.lru_cache(maxsize=None)
def default_map() -> CodeMap:
    return CodeMap.load(default_map_path())


def to_internal(cameo: str) -> int:
    return default_map().to_internal(cameo)


def to_cameo(code: int) -> str:
    return default_map().to_cameo(code)
