"""Canonical tokenizer shared by the language model and the surface index.

Unicode-aware, case-preserving: word characters group into one token, every
other non-space character stands alone. The surface index matches at these
token boundaries, so both components must tokenize identically.

Spot and gold offsets are byte offsets into the document's UTF-8 form; the
helpers here convert between character and byte positions.
"""

from __future__ import annotations

import re
from typing import NamedTuple

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


class Token(NamedTuple):
    text: str
    start: int  # character offset
    end: int    # character offset, exclusive


def tokenize(text: str) -> list[Token]:
    """Tokens with character offsets, in document order."""
    return [Token(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def tokens_of(text: str) -> list[str]:
    """Token strings only, for counting."""
    return _TOKEN_RE.findall(text)


class ByteOffsetMap:
    """Converts character offsets of a str to byte offsets of its UTF-8 form."""

    __slots__ = ("_cum",)

    def __init__(self, text: str):
        if text.isascii():
            self._cum = None
        else:
            cum = [0] * (len(text) + 1)
            total = 0
            for i, ch in enumerate(text):
                total += len(ch.encode("utf-8"))
                cum[i + 1] = total
            self._cum = cum

    def to_bytes(self, char_offset: int) -> int:
        if self._cum is None:
            return char_offset
        return self._cum[char_offset]
