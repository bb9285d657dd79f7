"""Emoji-aware tokenization of social-media post bodies.

Two modes are offered:

* ``PAPER_REGEX`` (the default everywhere): the exact ``\\w+|[^\\s]`` pattern,
  i.e. maximal runs of word characters, and every other non-whitespace scalar
  as its own single-character token. This deliberately splits ZWJ emoji
  families, skin tones, and flags into their component scalars - that is the
  behavior being reproduced, not fixed.
* ``GRAPHEME_EMOJI``: identical, except emoji extended grapheme clusters
  (ZWJ sequences, skin-tone modifiers, variation selectors, keycaps, flags,
  tag sequences) are kept together as single Emoji tokens.

Emoji classification is pinned to a vendored Extended_Pictographic table
(see ``_emoji_data``) rather than whatever Unicode tables the running
interpreter happens to ship, so results are stable across environments.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import List

from ._emoji_data import EXTENDED_PICTOGRAPHIC_RANGES, UNICODE_VERSION

__all__ = [
    "Token",
    "TokenKind",
    "TokenizerMode",
    "TokenSequence",
    "UNICODE_VERSION",
    "tokenize",
    "is_emoji",
    "extract_emojis",
    "strip_emojis",
    "tokenizer_metadata",
]


class TokenKind(Enum):
    WORD = "word"
    EMOJI = "emoji"
    SYMBOL = "symbol"


class TokenizerMode(Enum):
    PAPER_REGEX = "paper_regex"
    GRAPHEME_EMOJI = "grapheme_emoji"


@dataclass(frozen=True)
class Token:
    """One token: the exact input slice, its kind, and its UTF-8 byte span."""

    text: str
    kind: TokenKind
    byte_span: tuple[int, int]


TokenSequence = List[Token]

_PAPER_PATTERN = re.compile(r"\w+|[^\s]")
_WORD_RUN = re.compile(r"\w+")

_ZWJ = "\u200d"
_VS15 = "\ufe0e"
_VS16 = "\ufe0f"
_KEYCAP = "\u20e3"
_KEYCAP_BASES = set("0123456789#*")

_RI_LO, _RI_HI = 0x1F1E6, 0x1F1FF
_SKIN_LO, _SKIN_HI = 0x1F3FB, 0x1F3FF
_TAG_LO, _TAG_HI = 0xE0020, 0xE007F

# Flattened (starts, ends) arrays for bisection over the vendored ranges.
_EP_STARTS = tuple(r[0] for r in EXTENDED_PICTOGRAPHIC_RANGES)
_EP_ENDS = tuple(r[1] for r in EXTENDED_PICTOGRAPHIC_RANGES)


def _is_extended_pictographic(cp: int) -> bool:
    from bisect import bisect_right

    i = bisect_right(_EP_STARTS, cp) - 1
    return i >= 0 and cp <= _EP_ENDS[i]


def _is_regional_indicator(cp: int) -> bool:
    return _RI_LO <= cp <= _RI_HI


def is_emoji(cluster: str) -> bool:
    """Classify a single scalar or grapheme cluster as an emoji.

    True when the base scalar carries Extended_Pictographic, when the cluster
    is a Regional Indicator (a lone indicator or a flag pair), or when it is a
    keycap sequence. Classification is property-based: a text-presentation
    selector (VS15) does not disqualify a pictographic base. Plain letters and
    digits are never emojis.
    """
    if not cluster:
        return False
    cp = ord(cluster[0])
    if _is_extended_pictographic(cp) or _is_regional_indicator(cp):
        return True
    # Keycap: [0-9#*] + optional VS16 + U+20E3.
    if cluster[0] in _KEYCAP_BASES and len(cluster) > 1 and cluster[-1] == _KEYCAP:
        return True
    return False


def _match_emoji_cluster(text: str, i: int) -> int:
    """Length of the emoji grapheme cluster starting at ``text[i]``, or 0."""
    n = len(text)
    c = text[i]
    cp = ord(c)

    if _is_regional_indicator(cp):
        # Flag: regional indicator pair; a dangling single indicator stands alone.
        if i + 1 < n and _is_regional_indicator(ord(text[i + 1])):
            return 2
        return 1

    if c in _KEYCAP_BASES:
        j = i + 1
        if j < n and text[j] == _VS16:
            j += 1
        if j < n and text[j] == _KEYCAP:
            return j + 1 - i
        return 0

    if not _is_extended_pictographic(cp):
        return 0

    j = i + 1

    def _consume_extensions(j: int) -> int:
        if j < n and text[j] in (_VS15, _VS16):
            j += 1
        if j < n and _SKIN_LO <= ord(text[j]) <= _SKIN_HI:
            j += 1
        return j

    j = _consume_extensions(j)
    # Tag sequence (subdivision flags): base + tag scalars through the terminator.
    while j < n and _TAG_LO <= ord(text[j]) <= _TAG_HI:
        j += 1
    # ZWJ chain: each joined element is a pictographic scalar with extensions.
    while j < n and text[j] == _ZWJ and j + 1 < n and _is_extended_pictographic(ord(text[j + 1])):
        j = _consume_extensions(j + 2)
    return j - i


def tokenize(text: str, mode: TokenizerMode = TokenizerMode.PAPER_REGEX) -> TokenSequence:
    """Segment ``text`` into Word / Emoji / Symbol tokens.

    Concatenating token texts with the skipped whitespace reconstructs the
    input exactly; byte spans index UTF-8 offsets and never split a scalar.
    """
    tokens: TokenSequence = []
    byte_pos = 0
    char_pos = 0

    def _emit(start: int, end: int, kind: TokenKind) -> None:
        nonlocal byte_pos, char_pos
        if start > char_pos:
            byte_pos += len(text[char_pos:start].encode("utf-8"))
        piece = text[start:end]
        nbytes = len(piece.encode("utf-8"))
        tokens.append(Token(piece, kind, (byte_pos, byte_pos + nbytes)))
        byte_pos += nbytes
        char_pos = end

    if mode is TokenizerMode.PAPER_REGEX:
        for m in _PAPER_PATTERN.finditer(text):
            t = m.group()
            if _WORD_RUN.fullmatch(t[0]):
                kind = TokenKind.WORD
            elif is_emoji(t):
                kind = TokenKind.EMOJI
            else:
                kind = TokenKind.SYMBOL
            _emit(m.start(), m.end(), kind)
        return tokens

    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        clen = _match_emoji_cluster(text, i)
        if clen:
            _emit(i, i + clen, TokenKind.EMOJI)
            i += clen
            continue
        m = _WORD_RUN.match(text, i)
        if m:
            end = m.end()
            # A trailing digit may be the base of a keycap sequence whose
            # combining marks stopped the \w+ run; leave it for the next pass.
            if (
                end < n
                and text[end - 1] in _KEYCAP_BASES
                and (text[end] == _KEYCAP or (text[end] == _VS16 and end + 1 < n and text[end + 1] == _KEYCAP))
            ):
                end -= 1
            if end > i:
                _emit(i, end, TokenKind.WORD)
                i = end
                continue
        _emit(i, i + 1, TokenKind.SYMBOL)
        i += 1
    return tokens


def extract_emojis(text: str, mode: TokenizerMode = TokenizerMode.PAPER_REGEX) -> list[str]:
    """All Emoji token texts in order, duplicates preserved."""
    return [t.text for t in tokenize(text, mode) if t.kind is TokenKind.EMOJI]


def strip_emojis(text: str, mode: TokenizerMode = TokenizerMode.PAPER_REGEX) -> str:
    """Remove emoji tokens; collapse the whitespace runs this leaves behind.

    Each emoji span is replaced by a space (not spliced out) so surviving
    tokens never merge across a removed emoji. Text without any emoji token
    is returned unchanged.
    """
    toks = tokenize(text, mode)
    spans = [t.byte_span for t in toks if t.kind is TokenKind.EMOJI]
    if not spans:
        return text
    data = text.encode("utf-8")
    kept = bytearray()
    prev = 0
    for start, end in spans:
        kept += data[prev:start]
        kept += b" "
        prev = end
    kept += data[prev:]
    return re.sub(r"\s+", " ", kept.decode("utf-8")).strip()


def tokenizer_metadata() -> dict[str, str]:
    """Provenance for manifests: pinned emoji table and interpreter tables."""
    return {
        "emoji_table_unicode_version": UNICODE_VERSION,
        "word_chars": "python-re-unicode",
        "unicodedata_version": unicodedata.unidata_version,
    }
