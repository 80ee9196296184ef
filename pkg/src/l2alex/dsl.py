"""Presentation DSL: ``< a, b | a b a = b a b >``.

Letters are whitespace separated; ``^n`` raises to a (possibly negative)
power and a trailing ``'`` inverts.  A relator is either a single word or
``w1 = w2`` (stored as ``w1 w2⁻¹``).  When every generator name is a single
character, juxtaposed letters (``aba``) are accepted too.
"""
from __future__ import annotations

import re
from typing import Sequence

from .errors import ParseError
from .groups import Presentation, Word, reduce_free

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)(?P<inv>'?)(?:\^(?P<exp>[+-]?\d+))?|(?P<one>1))")


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def parse_word(text: str, names: Sequence[str], *, source: str | None = None, offset: int = 0) -> Word:
    """Parse a word over ``names``; ``e`` or ``1`` denote the identity."""
    src = source if source is not None else text
    index = {n: i for i, n in enumerate(names)}
    single = all(len(n) == 1 for n in names)
    syllables: list[tuple[int, int]] = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m or m.end() == pos:
            line, col = _position(src, offset + pos + (len(stripped[pos:]) - len(stripped[pos:].lstrip())))
            raise ParseError(f"unexpected character {stripped[pos:].lstrip()[:1]!r}", line, col)
        ident = m.group("ident") or m.group("one")
        if ident not in index and ident in ("1", "e"):
            pos = m.end()
            continue
        exp = int(m.group("exp")) if m.group("exp") else 1
        if m.group("inv"):
            exp = -exp
        start = m.start("ident") if m.group("ident") else m.start("one")
        if ident in index:
            letters = [ident]
        elif single and all(ch in index for ch in ident):
            letters = list(ident)
        else:
            line, col = _position(src, offset + start)
            raise ParseError(f"unknown generator {ident!r}", line, col)
        # exponent and inverse bind to the last letter of a juxtaposed run
        for ch in letters[:-1]:
            syllables.append((index[ch], 1))
        syllables.append((index[letters[-1]], exp))
        pos = m.end()
    return reduce_free(Word(tuple((g, e) for g, e in syllables if e)))


def parse_presentation(text: str, kind: str = "Generic") -> Presentation:
    src = text
    lt = text.find("<")
    gt = text.rfind(">")
    if lt < 0:
        raise ParseError("expected '<'", *_position(src, 0))
    if gt < lt:
        raise ParseError("expected '>'", *_position(src, len(text)))
    if text[:lt].strip():
        raise ParseError("unexpected text before '<'", *_position(src, 0))
    if text[gt + 1:].strip():
        raise ParseError("unexpected text after '>'", *_position(src, gt + 1))
    body_start = lt + 1
    body = text[body_start:gt]
    bar = body.find("|")
    gens_part = body if bar < 0 else body[:bar]
    rels_part = "" if bar < 0 else body[bar + 1:]

    names: list[str] = []
    off = body_start
    for chunk in gens_part.split(","):
        name = chunk.strip()
        if not name and len(gens_part.split(",")) == 1:
            break
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise ParseError(f"bad generator name {name!r}", *_position(src, off + len(chunk) - len(chunk.lstrip())))
        if name in names:
            raise ParseError(f"duplicate generator {name!r}", *_position(src, off))
        names.append(name)
        off += len(chunk) + 1

    relators: list[Word] = []
    if bar >= 0:
        off = body_start + bar + 1
        for chunk in rels_part.split(","):
            if not chunk.strip():
                if len(rels_part.split(",")) == 1:
                    break
                raise ParseError("empty relator", *_position(src, off))
            sides = chunk.split("=")
            if len(sides) > 2:
                lead = len(chunk) - len(chunk.lstrip())
                raise ParseError("more than one '=' in relator", *_position(src, off + lead))
            words = []
            sub_off = off
            for side in sides:
                words.append(parse_word(side, names, source=src, offset=sub_off))
                sub_off += len(side) + 1
            rel = words[0] if len(words) == 1 else words[0] * words[1].inverse()
            relators.append(reduce_free(rel))
            off += len(chunk) + 1
    return Presentation.build(names, relators, kind)


def format_presentation(p: Presentation) -> str:
    return p.format()
