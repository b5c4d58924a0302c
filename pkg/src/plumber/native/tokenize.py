"""Whitespace tokenizer and sentence splitter shared by the baselines.

Sentences end at '.', '?' or '!' followed by whitespace or end of text.
Tokens are whitespace-delimited; each token's "core" strips leading and
trailing non-alphanumeric characters, and tokens whose core is empty
(pure punctuation) are dropped. All offsets index the core, so a token's
span always satisfies text[start:end] == core.
"""

from __future__ import annotations

from dataclasses import dataclass

_SENTENCE_ENDERS = frozenset(".?!")


@dataclass(frozen=True)
class Token:
    core: str
    start: int
    end: int


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Return (start, end) spans of sentences; empty sentences are skipped."""
    spans = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _SENTENCE_ENDERS and (i + 1 >= n or text[i + 1].isspace()):
            if text[start : i + 1].strip():
                spans.append((start, i + 1))
            start = i + 1
        i += 1
    if text[start:].strip():
        spans.append((start, n))
    return spans


def tokenize(text: str, start: int = 0, end: int | None = None) -> list[Token]:
    """Tokens of text[start:end] with core spans in full-text coordinates."""
    if end is None:
        end = len(text)
    tokens = []
    i = start
    while i < end:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < end and not text[j].isspace():
            j += 1
        core_start, core_end = i, j
        while core_start < core_end and not text[core_start].isalnum():
            core_start += 1
        while core_end > core_start and not text[core_end - 1].isalnum():
            core_end -= 1
        if core_start < core_end:
            tokens.append(Token(text[core_start:core_end], core_start, core_end))
        i = j
    return tokens


def tokenize_sentences(text: str) -> list[list[Token]]:
    return [tokenize(text, s, e) for s, e in split_sentences(text)]
