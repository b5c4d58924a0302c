"""Shared data model: documents, mentions, triples, KG references.

All types here are immutable values, safe to share between threads. Text
offsets are character (Unicode scalar) offsets, never bytes, so the same
spans are valid on any wire representation of the text.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from urllib.parse import urlsplit

from .errors import DocumentTooLarge, InvalidValue

DEFAULT_MAX_TEXT_CHARS = 100_000


class DocumentSource(Enum):
    INLINE = "inline"
    FILE = "file"


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    source: DocumentSource = DocumentSource.INLINE

    def __post_init__(self):
        if not self.id:
            raise InvalidValue("document id must be non-empty")
        if len(self.text) > DEFAULT_MAX_TEXT_CHARS:
            raise DocumentTooLarge(
                f"document {self.id!r} has {len(self.text)} characters, "
                f"maximum is {DEFAULT_MAX_TEXT_CHARS}"
            )


@dataclass(frozen=True, order=True)
class Span:
    """Character span, start inclusive, end exclusive."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.start >= self.end:
            raise InvalidValue(f"invalid span [{self.start}, {self.end})")

    def check_within(self, text: str) -> None:
        if self.end > len(text):
            raise InvalidValue(
                f"span [{self.start}, {self.end}) exceeds text length {len(text)}"
            )


@dataclass(frozen=True)
class Mention:
    """A surface string tied to its span in the owning text."""

    surface: str
    span: Span

    @staticmethod
    def at(text: str, start: int, end: int) -> "Mention":
        span = Span(start, end)
        span.check_within(text)
        return Mention(surface=text[start:end], span=span)


@dataclass(frozen=True)
class TextTriple:
    subject: Mention
    predicate: Mention
    object: Mention

    def __post_init__(self):
        for role in ("subject", "predicate", "object"):
            if not normalize_surface(getattr(self, role).surface):
                raise InvalidValue(f"triple {role} is empty after normalization")


@dataclass(frozen=True)
class KGRef:
    iri: str
    kg: str

    def __post_init__(self):
        if not urlsplit(self.iri).scheme:
            raise InvalidValue(f"IRI {self.iri!r} is not absolute (no scheme)")


@dataclass(frozen=True)
class LinkedTerm:
    mention: Mention
    ref: KGRef | None
    confidence: float

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise InvalidValue(f"confidence {self.confidence} outside [0, 1]")
        if self.ref is None and self.confidence != 0.0:
            raise InvalidValue("unlinked term must have confidence 0")

    @staticmethod
    def unlinked(mention: Mention) -> "LinkedTerm":
        return LinkedTerm(mention=mention, ref=None, confidence=0.0)


@dataclass(frozen=True)
class AlignedTriple:
    subject: LinkedTerm
    predicate: LinkedTerm
    object: LinkedTerm


def normalize_surface(s: str) -> str:
    """Lowercase, drop everything but letters/digits/whitespace, collapse spaces.

    Idempotent and locale-free; alias dictionaries and dedup keys are built
    on this form.
    """
    kept = []
    for ch in s.lower():
        if ch.isspace():
            kept.append(" ")
        elif ch.isalpha() or ch.isdigit():
            kept.append(ch)
    return " ".join("".join(kept).split())


def char_trigrams(s: str) -> Counter:
    """Multiset of 3-character substrings of '#'+s+'#'.

    The '#' padding gives 1- and 2-character strings discriminating features.
    Expects an already-normalized string.
    """
    if not s:
        return Counter()
    padded = f"#{s}#"
    return Counter(padded[i : i + 3] for i in range(len(padded) - 2))


def jaccard(a: Counter, b: Counter) -> float:
    """Multiset Jaccard similarity; 1.0 when both sides are empty."""
    if not a and not b:
        return 1.0
    inter = sum((a & b).values())
    union = sum((a | b).values())
    return inter / union
