"""Word-list configuration for the baseline components.

Verb and stopword lists are plain text files (one token per line, '#'
comments) so deployments can tune extraction without code changes. The
pronoun and preposition lists are closed by design and live in code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

# Third-person pronouns only: first/second person have no textual antecedent.
PRONOUNS = frozenset(
    "he she it they him her them his hers its their theirs".split()
)

# Prepositions that may attach to a verb to form the predicate surface.
PREDICATE_PREPOSITIONS = frozenset("in of by on at for with".split())


def load_word_list(path: str | Path) -> frozenset[str]:
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        token = line.strip()
        if token and not token.startswith("#"):
            words.add(token.lower())
    return frozenset(words)


def _resource_words(name: str) -> frozenset[str]:
    text = resources.files("plumber.resources").joinpath(name).read_text(encoding="utf-8")
    return frozenset(
        line.strip().lower()
        for line in text.splitlines()
        if line.strip() and not line.strip().startswith("#")
    )


@dataclass(frozen=True)
class Lexicon:
    stopwords: frozenset[str] = field(default_factory=lambda: _resource_words("stopwords.txt"))
    verbs: frozenset[str] = field(default_factory=lambda: _resource_words("verbs.txt"))
    pronouns: frozenset[str] = PRONOUNS
    prepositions: frozenset[str] = PREDICATE_PREPOSITIONS


_default: Lexicon | None = None


def default_lexicon() -> Lexicon:
    global _default
    if _default is None:
        _default = Lexicon()
    return _default
