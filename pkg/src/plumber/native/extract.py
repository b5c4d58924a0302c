"""Verb-lexicon triple extractor.

Emits one candidate triple per lexicon-verb occurrence, O(tokens) per
sentence. The predicate is the verb plus an immediately following closed
-list preposition ("born in"); the subject is the nearest content run to
the verb's left, the object the nearest content run to its right, where a
content run is a maximal stretch of tokens that are neither stopwords nor
lexicon verbs.
"""

from __future__ import annotations

from ..errors import InvalidValue
from ..model import Mention, TextTriple
from .lexicon import Lexicon, default_lexicon
from .tokenize import Token, tokenize_sentences


def extract_triples(text: str, lexicon: Lexicon | None = None) -> list[TextTriple]:
    lexicon = lexicon or default_lexicon()
    triples = []
    for tokens in tokenize_sentences(text):
        for v_idx, tok in enumerate(tokens):
            if tok.core.lower() not in lexicon.verbs:
                continue
            pred_last = v_idx
            if (
                v_idx + 1 < len(tokens)
                and tokens[v_idx + 1].core.lower() in lexicon.prepositions
            ):
                pred_last = v_idx + 1
            subject = _run_left(tokens, v_idx, lexicon)
            obj = _run_right(tokens, pred_last, lexicon)
            if subject is None or obj is None:
                continue
            try:
                triples.append(
                    TextTriple(
                        subject=_mention(text, subject),
                        predicate=_mention(text, (tokens[v_idx], tokens[pred_last])),
                        object=_mention(text, obj),
                    )
                )
            except InvalidValue:
                continue  # degenerate surface, e.g. all-symbol run
    return triples


def _is_stop(tok: Token, lexicon: Lexicon) -> bool:
    return tok.core.lower() in lexicon.stopwords


def _is_verb(tok: Token, lexicon: Lexicon) -> bool:
    return tok.core.lower() in lexicon.verbs


def _is_content(tok: Token, lexicon: Lexicon) -> bool:
    return not _is_stop(tok, lexicon) and not _is_verb(tok, lexicon)


def _run_left(tokens, v_idx, lexicon) -> tuple[Token, Token] | None:
    """Nearest content run left of the verb.

    Auxiliary verbs that double as stopwords ("was born") are skipped like
    any stopword; a content-bearing lexicon verb blocks the scan instead.
    """
    k = v_idx - 1
    while k >= 0:
        tok = tokens[k]
        if _is_stop(tok, lexicon):
            k -= 1
            continue
        if _is_verb(tok, lexicon):
            return None
        first = k
        while first - 1 >= 0 and _is_content(tokens[first - 1], lexicon):
            first -= 1
        return tokens[first], tokens[k]
    return None


def _run_right(tokens, pred_last, lexicon) -> tuple[Token, Token] | None:
    """Nearest content run right of the predicate, cut off at the next
    lexicon verb or sentence end."""
    k = pred_last + 1
    while k < len(tokens):
        tok = tokens[k]
        if _is_verb(tok, lexicon):
            return None
        if _is_stop(tok, lexicon):
            k += 1
            continue
        last = k
        while last + 1 < len(tokens) and _is_content(tokens[last + 1], lexicon):
            last += 1
        return tokens[k], tokens[last]
    return None


def _mention(text: str, run: tuple[Token, Token]) -> Mention:
    first, last = run
    return Mention.at(text, first.start, last.end)
