"""Rule-based pronoun substitution.

Tracks the most recent entity mention while scanning left to right and
rewrites each third-person pronoun within two sentences of that mention.
A capitalized token run counts as an entity mention when it has at least
two tokens, or when it is a single non-stopword token opening a sentence;
lone capitalized tokens mid-sentence (usually objects of prepositions,
"in Ulm") never take over as antecedent.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model import Span
from .lexicon import Lexicon, default_lexicon
from .tokenize import Token, tokenize_sentences

# Pronouns stay eligible for this many sentences after their antecedent.
ANTECEDENT_WINDOW_SENTENCES = 2


@dataclass(frozen=True)
class Substitution:
    pronoun_span: Span  # in the original text
    antecedent: str
    out_span: Span  # in the transformed text


def resolve_coreferences(
    text: str,
    lexicon: Lexicon | None = None,
) -> tuple[str, list[Substitution]]:
    """Replace third-person pronouns with their most recent entity mention.

    Pronouns without an antecedent in range are left unchanged. Only the
    recorded substitution spans differ between input and output text.
    """
    lexicon = lexicon or default_lexicon()
    pending: list[tuple[Span, str]] = []
    antecedent: tuple[str, int] | None = None  # (surface, sentence index)

    for s_idx, tokens in enumerate(tokenize_sentences(text)):
        i = 0
        while i < len(tokens):
            tok = tokens[i]
            lowered = tok.core.lower()
            if lowered in lexicon.pronouns:
                if antecedent is not None and s_idx - antecedent[1] <= ANTECEDENT_WINDOW_SENTENCES:
                    pending.append((Span(tok.start, tok.end), antecedent[0]))
                i += 1
                continue
            if _capitalized(tok):
                run = [tok]
                j = i + 1
                while (
                    j < len(tokens)
                    and _capitalized(tokens[j])
                    and tokens[j].core.lower() not in lexicon.pronouns
                ):
                    run.append(tokens[j])
                    j += 1
                if len(run) >= 2 or (i == 0 and run[0].core.lower() not in lexicon.stopwords):
                    antecedent = (text[run[0].start : run[-1].end], s_idx)
                i = j
                continue
            i += 1

    return _apply(text, pending)


def _capitalized(tok: Token) -> bool:
    return tok.core[0].isupper()


def _apply(text: str, pending: list[tuple[Span, str]]) -> tuple[str, list[Substitution]]:
    pieces = []
    substitutions = []
    pos = 0
    out_len = 0
    for span, antecedent in pending:
        gap = text[pos : span.start]
        pieces.append(gap)
        out_len += len(gap)
        pieces.append(antecedent)
        substitutions.append(
            Substitution(
                pronoun_span=span,
                antecedent=antecedent,
                out_span=Span(out_len, out_len + len(antecedent)),
            )
        )
        out_len += len(antecedent)
        pos = span.end
    pieces.append(text[pos:])
    return "".join(pieces), substitutions
