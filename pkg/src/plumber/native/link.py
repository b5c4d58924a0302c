"""Alias-dictionary entity and relation linker.

Candidate generation is exact match on normalized labels/aliases, falling
back to character-trigram Jaccard above a threshold. Candidates score
0.7 * similarity + 0.3 * prior; ties resolve to the lexicographically
smaller IRI so linking is a total deterministic function.
"""

from __future__ import annotations

from ..model import KGRef, LinkedTerm, Mention, char_trigrams, jaccard, normalize_surface
from .snapshot import KGSnapshot, SnapshotStore

SIMILARITY_THRESHOLD = 0.5
SIMILARITY_WEIGHT = 0.7
PRIOR_WEIGHT = 0.3

_VERB_SUFFIXES = ("ing", "ed", "s")  # longest first
_MIN_STEM = 3


def verb_stem(normalized: str) -> str:
    """Strip one inflection suffix when the remaining stem is long enough."""
    for suffix in _VERB_SUFFIXES:
        if normalized.endswith(suffix) and len(normalized) - len(suffix) >= _MIN_STEM:
            return normalized[: -len(suffix)]
    return normalized


def link_terms(
    mentions: list[Mention],
    role: str,
    snapshot: KGSnapshot,
    store: SnapshotStore | None = None,
    threshold: float = SIMILARITY_THRESHOLD,
) -> list[LinkedTerm]:
    """Link each mention against the snapshot's entities or predicates.

    role is "entity" or "predicate"; predicate mentions are verb-stemmed
    before matching. Mentions without a candidate at or above the
    threshold come back unlinked with confidence 0.
    """
    if store is None:
        store = SnapshotStore()
        store.add(snapshot)
    candidates = store.candidates(snapshot.kg, role)

    linked = []
    for mention in mentions:
        query = normalize_surface(mention.surface)
        if role == "predicate":
            query = verb_stem(query)
        query_grams = char_trigrams(query)

        best_iri = None
        best_score = -1.0
        for record, forms, grams in candidates:
            if query and query in forms:
                similarity = 1.0
            else:
                similarity = max((jaccard(query_grams, g) for g in grams), default=0.0)
                if similarity < threshold:
                    continue
            score = SIMILARITY_WEIGHT * similarity + PRIOR_WEIGHT * record.prior
            if score > best_score or (score == best_score and record.iri < best_iri):
                best_iri = record.iri
                best_score = score

        if best_iri is None:
            linked.append(LinkedTerm.unlinked(mention))
        else:
            linked.append(
                LinkedTerm(
                    mention=mention,
                    ref=KGRef(iri=best_iri, kg=snapshot.kg),
                    confidence=min(1.0, max(0.0, best_score)),
                )
            )
    return linked
