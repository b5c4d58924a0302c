"""In-process execution of the native baseline components.

Native components speak the same payload/result contract as remote ones,
so the runner, cache, and traces treat both uniformly. All handlers are
pure given the loaded snapshots and lexicon.
"""

from __future__ import annotations

from ..errors import PlumberError
from ..model import LinkedTerm, TextTriple
from ..wire import InvocationPayload, linked_term_to_wire, triple_to_wire
from .coref import resolve_coreferences
from .extract import extract_triples
from .lexicon import Lexicon, default_lexicon
from .link import link_terms
from .snapshot import SnapshotStore


class UnknownBuiltin(PlumberError):
    code = "unknown_builtin"


class NativeRuntime:
    def __init__(self, snapshots: SnapshotStore, lexicon: Lexicon | None = None):
        self.snapshots = snapshots
        self.lexicon = lexicon or default_lexicon()
        self._handlers = {
            "coref-recency": self._coref_recency,
            "coref-identity": self._coref_identity,
            "verb-extractor": self._extract,
            "alias-entity-linker": self._link_entities,
            "alias-relation-linker": self._link_relations,
            "alias-joint-linker": self._link_joint,
        }

    def builtin_keys(self) -> list[str]:
        return sorted(self._handlers)

    def invoke(self, builtin_key: str, payload: InvocationPayload) -> dict:
        handler = self._handlers.get(builtin_key)
        if handler is None:
            raise UnknownBuiltin(f"no native component {builtin_key!r}")
        return handler(payload)

    def _coref_recency(self, payload: InvocationPayload) -> dict:
        text, substitutions = resolve_coreferences(payload.text, self.lexicon)
        return {
            "text": text,
            "substitutions": [
                {
                    "pronoun_start": s.pronoun_span.start,
                    "pronoun_end": s.pronoun_span.end,
                    "antecedent": s.antecedent,
                    "out_start": s.out_span.start,
                    "out_end": s.out_span.end,
                }
                for s in substitutions
            ],
        }

    def _coref_identity(self, payload: InvocationPayload) -> dict:
        return {"text": payload.text, "substitutions": []}

    def _extract(self, payload: InvocationPayload) -> dict:
        triples = extract_triples(payload.text, self.lexicon)
        return {"triples": [triple_to_wire(t) for t in triples]}

    def _link_entities(self, payload: InvocationPayload) -> dict:
        return self._align(payload, link_subjects_objects=True, link_predicates=False)

    def _link_relations(self, payload: InvocationPayload) -> dict:
        return self._align(payload, link_subjects_objects=False, link_predicates=True)

    def _link_joint(self, payload: InvocationPayload) -> dict:
        return self._align(payload, link_subjects_objects=True, link_predicates=True)

    def _align(
        self,
        payload: InvocationPayload,
        link_subjects_objects: bool,
        link_predicates: bool,
    ) -> dict:
        snapshot = self.snapshots.get(payload.kg)
        triples: tuple[TextTriple, ...] = payload.triples

        if link_subjects_objects:
            mentions = [t.subject for t in triples] + [t.object for t in triples]
            linked = link_terms(mentions, "entity", snapshot, self.snapshots)
            subjects = linked[: len(triples)]
            objects = linked[len(triples) :]
        else:
            subjects = [LinkedTerm.unlinked(t.subject) for t in triples]
            objects = [LinkedTerm.unlinked(t.object) for t in triples]

        if link_predicates:
            predicates = link_terms(
                [t.predicate for t in triples], "predicate", snapshot, self.snapshots
            )
        else:
            predicates = [LinkedTerm.unlinked(t.predicate) for t in triples]

        aligned = [
            {
                "subject": linked_term_to_wire(s),
                "predicate": linked_term_to_wire(p),
                "object": linked_term_to_wire(o),
            }
            for s, p, o in zip(subjects, predicates, objects)
        ]
        return {"aligned": aligned}


__all__ = ["NativeRuntime", "UnknownBuiltin"]
