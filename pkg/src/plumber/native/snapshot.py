"""Local knowledge-graph snapshots.

A snapshot is a JSON file of entity and predicate records (IRI, label,
aliases, prior). Snapshots are loaded once, validated, and shared
immutably; they stand in for a remote KG so the full pipeline runs
offline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlsplit

from ..errors import PlumberError
from ..model import char_trigrams, normalize_surface
from ..registry import validate_kg_tag


class ParseError(PlumberError):
    code = "snapshot_parse_error"

    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.line = line


class InvariantViolation(PlumberError):
    code = "snapshot_invalid"

    def __init__(self, iri: str, message: str):
        super().__init__(f"{iri}: {message}")
        self.iri = iri


class SnapshotMissing(PlumberError):
    code = "snapshot_missing"

    def __init__(self, kg: str):
        super().__init__(f"no snapshot loaded for KG {kg!r}")
        self.kg = kg


@dataclass(frozen=True)
class KGRecord:
    iri: str
    label: str
    aliases: tuple[str, ...]
    prior: float

    @property
    def forms(self) -> tuple[str, ...]:
        return (self.label, *self.aliases)


@dataclass(frozen=True)
class KGSnapshot:
    kg: str
    entities: tuple[KGRecord, ...]
    predicates: tuple[KGRecord, ...]


def load_snapshot(path: str | Path) -> KGSnapshot:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(str(path), exc.lineno, exc.msg) from exc
    if not isinstance(raw, dict):
        raise ParseError(str(path), 1, "snapshot must be a JSON object")

    kg = raw.get("kg")
    if not isinstance(kg, str):
        raise ParseError(str(path), 1, "missing or non-string 'kg' field")
    validate_kg_tag(kg)

    seen: set[str] = set()
    entities = tuple(_record(obj, seen) for obj in raw.get("entities", []))
    predicates = tuple(_record(obj, seen) for obj in raw.get("predicates", []))
    return KGSnapshot(kg=kg, entities=entities, predicates=predicates)


def _record(obj: dict, seen: set[str]) -> KGRecord:
    iri = obj.get("iri", "")
    if not isinstance(iri, str) or not urlsplit(iri).scheme:
        raise InvariantViolation(str(iri), "iri must be an absolute IRI")
    if iri in seen:
        raise InvariantViolation(iri, "duplicate iri in snapshot")
    seen.add(iri)
    label = obj.get("label", "")
    aliases = tuple(obj.get("aliases", []))
    for form in (label, *aliases):
        if not isinstance(form, str) or not normalize_surface(form):
            raise InvariantViolation(iri, f"label/alias {form!r} empty after normalization")
    prior = obj.get("prior", 0.0)
    if not isinstance(prior, (int, float)) or not 0.0 <= float(prior) <= 1.0:
        raise InvariantViolation(iri, f"prior {prior!r} outside [0, 1]")
    return KGRecord(iri=iri, label=label, aliases=aliases, prior=float(prior))


class SnapshotStore:
    """Immutable-after-load registry of snapshots keyed by KG tag."""

    def __init__(self):
        self._snapshots: dict[str, KGSnapshot] = {}
        self._index: dict[tuple[str, str], list] = {}

    def add(self, snapshot: KGSnapshot) -> None:
        self._snapshots[snapshot.kg] = snapshot

    def load_file(self, path: str | Path) -> KGSnapshot:
        snapshot = load_snapshot(path)
        self.add(snapshot)
        return snapshot

    def load_dir(self, path: str | Path) -> None:
        for file in sorted(Path(path).glob("*.json")):
            self.load_file(file)

    def get(self, kg: str) -> KGSnapshot:
        snapshot = self._snapshots.get(kg)
        if snapshot is None:
            raise SnapshotMissing(kg)
        return snapshot

    def kgs(self) -> list[str]:
        return sorted(self._snapshots)

    def candidates(self, kg: str, role: str) -> list[tuple[KGRecord, list[str], list]]:
        """Records with precomputed normalized forms and trigram multisets."""
        key = (kg, role)
        if key not in self._index:
            snapshot = self.get(kg)
            records = snapshot.entities if role == "entity" else snapshot.predicates
            self._index[key] = [
                (
                    rec,
                    [normalize_surface(f) for f in rec.forms],
                    [char_trigrams(normalize_surface(f)) for f in rec.forms],
                )
                for rec in records
            ]
        return self._index[key]
