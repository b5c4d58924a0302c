"""Component registry and pipeline pool.

The registry holds descriptors for every attached extraction tool (native
baselines and remote services alike). The pool is the cross product of all
valid component chains, tagged with the knowledge graph each chain aligns
to, and is regenerated lazily whenever the registry changes.
"""

from __future__ import annotations

import json
import os
import re
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import PlumberError

COMPONENTS_ENV_VAR = "PLUMBER_COMPONENTS"

_ID_RE = re.compile(r"[a-z0-9\-]+")
_KG_TAG_RE = re.compile(r"[a-z0-9_]+")


class TaskKind(Enum):
    COREF = "coref"
    TRIPLE_EXTRACTION = "triple_extraction"
    ENTITY_LINKING = "entity_linking"
    RELATION_LINKING = "relation_linking"
    JOINT_LINKING = "joint_linking"


LINKING_TASKS = frozenset(
    {TaskKind.ENTITY_LINKING, TaskKind.RELATION_LINKING, TaskKind.JOINT_LINKING}
)


class DuplicateId(PlumberError):
    code = "duplicate_id"


class InvalidDescriptor(PlumberError):
    code = "invalid_descriptor"


class IncompletePool(PlumberError):
    code = "incomplete_pool"

    def __init__(self, missing: TaskKind):
        super().__init__(f"pool has no usable {missing.value} component")
        self.missing = missing


class UnknownComponent(PlumberError):
    code = "unknown_component"

    def __init__(self, component_id: str):
        super().__init__(f"unknown component {component_id!r}")
        self.component_id = component_id


class TaskMismatch(PlumberError):
    code = "task_mismatch"

    def __init__(self, component_id: str, expected: TaskKind, actual: TaskKind):
        super().__init__(
            f"component {component_id!r} is a {actual.value} component, "
            f"expected {expected.value}"
        )
        self.component_id = component_id
        self.expected = expected
        self.actual = actual


class KGMismatch(PlumberError):
    code = "kg_mismatch"

    def __init__(self, component_id: str, kg: str):
        super().__init__(f"component {component_id!r} does not align to KG {kg!r}")
        self.component_id = component_id
        self.kg = kg


def validate_kg_tag(tag: str) -> str:
    if not _KG_TAG_RE.fullmatch(tag):
        raise InvalidDescriptor(f"KG tag {tag!r} must match [a-z0-9_]+")
    return tag


@dataclass(frozen=True)
class Target:
    """Where a component executes: a builtin key or a remote endpoint URL."""

    kind: str  # "native" | "remote"
    ref: str

    def __post_init__(self):
        if self.kind not in ("native", "remote"):
            raise InvalidDescriptor(f"target kind {self.kind!r} unknown")
        if not self.ref:
            raise InvalidDescriptor("target ref must be non-empty")


@dataclass(frozen=True)
class ComponentDescriptor:
    id: str
    name: str
    task: TaskKind
    kgs: frozenset[str]
    target: Target
    version: str = "1"
    timeout_ms: int | None = None  # remote call budget override

    def __post_init__(self):
        if not _ID_RE.fullmatch(self.id):
            raise InvalidDescriptor(f"component id {self.id!r} must match [a-z0-9-]+")
        for tag in self.kgs:
            validate_kg_tag(tag)
        if self.task in LINKING_TASKS and not self.kgs:
            raise InvalidDescriptor(
                f"{self.task.value} component {self.id!r} must declare at least one KG"
            )
        if self.task not in LINKING_TASKS and self.kgs:
            raise InvalidDescriptor(
                f"{self.task.value} component {self.id!r} is KG-agnostic, kgs must be empty"
            )


@dataclass(frozen=True)
class Pipeline:
    """A validated chain: coref, extractor, then either an EL+RL pair or a
    joint linker, aligned to exactly one KG."""

    id: str
    coref: str
    extractor: str
    entity_linker: str | None
    relation_linker: str | None
    joint_linker: str | None
    kg: str

    @staticmethod
    def build(
        coref: str,
        extractor: str,
        linking: tuple[str, ...],
        kg: str,
    ) -> "Pipeline":
        pid = "+".join((coref, extractor, *linking)) + "@" + kg
        if len(linking) == 1:
            return Pipeline(pid, coref, extractor, None, None, linking[0], kg)
        return Pipeline(pid, coref, extractor, linking[0], linking[1], None, kg)

    @property
    def is_joint(self) -> bool:
        return self.joint_linker is not None

    @property
    def linking_ids(self) -> tuple[str, ...]:
        if self.joint_linker is not None:
            return (self.joint_linker,)
        return (self.entity_linker, self.relation_linker)

    @property
    def component_ids(self) -> tuple[str, ...]:
        return (self.coref, self.extractor, *self.linking_ids)


@dataclass(frozen=True)
class PoolStats:
    coref_count: int
    extractor_count: int
    entity_linkers: dict[str, int]  # per KG tag
    relation_linkers: dict[str, int]
    joint_linkers: dict[str, int]
    total: int


class Registry:
    """Read-mostly component store. Registrations serialize through a lock;
    enumeration results are immutable snapshots, recomputed lazily after a
    registration invalidates the pool."""

    def __init__(self):
        self._components: dict[str, ComponentDescriptor] = {}
        self._lock = threading.Lock()
        self._pool_cache: tuple[tuple[Pipeline, ...], PoolStats] | None = None

    def register_component(self, desc: ComponentDescriptor) -> str:
        with self._lock:
            if desc.id in self._components:
                raise DuplicateId(f"component id {desc.id!r} already registered")
            self._components[desc.id] = desc
            self._pool_cache = None
        return desc.id

    def get(self, component_id: str) -> ComponentDescriptor:
        desc = self._components.get(component_id)
        if desc is None:
            raise UnknownComponent(component_id)
        return desc

    def list_components(
        self,
        task: TaskKind | None = None,
        kg: str | None = None,
    ) -> list[ComponentDescriptor]:
        out = []
        for desc in self._components.values():
            if task is not None and desc.task != task:
                continue
            if kg is not None and kg not in desc.kgs:
                continue
            out.append(desc)
        return sorted(out, key=lambda d: d.id)

    def enumerate_pipelines(self) -> tuple[tuple[Pipeline, ...], PoolStats]:
        with self._lock:
            if self._pool_cache is None:
                self._pool_cache = self._build_pool()
            return self._pool_cache

    def _build_pool(self) -> tuple[tuple[Pipeline, ...], PoolStats]:
        corefs = self.list_components(TaskKind.COREF)
        extractors = self.list_components(TaskKind.TRIPLE_EXTRACTION)
        entity = self.list_components(TaskKind.ENTITY_LINKING)
        relation = self.list_components(TaskKind.RELATION_LINKING)
        joint = self.list_components(TaskKind.JOINT_LINKING)

        kgs = sorted(
            {tag for d in (*entity, *relation, *joint) for tag in d.kgs}
        )
        e_k = {k: sum(1 for d in entity if k in d.kgs) for k in kgs}
        r_k = {k: sum(1 for d in relation if k in d.kgs) for k in kgs}
        j_k = {k: sum(1 for d in joint if k in d.kgs) for k in kgs}
        has_linking = any(e_k[k] * r_k[k] + j_k[k] > 0 for k in kgs)

        if not corefs:
            raise IncompletePool(TaskKind.COREF)
        if not extractors:
            raise IncompletePool(TaskKind.TRIPLE_EXTRACTION)
        if not has_linking:
            if not entity and not joint:
                raise IncompletePool(TaskKind.ENTITY_LINKING)
            if not relation and not joint:
                raise IncompletePool(TaskKind.RELATION_LINKING)
            # EL and RL exist but never for the same KG, and no joint linker
            raise IncompletePool(TaskKind.JOINT_LINKING)

        pipelines = []
        for c in corefs:
            for t in extractors:
                for k in kgs:
                    for el in entity:
                        if k not in el.kgs:
                            continue
                        for rl in relation:
                            if k not in rl.kgs:
                                continue
                            pipelines.append(
                                Pipeline.build(c.id, t.id, (el.id, rl.id), k)
                            )
                    for jl in joint:
                        if k in jl.kgs:
                            pipelines.append(Pipeline.build(c.id, t.id, (jl.id,), k))
        pipelines.sort(key=lambda p: p.id)
        stats = PoolStats(
            coref_count=len(corefs),
            extractor_count=len(extractors),
            entity_linkers=e_k,
            relation_linkers=r_k,
            joint_linkers=j_k,
            total=len(pipelines),
        )
        return tuple(pipelines), stats

    def validate_manual_selection(
        self,
        coref_id: str,
        extractor_id: str,
        linking_ids: tuple[str, ...] | list[str],
        kg: str,
    ) -> Pipeline:
        linking_ids = tuple(linking_ids)
        if len(linking_ids) not in (1, 2):
            raise InvalidDescriptor("linking selection must be one joint linker or an EL+RL pair")
        self._check_task(coref_id, TaskKind.COREF)
        self._check_task(extractor_id, TaskKind.TRIPLE_EXTRACTION)
        if len(linking_ids) == 1:
            linkers = [self._check_task(linking_ids[0], TaskKind.JOINT_LINKING)]
        else:
            linkers = [
                self._check_task(linking_ids[0], TaskKind.ENTITY_LINKING),
                self._check_task(linking_ids[1], TaskKind.RELATION_LINKING),
            ]
        for desc in linkers:
            if kg not in desc.kgs:
                raise KGMismatch(desc.id, kg)
        return Pipeline.build(coref_id, extractor_id, linking_ids, kg)

    def _check_task(self, component_id: str, expected: TaskKind) -> ComponentDescriptor:
        desc = self.get(component_id)
        if desc.task != expected:
            raise TaskMismatch(component_id, expected, desc.task)
        return desc


def descriptor_from_dict(obj: dict) -> ComponentDescriptor:
    try:
        target = obj["target"]
        return ComponentDescriptor(
            id=obj["id"],
            name=obj["name"],
            task=TaskKind(obj["task"]),
            kgs=frozenset(obj.get("kgs", [])),
            target=Target(kind=target["kind"], ref=target["ref"]),
            version=str(obj.get("version", "1")),
            timeout_ms=obj.get("timeout_ms"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidDescriptor(f"bad component descriptor: {exc}") from exc


def descriptor_to_dict(desc: ComponentDescriptor) -> dict:
    out = {
        "id": desc.id,
        "name": desc.name,
        "task": desc.task.value,
        "kgs": sorted(desc.kgs),
        "target": {"kind": desc.target.kind, "ref": desc.target.ref},
        "version": desc.version,
    }
    if desc.timeout_ms is not None:
        out["timeout_ms"] = desc.timeout_ms
    return out


def load_registry(path: str | Path) -> Registry:
    """Load the bootstrap component file (a JSON array of descriptors).

    The PLUMBER_COMPONENTS environment variable overrides the path.
    """
    actual = Path(os.environ.get(COMPONENTS_ENV_VAR) or path)
    try:
        entries = json.loads(actual.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidDescriptor(f"cannot parse {actual}: {exc}") from exc
    if not isinstance(entries, list):
        raise InvalidDescriptor(f"{actual} must contain a JSON array")
    registry = Registry()
    for entry in entries:
        registry.register_component(descriptor_from_dict(entry))
    return registry
