import json
import random

import pytest

from plumber.registry import (
    ComponentDescriptor,
    DuplicateId,
    IncompletePool,
    InvalidDescriptor,
    KGMismatch,
    Registry,
    Target,
    TaskKind,
    TaskMismatch,
    UnknownComponent,
    load_registry,
)


def desc(cid, task, kgs=()):
    return ComponentDescriptor(
        id=cid,
        name=cid,
        task=task,
        kgs=frozenset(kgs),
        target=Target(kind="native", ref=cid),
    )


def small_registry():
    r = Registry()
    r.register_component(desc("coref-a", TaskKind.COREF))
    r.register_component(desc("coref-b", TaskKind.COREF))
    r.register_component(desc("ext-a", TaskKind.TRIPLE_EXTRACTION))
    r.register_component(desc("el-a", TaskKind.ENTITY_LINKING, ["toykg"]))
    r.register_component(desc("el-b", TaskKind.ENTITY_LINKING, ["dbpedia"]))
    r.register_component(desc("rl-a", TaskKind.RELATION_LINKING, ["toykg", "dbpedia"]))
    return r


class TestDescriptors:
    def test_register_and_get(self):
        r = Registry()
        cid = r.register_component(desc("coref-a", TaskKind.COREF))
        assert cid == "coref-a"
        assert r.get("coref-a").task is TaskKind.COREF

    def test_duplicate_rejected(self):
        r = Registry()
        r.register_component(desc("coref-a", TaskKind.COREF))
        with pytest.raises(DuplicateId):
            r.register_component(desc("coref-a", TaskKind.COREF))

    def test_linker_requires_kgs(self):
        with pytest.raises(InvalidDescriptor):
            desc("el-x", TaskKind.ENTITY_LINKING, [])

    def test_kg_agnostic_tasks_reject_kgs(self):
        with pytest.raises(InvalidDescriptor):
            desc("coref-x", TaskKind.COREF, ["toykg"])

    def test_id_charset(self):
        with pytest.raises(InvalidDescriptor):
            desc("Bad_Id", TaskKind.COREF)

    def test_kg_tag_charset(self):
        with pytest.raises(InvalidDescriptor):
            desc("el-x", TaskKind.ENTITY_LINKING, ["ToyKG"])


class TestListComponents:
    def test_empty(self):
        assert Registry().list_components() == []

    def test_task_filter(self):
        r = small_registry()
        ids = [d.id for d in r.list_components(TaskKind.COREF)]
        assert ids == ["coref-a", "coref-b"]

    def test_task_and_kg_filter(self):
        r = small_registry()
        ids = [d.id for d in r.list_components(TaskKind.ENTITY_LINKING, "dbpedia")]
        assert ids == ["el-b"]


class TestEnumeration:
    def test_minimal_pool(self):
        r = Registry()
        r.register_component(desc("c", TaskKind.COREF))
        r.register_component(desc("t", TaskKind.TRIPLE_EXTRACTION))
        r.register_component(desc("el", TaskKind.ENTITY_LINKING, ["toykg"]))
        r.register_component(desc("rl", TaskKind.RELATION_LINKING, ["toykg"]))
        pool, stats = r.enumerate_pipelines()
        assert stats.total == 1 == len(pool)
        assert pool[0].id == "c+t+el+rl@toykg"

    def test_formula_case(self):
        r = Registry()
        for i in range(2):
            r.register_component(desc(f"c{i}", TaskKind.COREF))
        for i in range(3):
            r.register_component(desc(f"t{i}", TaskKind.TRIPLE_EXTRACTION))
        for i in range(2):
            r.register_component(desc(f"el{i}", TaskKind.ENTITY_LINKING, ["toykg"]))
        for i in range(2):
            r.register_component(desc(f"rl{i}", TaskKind.RELATION_LINKING, ["toykg"]))
        r.register_component(desc("j0", TaskKind.JOINT_LINKING, ["toykg"]))
        pool, stats = r.enumerate_pipelines()
        assert stats.total == 2 * 3 * (2 * 2 + 1) == 30
        assert len(pool) == 30

    def test_missing_extractor(self):
        r = Registry()
        r.register_component(desc("c", TaskKind.COREF))
        r.register_component(desc("el", TaskKind.ENTITY_LINKING, ["toykg"]))
        r.register_component(desc("rl", TaskKind.RELATION_LINKING, ["toykg"]))
        with pytest.raises(IncompletePool) as err:
            r.enumerate_pipelines()
        assert err.value.missing is TaskKind.TRIPLE_EXTRACTION

    def test_no_same_kg_linking_option(self):
        r = Registry()
        r.register_component(desc("c", TaskKind.COREF))
        r.register_component(desc("t", TaskKind.TRIPLE_EXTRACTION))
        r.register_component(desc("el", TaskKind.ENTITY_LINKING, ["kga"]))
        r.register_component(desc("rl", TaskKind.RELATION_LINKING, ["kgb"]))
        with pytest.raises(IncompletePool):
            r.enumerate_pipelines()

    def test_enumeration_deterministic(self):
        r = small_registry()
        first, _ = r.enumerate_pipelines()
        second, _ = r.enumerate_pipelines()
        assert [p.id for p in first] == [p.id for p in second]

    def test_enumerated_pipelines_validate(self):
        r = small_registry()
        pool, _ = r.enumerate_pipelines()
        for p in pool:
            validated = r.validate_manual_selection(p.coref, p.extractor, p.linking_ids, p.kg)
            assert validated == p


def brute_force_total(corefs, extractors, linkers_by_kg):
    """Independent nested-loop pipeline count."""
    total = 0
    for _c in range(corefs):
        for _t in range(extractors):
            for els, rls, joints in linkers_by_kg.values():
                for _e in range(els):
                    for _r in range(rls):
                        total += 1
                for _j in range(joints):
                    total += 1
    return total


def build_random_registry(rng):
    r = Registry()
    corefs = rng.randint(1, 4)
    extractors = rng.randint(1, 4)
    kg_tags = [f"kg{i}" for i in range(rng.randint(1, 3))]
    for i in range(corefs):
        r.register_component(desc(f"c{i}", TaskKind.COREF))
    for i in range(extractors):
        r.register_component(desc(f"t{i}", TaskKind.TRIPLE_EXTRACTION))
    linkers_by_kg = {}
    n = 0
    for kg in kg_tags:
        els, rls, joints = rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3)
        linkers_by_kg[kg] = (els, rls, joints)
        for _ in range(els):
            r.register_component(desc(f"el{n}", TaskKind.ENTITY_LINKING, [kg]))
            n += 1
        for _ in range(rls):
            r.register_component(desc(f"rl{n}", TaskKind.RELATION_LINKING, [kg]))
            n += 1
        for _ in range(joints):
            r.register_component(desc(f"j{n}", TaskKind.JOINT_LINKING, [kg]))
            n += 1
    return r, corefs, extractors, linkers_by_kg


class TestPoolOracle:
    def test_randomized_counts_match_brute_force_and_formula(self):
        rng = random.Random(42)
        checked = 0
        for _ in range(60):
            r, c, t, by_kg = build_random_registry(rng)
            expected = brute_force_total(c, t, by_kg)
            formula = c * t * sum(e * rl + j for e, rl, j in by_kg.values())
            if expected == 0:
                with pytest.raises(IncompletePool):
                    r.enumerate_pipelines()
                continue
            pool, stats = r.enumerate_pipelines()
            assert stats.total == expected == formula == len(pool)
            checked += 1
        assert checked > 10


class TestManualValidation:
    def test_valid_pair(self):
        r = small_registry()
        p = r.validate_manual_selection("coref-a", "ext-a", ["el-a", "rl-a"], "toykg")
        assert p.kg == "toykg"
        assert p.id == "coref-a+ext-a+el-a+rl-a@toykg"

    def test_unknown_component(self):
        r = small_registry()
        with pytest.raises(UnknownComponent):
            r.validate_manual_selection("nope", "ext-a", ["el-a", "rl-a"], "toykg")

    def test_task_mismatch(self):
        r = small_registry()
        with pytest.raises(TaskMismatch) as err:
            r.validate_manual_selection("ext-a", "ext-a", ["el-a", "rl-a"], "toykg")
        assert err.value.expected is TaskKind.COREF

    def test_kg_mismatch(self):
        r = small_registry()
        with pytest.raises(KGMismatch):
            r.validate_manual_selection("coref-a", "ext-a", ["el-b", "rl-a"], "toykg")


class TestBootstrapFile:
    def test_load_and_env_override(self, tmp_path, monkeypatch):
        primary = tmp_path / "components.json"
        primary.write_text(json.dumps([
            {"id": "coref-x", "name": "x", "task": "coref", "kgs": [],
             "target": {"kind": "native", "ref": "coref-identity"}, "version": "1"},
        ]))
        override = tmp_path / "other.json"
        override.write_text(json.dumps([
            {"id": "coref-y", "name": "y", "task": "coref", "kgs": [],
             "target": {"kind": "remote", "ref": "http://localhost:1/x"}, "version": "2",
             "timeout_ms": 5000},
        ]))

        registry = load_registry(primary)
        assert [d.id for d in registry.list_components()] == ["coref-x"]

        monkeypatch.setenv("PLUMBER_COMPONENTS", str(override))
        registry = load_registry(primary)
        loaded = registry.list_components()
        assert [d.id for d in loaded] == ["coref-y"]
        assert loaded[0].timeout_ms == 5000

    def test_malformed_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(InvalidDescriptor):
            load_registry(bad)
