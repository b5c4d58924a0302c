"""Wires configuration into a ready-to-use application state.

Both the HTTP gateway and the CLI build the same state, so their results
for identical inputs agree. The registry bootstraps from
data_dir/components.json when present (or PLUMBER_COMPONENTS), falling
back to the packaged defaults; KG snapshots load from the packaged toy
snapshot plus data_dir/kgs/*.json.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .config import AppConfig, default_components_path, default_snapshot_path
from .feedback import FeedbackStore
from .native.runtime import NativeRuntime
from .native.snapshot import SnapshotStore
from .registry import COMPONENTS_ENV_VAR, Registry, load_registry
from .remote import RemoteInvoker
from .runner import PipelineRunner, ResultCache, RunStore
from .selector import Selector, SelectorModel, load_model


@dataclass
class AppState:
    config: AppConfig
    registry: Registry
    snapshots: SnapshotStore
    runner: PipelineRunner
    run_store: RunStore
    feedback: FeedbackStore
    selector: Selector

    @property
    def model(self) -> SelectorModel | None:
        return self.selector.model

    def set_model(self, model: SelectorModel) -> None:
        # whole-model swap; in-flight selections keep the old reference
        self.selector.model = model


def build_state(config: AppConfig) -> AppState:
    data_dir = config.data_dir
    data_dir.mkdir(parents=True, exist_ok=True)

    components_path = default_components_path()
    local_components = data_dir / "components.json"
    if os.environ.get(COMPONENTS_ENV_VAR):
        components_path = Path(os.environ[COMPONENTS_ENV_VAR])
    elif local_components.is_file():
        components_path = local_components
    registry = load_registry(components_path)

    snapshots = SnapshotStore()
    snapshots.load_file(default_snapshot_path())
    kg_dir = data_dir / "kgs"
    if kg_dir.is_dir():
        snapshots.load_dir(kg_dir)

    cache = (
        ResultCache(data_dir / "cache", config.cache.budget_bytes)
        if config.cache.enabled
        else None
    )
    run_store = RunStore(data_dir / "runs")
    runner = PipelineRunner(
        registry=registry,
        native_runtime=NativeRuntime(snapshots),
        remote_invoker=RemoteInvoker(),
        cache=cache,
        run_store=run_store,
    )
    feedback = FeedbackStore(data_dir / "feedback.jsonl", run_lookup=run_store.get)

    model = None
    model_path = data_dir / "model.json"
    if model_path.is_file():
        model = load_model(model_path)
    selector = Selector(
        registry=registry,
        model=model,
        feedback=feedback,
        blend_feedback=config.selector.blend_feedback,
        beta=config.selector.beta,
    )
    return AppState(
        config=config,
        registry=registry,
        snapshots=snapshots,
        runner=runner,
        run_store=run_store,
        feedback=feedback,
        selector=selector,
    )
