"""Command-line interface: list, run, bench, train, serve.

Structured results go to stdout, diagnostics to stderr. Exit codes:
0 success, 1 user error (bad arguments, unknown ids, missing files),
2 internal error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .config import AppConfig, load_config
from .errors import PlumberError
from .evaluation import benchmark, load_corpus, load_profiles, save_profiles
from .gateway import serve as serve_app
from .model import Document, DocumentSource
from .registry import descriptor_to_dict
from .runner import InvalidPipeline, run_result_to_dict
from .selector import Hyperparameters, build_training_set, save_model, train
from .service import AppState, build_state


def _state(config_path: str | None) -> AppState:
    return build_state(load_config(config_path))


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None, help="Path to config.json.")
@click.pass_context
def cli(ctx, config_path):
    """Compose, run, and score information-extraction pipelines."""
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path


@cli.group()
def components():
    """Inspect the component registry."""


@components.command("list")
@click.pass_context
def components_list(ctx):
    state = _state(ctx.obj["config_path"])
    rows = [descriptor_to_dict(d) for d in state.registry.list_components()]
    _table(
        ["id", "task", "kgs", "target", "version", "name"],
        [
            [r["id"], r["task"], ",".join(r["kgs"]) or "-",
             f"{r['target']['kind']}:{r['target']['ref']}", r["version"], r["name"]]
            for r in rows
        ],
    )


@cli.group()
def pipelines():
    """Inspect the pipeline pool."""


@pipelines.command("list")
@click.option("--kg", default=None, help="Only pipelines aligned to this KG tag.")
@click.pass_context
def pipelines_list(ctx, kg):
    state = _state(ctx.obj["config_path"])
    pool, stats = state.registry.enumerate_pipelines()
    selected = [p for p in pool if kg is None or p.kg == kg]
    _table(
        ["id", "coref", "extractor", "linking", "kg"],
        [[p.id, p.coref, p.extractor, "+".join(p.linking_ids), p.kg] for p in selected],
    )
    click.echo(f"{len(selected)} of {stats.total} pipelines", err=True)


@cli.command()
@click.option("--text", default=None, help="Inline input text.")
@click.option("--file", "file_path", type=click.Path(), default=None, help="UTF-8 text file.")
@click.option("--auto", is_flag=True, help="Let the trained selector pick the pipeline.")
@click.option("--pipeline", "pipeline_id", default=None, help="Run this pipeline id.")
@click.option("--kg", default=None, help="Constrain automatic selection to this KG.")
@click.option("--format", "fmt", type=click.Choice(["json", "tsv"]), default="json")
@click.pass_context
def run(ctx, text, file_path, auto, pipeline_id, kg, fmt):
    """Run one pipeline (or the automatic choice) over a text."""
    if (text is None) == (file_path is None):
        raise click.UsageError("provide exactly one of --text or --file")
    if auto == (pipeline_id is not None):
        raise click.UsageError("provide exactly one of --auto or --pipeline ID")

    state = _state(ctx.obj["config_path"])
    if text is None:
        try:
            text = Path(file_path).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise click.UsageError(f"cannot read {file_path}: {exc}")
        source = DocumentSource.FILE
    else:
        source = DocumentSource.INLINE
    doc = Document(id="cli", text=text, source=source)

    if auto:
        pipeline, _scores = state.selector.select_automatic(text, kg)
        mode = "automatic"
    else:
        pool, _ = state.registry.enumerate_pipelines()
        by_id = {p.id: p for p in pool}
        if pipeline_id not in by_id:
            raise InvalidPipeline(f"no pipeline {pipeline_id!r} in the pool")
        pipeline = by_id[pipeline_id]
        mode = "manual"

    result = state.runner.run_pipeline(pipeline, doc, mode=mode)
    if fmt == "json":
        click.echo(json.dumps(run_result_to_dict(result), indent=2))
    else:
        for t in result.triples:
            cells = []
            for term in (t.subject, t.predicate, t.object):
                cells.append(term.mention.surface)
                cells.append(term.ref.iri if term.ref else "-")
            click.echo("\t".join(cells))
    if result.failed:
        failed = next(t for t in result.trace if t.status == "failed")
        click.echo(f"stage {failed.component_id} failed; no triples produced", err=True)


@cli.command()
@click.option("--corpus", "corpus_path", type=click.Path(), required=True)
@click.option("--out", "out_path", type=click.Path(), default="profiles.json")
@click.pass_context
def bench(ctx, corpus_path, out_path):
    """Score every pooled pipeline on a gold corpus, writing profiles."""
    state = _state(ctx.obj["config_path"])
    corpus = load_corpus(corpus_path)
    pool, _ = state.registry.enumerate_pipelines()
    profiles = benchmark(state.runner, pool, corpus)
    save_profiles(out_path, profiles)
    _table(
        ["pipeline", "f1", "precision", "recall", "latency_ms"],
        [
            [p.pipeline_id, f"{p.report.f1:.4f}", f"{p.report.precision:.4f}",
             f"{p.report.recall:.4f}", f"{p.mean_latency_ms:.1f}"]
            for p in profiles
        ],
    )
    click.echo(f"wrote {out_path}", err=True)


@cli.command("train")
@click.option("--profiles", "profiles_path", type=click.Path(), required=True)
@click.option("--corpus", "corpus_path", type=click.Path(), required=True)
@click.option("--out", "out_path", type=click.Path(), default="model.json")
@click.option("--epochs", type=int, default=None)
@click.option("--lr", type=float, default=None)
@click.option("--l2", type=float, default=None)
@click.option("--seed", type=int, default=None)
@click.pass_context
def train_cmd(ctx, profiles_path, corpus_path, out_path, epochs, lr, l2, seed):
    """Fit the pipeline scorer on benchmark profiles."""
    profiles = load_profiles(profiles_path)
    corpus = load_corpus(corpus_path)
    defaults = Hyperparameters()
    hyper = Hyperparameters(
        eta=lr if lr is not None else defaults.eta,
        lam=l2 if l2 is not None else defaults.lam,
        epochs=epochs if epochs is not None else defaults.epochs,
        seed=seed if seed is not None else defaults.seed,
    )
    training = build_training_set([doc.text for doc, _ in corpus], profiles, hyper.hash_dim)
    model, trajectory = train(training, hyper)
    save_model(out_path, model)
    click.echo(
        f"trained on {training.X.shape[0]} documents x {len(model.pipeline_ids)} pipelines; "
        f"final loss {trajectory[-1]:.6g}" if trajectory else "trained (0 epochs)",
        err=True,
    )
    click.echo(f"wrote {out_path}", err=True)


@cli.command()
@click.option("--port", type=int, default=None)
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.pass_context
def serve(ctx, port, config_path):
    """Start the HTTP gateway."""
    config = load_config(config_path or ctx.obj["config_path"])
    if port is not None:
        config = AppConfig(
            port=port,
            data_dir=config.data_dir,
            cache=config.cache,
            selector=config.selector,
            ui_origin=config.ui_origin,
        )
    click.echo(f"serving on 127.0.0.1:{config.port}", err=True)
    serve_app(config)


def _table(headers: list[str], rows: list[list[str]]) -> None:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(str(cell)))
    click.echo("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)))
    for row in rows:
        click.echo("  ".join(str(c).ljust(widths[i]) for i, c in enumerate(row)))


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False, obj={})
        return 0
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except PlumberError as exc:
        click.echo(f"error ({exc.code}): {exc.message}", err=True)
        return 1
    except Exception as exc:  # noqa: BLE001 - last-resort diagnostics
        click.echo(f"internal error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
