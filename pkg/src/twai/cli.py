"""Command-line interface; drives the same operations as the HTTP API.

Machine mode (--json) prints one JSON document per command for
scripting; human mode prints short text or tables. Usage errors exit
2 (click's default), operational errors exit 1 with the stable error
code on stderr.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from .api import serve as run_server
from .config import WorkbenchConfig, load_config
from .errors import WorkbenchError, error_code
from .scorecard import ALL_ITEMS, ScorecardEntry
from .workbench import Workbench


def _build_config(ctx: click.Context, **overrides) -> WorkbenchConfig:
    params = dict(ctx.obj)
    params.pop("json_output", None)
    params.update({k: v for k, v in overrides.items() if v is not None})
    config_file = params.pop("config", None)
    return load_config(config_file=config_file, overrides=params)


def _bench(ctx: click.Context, **overrides) -> Workbench:
    return Workbench(_build_config(ctx, **overrides))


def _emit(ctx: click.Context, payload: dict, human: str) -> None:
    if ctx.obj.get("json_output"):
        click.echo(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        click.echo(human)


def handle_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except WorkbenchError as exc:
            click.echo(f"{error_code(exc)}: {exc}", err=True)
            sys.exit(1)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            click.echo(f"Error: {exc}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.option("--workspace", type=click.Path(), help="workspace directory")
@click.option("--providers", "providers_file", type=click.Path(exists=True),
              help="providers roster JSON file")
@click.option("--search-fixture", "search_fixture_file", type=click.Path(exists=True),
              help="search fixture JSON file")
@click.option("--config", type=click.Path(exists=True), help="config JSON file")
@click.option("--json", "json_output", is_flag=True, help="machine-readable output")
@click.pass_context
def main(ctx, workspace, providers_file, search_fixture_file, config, json_output):
    """Trustworthy-AI workbench: generate, verify, decide."""
    ctx.obj = {
        "workspace": workspace,
        "providers_file": providers_file,
        "search_fixture_file": search_fixture_file,
        "config": config,
        "json_output": json_output,
    }


@main.command()
@click.option("--port", type=int, default=None)
@click.option("--host", default=None)
@click.option("--workspace", type=click.Path(), default=None)
@click.option("--providers", "providers_file", type=click.Path(exists=True), default=None)
@click.option("--search-fixture", "search_fixture_file", type=click.Path(exists=True), default=None)
@click.pass_context
@handle_errors
def serve(ctx, port, host, workspace, providers_file, search_fixture_file):
    """Run the HTTP service."""
    run_server(
        _build_config(
            ctx,
            port=port,
            host=host,
            workspace=workspace,
            providers_file=providers_file,
            search_fixture_file=search_fixture_file,
        )
    )


@main.command()
@click.argument("path", type=click.Path(exists=True))
@click.option("--doc-id", default=None, help="explicit document id")
@click.pass_context
@handle_errors
def ingest(ctx, path, doc_id):
    """Ingest a corpus document (UTF-8 text or JSON)."""
    bench = _bench(ctx)
    doc, chunk_count = bench.ingest_file(path, doc_id=doc_id)
    _emit(
        ctx,
        {"doc_id": doc.doc_id, "title": doc.title, "chunk_count": chunk_count},
        f"ingested '{doc.title}' as {doc.doc_id}: {chunk_count} chunks",
    )


@main.command()
@click.option("--session", "session_id", default=None, help="existing session id")
@click.option("--new", "new_title", default=None, help="create a session with this title")
@click.option("--prompt", required=True)
@click.option("--use", "use_providers", default=None,
              help="comma-separated provider ids (default: all registered)")
@click.pass_context
@handle_errors
def generate(ctx, session_id, new_title, prompt, use_providers):
    """Submit a prompt to providers in generation mode."""
    bench = _bench(ctx)
    if session_id is None:
        session = bench.create_session(new_title or prompt[:40])
        session_id = session.id
    provider_ids = use_providers.split(",") if use_providers else None
    turn = bench.submit_prompt(session_id, prompt, provider_ids)
    human = [f"session {session_id} turn {turn.index}"]
    for resp in turn.responses:
        human.append(f"--- {resp.provider_id} ({resp.id}) ---")
        human.append(resp.text)
    for err in turn.errors:
        human.append(f"--- {err['provider_id']} FAILED: {err['error']}")
    _emit(ctx, {"session_id": session_id, "turn": turn.to_dict()}, "\n".join(human))


@main.command()
@click.option("--session", "session_id", required=True)
@click.option("--response", "response_id", required=True)
@click.option("--method", type=click.Choice(["source", "double-check"]), required=True)
@click.pass_context
@handle_errors
def verify(ctx, session_id, response_id, method):
    """Run the source or double-check verifier on a response."""
    bench = _bench(ctx)
    if method == "source":
        result = bench.verify_source(session_id, response_id)
        human = (
            f"source: coverage {result.coverage:.2f} "
            f"({'passed' if result.passed else 'not passed'}), "
            f"{len(result.citations)} citations"
        )
    else:
        result = bench.run_double_check(session_id, response_id)
        counts: dict[str, int] = {}
        for h in result.highlights:
            counts[h.status] = counts.get(h.status, 0) + 1
        human = (
            f"double check: coverage {result.coverage:.2f} "
            f"({'passed' if result.passed else 'not passed'}), "
            + ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
        )
    _emit(ctx, result.to_dict(), human)


@main.command()
@click.option("--session", "session_id", required=True)
@click.option("--prompt", required=True)
@click.option("--use", "use_providers", default=None,
              help="comma-separated provider ids (default: all registered)")
@click.pass_context
@handle_errors
def compare(ctx, session_id, prompt, use_providers):
    """Fan a prompt to several providers and cluster shared claims."""
    bench = _bench(ctx)
    provider_ids = use_providers.split(",") if use_providers else None
    report = bench.run_compare(session_id, prompt, provider_ids)
    human = [
        f"compare over {', '.join(report.provider_ids)}: "
        f"{len(report.common_clusters)}/{len(report.clusters)} clusters common"
    ]
    for cluster in report.common_clusters:
        human.append(f"  [{cluster.support}x] {cluster.representative_text}")
    _emit(ctx, report.to_dict(), "\n".join(human))


@main.command()
@click.option("--session", "session_id", required=True)
@click.option("--choose", "response_id", default=None, help="record this response as the decision")
@click.option("--rationale", default="")
@click.pass_context
@handle_errors
def decide(ctx, session_id, response_id, rationale):
    """Show the reliability-ranked table, or record a choice."""
    bench = _bench(ctx)
    if response_id is None:
        table = bench.decision_table(session_id)
        _emit(ctx, table.to_dict(), table.to_text())
    else:
        record = bench.record_decision(session_id, response_id, rationale)
        _emit(
            ctx,
            record.to_dict(),
            f"decision recorded: {record.chosen_response_id}",
        )


@main.group()
@click.pass_context
def scorecard(ctx):
    """Record and aggregate AI trust scorecard ratings."""


@scorecard.command("record")
@click.option("--rater", required=True)
@click.option("--tool", required=True)
@click.option("--rating", "ratings", multiple=True,
              help="item=level, repeat for all six items")
@click.pass_context
@handle_errors
def scorecard_record(ctx, rater, tool, ratings):
    bench = _bench(ctx.parent)
    parsed = {}
    for item_eq_level in ratings:
        item, _, level = item_eq_level.partition("=")
        parsed[item.strip()] = level.strip()
    entry = bench.record_scorecard_entry(
        ScorecardEntry(rater_id=rater, tool_id=tool, ratings=parsed)
    )
    _emit(ctx.parent, entry.to_dict(), f"recorded {rater} on {tool}")


@scorecard.command("aggregate")
@click.option("--tool", required=True)
@click.pass_context
@handle_errors
def scorecard_aggregate(ctx, tool):
    bench = _bench(ctx.parent)
    report = bench.scorecard_report(tool)
    lines = [f"{tool}: overall {report.overall_mean_of_sums:g} over {report.n_raters} raters"]
    for item, mean in report.per_item_mean.items():
        lines.append(f"  {item}: {mean:+.2f}")
    lines.append(f"  satisfaction (separate): {report.satisfaction_mean:+.2f}")
    _emit(ctx.parent, report.to_dict(), "\n".join(lines))


@scorecard.command("compare")
@click.option("--tool-a", required=True)
@click.option("--tool-b", required=True)
@click.pass_context
@handle_errors
def scorecard_compare(ctx, tool_a, tool_b):
    bench = _bench(ctx.parent)
    deltas = bench.scorecard_compare(tool_a, tool_b)
    human = [f"{tool_b} minus {tool_a}: overall {deltas['overall_delta']:+g}"]
    for item, delta in deltas["per_item_delta"].items():
        human.append(f"  {item}: {delta:+.2f}")
    _emit(ctx.parent, deltas, "\n".join(human))


@scorecard.command("import")
@click.argument("path", type=click.Path(exists=True))
@click.pass_context
@handle_errors
def scorecard_import(ctx, path):
    bench = _bench(ctx.parent)
    count = bench.import_scorecard_csv(Path(path).read_text(encoding="utf-8"))
    _emit(ctx.parent, {"imported": count}, f"imported {count} entries")


@scorecard.command("export")
@click.option("--out", type=click.Path(), default=None, help="write CSV here (default stdout)")
@click.pass_context
@handle_errors
def scorecard_export(ctx, out):
    bench = _bench(ctx.parent)
    text = bench.scorecards.export_csv()
    if out:
        Path(out).write_text(text, encoding="utf-8")
        _emit(ctx.parent, {"written": out}, f"wrote {out}")
    else:
        click.echo(text, nl=False)


@main.command("export")
@click.option("--session", "session_id", required=True)
@click.option("--out", type=click.Path(), required=True)
@click.pass_context
@handle_errors
def export_session(ctx, session_id, out):
    """Export a session to a portable archive."""
    bench = _bench(ctx)
    archive = bench.export_session(session_id, out)
    _emit(
        ctx,
        {"out": out, "manifest": archive.manifest},
        f"exported {archive.manifest['record_count']} records to {out}",
    )


@main.command("import")
@click.argument("archive", type=click.Path(exists=True))
@click.pass_context
@handle_errors
def import_session(ctx, archive):
    """Import a session archive into the workspace."""
    bench = _bench(ctx)
    session = bench.import_session(archive)
    _emit(
        ctx,
        {"session_id": session.id, "turn_count": len(session.turns)},
        f"imported session {session.id} ({len(session.turns)} turns)",
    )


if __name__ == "__main__":
    main()
