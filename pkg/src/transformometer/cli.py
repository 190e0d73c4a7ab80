"""The `tom` command line: the same domain core as the HTTP service.

Exit codes: 0 success, 1 domain error (invalid input, unknown IU,
upstream failure, held lock), 2 usage error. --machine switches output
to line-delimited JSON records mirroring the HTTP payloads.
"""

from __future__ import annotations

import functools
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import click

from . import analysis, rubric
from .config import AppConfig, ConfigError, load_config
from .ingestion import IngestionConfig, IngestionError, SummaryClient, export_dataset
from .registry import IURecord, RegistryError, Store, slugify
from .rubric import ScoreCard

DOMAIN_ERRORS = (
    RegistryError,
    IngestionError,
    rubric.InvalidScoreCardError,
    rubric.UnknownCriterionError,
    rubric.LevelOutOfRangeError,
    analysis.InsufficientIUsError,
    ConfigError,
    FileNotFoundError,
)


@dataclass
class CliContext:
    store_path: Path
    config: AppConfig
    machine: bool
    fixture_dir: Path | None

    def open_store(self, writable: bool) -> Store:
        return Store(self.store_path, writable=writable)

    def ingestion_config(self, refresh: bool = False) -> IngestionConfig:
        cfg = self.config.ingestion
        if self.fixture_dir is not None:
            cfg = replace(cfg, fixture_dir=self.fixture_dir)
        if refresh:
            cfg = replace(cfg, refresh=True)
        return cfg

    def emit(self, record: dict, human: str) -> None:
        if self.machine:
            click.echo(json.dumps(record, ensure_ascii=False))
        else:
            click.echo(human)


def domain_errors(func):
    """Turn domain exceptions into a message on stderr and exit code 1."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DOMAIN_ERRORS as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.option(
    "--store",
    "store_path",
    envvar="TOM_STORE",
    default="tom.store",
    show_default=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Path to the registry store file (env: TOM_STORE).",
)
@click.option(
    "--config",
    "config_path",
    envvar="TOM_CONFIG",
    default=None,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Optional YAML config file (env: TOM_CONFIG).",
)
@click.option("--machine", is_flag=True, help="Emit line-delimited JSON records.")
@click.option(
    "--fixture-dir",
    default=None,
    type=click.Path(file_okay=False, path_type=Path),
    help="Directory of {slug}.txt description fixtures for ingest --mode fixture.",
)
@click.pass_context
@domain_errors
def cli(ctx, store_path, config_path, machine, fixture_dir):
    """Score innovations on the six-criterion rubric and track revisions."""
    ctx.obj = CliContext(
        store_path=store_path,
        config=load_config(config_path),
        machine=machine,
        fixture_dir=fixture_dir,
    )


@cli.command()
@click.pass_obj
@domain_errors
def init(obj: CliContext):
    """Create an empty store file."""
    with Store.create(obj.store_path):
        pass
    obj.emit({"store": str(obj.store_path)}, f"initialized store at {obj.store_path}")


@cli.command("add-iu")
@click.option("--id", "iu_id", required=True, help="Stable slug, e.g. 'wheel'.")
@click.option("--name", required=True)
@click.option("--description", default="")
@click.option(
    "--source",
    "description_source",
    default="manual",
    type=click.Choice(["manual", "wikipedia-fixture", "wikipedia-live"]),
)
@click.option("--tag", "tags", multiple=True, help="Repeatable, e.g. --tag ai-related.")
@click.pass_obj
@domain_errors
def add_iu(obj: CliContext, iu_id, name, description, description_source, tags):
    """Insert an IU, or update an existing one's mutable fields."""
    with obj.open_store(writable=True) as store:
        stored = store.upsert_iu(
            IURecord(
                id=iu_id,
                name=name,
                description=description,
                description_source=description_source,
                tags=frozenset(tags),
            )
        )
    payload = stored.to_wire()
    payload.pop("kind")
    obj.emit(payload, f"stored IU {stored.id} ({stored.name})")


def _load_card(path: Path) -> ScoreCard:
    payload = json.loads(path.read_text(encoding="utf-8"))
    if isinstance(payload, dict) and "scores" in payload:
        payload = payload["scores"]
    if not isinstance(payload, dict):
        raise rubric.InvalidScoreCardError(["card file must hold a JSON object"])
    return ScoreCard.from_wire(payload)


@cli.command()
@click.option("--iu", "iu_id", required=True)
@click.option(
    "--file",
    "card_file",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="JSON scorecard: {criterion: level} or {criterion: {level, rationale}}.",
)
@click.option("--note", default="", help="What new information prompted this revision.")
@click.pass_obj
@domain_errors
def score(obj: CliContext, iu_id, card_file, note):
    """Append a new score revision for an IU and print the composite."""
    card = _load_card(card_file)
    with obj.open_store(writable=True) as store:
        revision = store.append_revision(iu_id, card, note=note)
    payload = revision.to_wire()
    payload.pop("kind")
    obj.emit(
        payload,
        f"{iu_id} revision {revision.revision_no}: composite "
        f"{revision.composite.value} (raw sum {revision.composite.raw_sum})",
    )


@cli.command()
@click.option("--iu", "iu_id", required=True)
@click.pass_obj
@domain_errors
def history(obj: CliContext, iu_id):
    """List an IU's revisions in order."""
    with obj.open_store(writable=False) as store:
        revisions = store.history(iu_id)
    for revision in revisions:
        payload = revision.to_wire()
        payload.pop("kind")
        obj.emit(
            payload,
            f"{revision.revision_no}. composite {revision.composite.value} "
            f"at {revision.recorded_at}"
            + (f" - {revision.note}" if revision.note else ""),
        )


@cli.command()
@click.pass_obj
@domain_errors
def rank(obj: CliContext):
    """Rank scored IUs by latest composite, best first."""
    with obj.open_store(writable=False) as store:
        entries = store.rank()
    for position, (iu_id, composite) in enumerate(entries, start=1):
        obj.emit(
            {"position": position, "iu_id": iu_id, "composite": composite},
            f"{position}. {iu_id} {composite}",
        )


@cli.command()
@click.option("--iu", "iu_id", required=True)
@click.option("--criterion", required=True, help="Criterion key, e.g. immediacy_of_impact.")
@click.option("--level", required=True, type=int)
@click.pass_obj
@domain_errors
def whatif(obj: CliContext, iu_id, criterion, level):
    """Composite if one criterion of the latest revision were re-scored."""
    with obj.open_store(writable=False) as store:
        latest = store.latest_score(iu_id)
        if latest is None:
            click.echo(f"error: {iu_id} has no revisions to explore", err=True)
            sys.exit(1)
        new, delta = rubric.whatif_delta(latest.card, criterion, level)
    obj.emit(
        {
            "iu_id": iu_id,
            "criterion": rubric.coerce_criterion(criterion).value,
            "level": level,
            "composite": new.value,
            "raw_sum": new.raw_sum,
            "delta": delta,
        },
        f"{iu_id} with {criterion}={level}: composite {new.value} ({delta:+d})",
    )


@cli.command()
@click.option("--iu", "iu_id", required=True)
@click.pass_obj
@domain_errors
def tai(obj: CliContext, iu_id):
    """Apply the TAI-watch rule to an IU's latest revision."""
    with obj.open_store(writable=False) as store:
        record = store.get_iu(iu_id)
        latest = store.latest_score(iu_id)
        if latest is None:
            click.echo(f"error: {iu_id} has no revisions to assess", err=True)
            sys.exit(1)
        assessment = analysis.tai_flag(record, latest.card, obj.config.tai)
    obj.emit(
        {
            "iu_id": iu_id,
            "flagged": assessment.flagged,
            "reasons": list(assessment.reasons),
        },
        f"{iu_id}: {'FLAGGED' if assessment.flagged else 'not flagged'} "
        f"({assessment.reason})",
    )


@cli.command()
@click.argument("title")
@click.option("--iu", "iu_id", default=None, help="Apply to this IU id instead of the title slug.")
@click.option("--mode", default="live", type=click.Choice(["live", "fixture"]))
@click.option("--refresh", is_flag=True, help="Skip the cache and fetch anew.")
@click.pass_obj
@domain_errors
def ingest(obj: CliContext, title, iu_id, mode, refresh):
    """Fetch a page summary and store it as an IU's description."""
    client = SummaryClient(obj.ingestion_config(refresh=refresh))
    fetch = client.fetch_summary(title, mode=mode)
    target_id = iu_id or slugify(fetch.resolved_title)
    source = "wikipedia-live" if mode == "live" else "wikipedia-fixture"
    with obj.open_store(writable=True) as store:
        try:
            existing = store.get_iu(target_id)
            record = replace(existing, description=fetch.extract, description_source=source)
        except RegistryError:
            record = IURecord(
                id=target_id,
                name=fetch.resolved_title,
                description=fetch.extract,
                description_source=source,
            )
        stored = store.upsert_iu(record)
    obj.emit(
        {"iu": {k: v for k, v in stored.to_wire().items() if k != "kind"},
         "fetch": fetch.to_wire()},
        f"{stored.id}: description from {fetch.resolved_title!r} "
        f"({fetch.source}, {len(fetch.extract)} chars)",
    )


@cli.command()
@click.option(
    "--out",
    "destination",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Dataset file to write (plus <out>.schema.json sidecar).",
)
@click.pass_obj
@domain_errors
def export(obj: CliContext, destination):
    """Export scored, described IUs as line-delimited training rows."""
    with obj.open_store(writable=False) as store:
        count = export_dataset(store, destination)
    obj.emit(
        {"rows": count, "path": str(destination)},
        f"wrote {count} rows to {destination}",
    )


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.pass_obj
@domain_errors
def serve(obj: CliContext, host, port):
    """Run the HTTP service (holds the store writer lock while running)."""
    from .service import serve as run_service

    run_service(obj.store_path, obj.config, host=host, port=port)


def main():
    cli()


if __name__ == "__main__":
    main()
