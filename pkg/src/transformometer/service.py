"""HTTP facade over the rubric, registry, ingestion, and analysis modules.

All domain work happens in those modules; handlers translate between
HTTP and domain calls, and every payload mirrors the registry's record
schema (same field names) so there is no second data model. Mutations
are validated before anything is written: a 4xx response implies zero
store change.
"""

from __future__ import annotations

import json
from contextlib import asynccontextmanager
from dataclasses import asdict, dataclass, replace

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import analysis, ingestion, rubric
from .config import AppConfig
from .ingestion import (
    NetworkError,
    PageNotFoundError,
    RateLimitedError,
    SummaryClient,
)
from .registry import (
    InvalidRecordError,
    IURecord,
    Store,
    UnknownIUError,
    slugify,
)
from .rubric import (
    InvalidScoreCardError,
    LevelOutOfRangeError,
    ScoreCard,
    UnknownCriterionError,
)

STATUS_BY_CODE = {
    "invalid_input": 422,
    "not_found": 404,
    "conflict": 409,
    "upstream_unavailable": 502,
    "internal": 500,
}


@dataclass(frozen=True)
class ApiError:
    """Wire-level error envelope; code maps 1:1 to an HTTP status."""

    code: str
    message: str
    details: list[str] | None = None

    @property
    def status(self) -> int:
        return STATUS_BY_CODE[self.code]

    def response(self) -> JSONResponse:
        body = {"code": self.code, "message": self.message}
        if self.details is not None:
            body["details"] = self.details
        return JSONResponse(status_code=self.status, content={"error": body})


class ConflictError(Exception):
    """Optimistic-concurrency failure: someone else committed first."""


class IUIn(BaseModel):
    id: str
    name: str
    description: str = ""
    description_source: str = "manual"
    tags: list[str] = []


class RevisionIn(BaseModel):
    scores: dict
    note: str = ""
    # Clients may send the revision_no their draft was based on; a
    # mismatch with the current head is rejected as a conflict.
    parent_revision_no: int | None = None


def _iu_payload(record: IURecord) -> dict:
    payload = record.to_wire()
    payload.pop("kind")
    return payload


def _revision_payload(revision) -> dict:
    payload = revision.to_wire()
    payload.pop("kind")
    return payload


def create_app(store: Store, config: AppConfig | None = None) -> FastAPI:
    """Build the service around an already-open writable store.

    The caller owns opening the store (and therefore the writer lock);
    the app closes it on shutdown.
    """
    config = config or AppConfig.defaults()
    client = SummaryClient(config.ingestion)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        try:
            yield
        finally:
            store.close()

    app = FastAPI(title="transformometer", lifespan=lifespan)

    # -- error translation ----------------------------------------------

    @app.exception_handler(RequestValidationError)
    async def on_request_validation(request: Request, exc: RequestValidationError):
        details = [
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
            for err in exc.errors()
        ]
        return ApiError("invalid_input", "malformed request", details).response()

    @app.exception_handler(InvalidScoreCardError)
    async def on_invalid_card(request: Request, exc: InvalidScoreCardError):
        return ApiError("invalid_input", "invalid scorecard", exc.violations).response()

    @app.exception_handler(InvalidRecordError)
    async def on_invalid_record(request: Request, exc: InvalidRecordError):
        return ApiError("invalid_input", "invalid IU record", exc.violations).response()

    @app.exception_handler(UnknownCriterionError)
    async def on_unknown_criterion(request: Request, exc: UnknownCriterionError):
        return ApiError("invalid_input", str(exc)).response()

    @app.exception_handler(LevelOutOfRangeError)
    async def on_bad_level(request: Request, exc: LevelOutOfRangeError):
        return ApiError("invalid_input", str(exc)).response()

    @app.exception_handler(UnknownIUError)
    async def on_unknown_iu(request: Request, exc: UnknownIUError):
        return ApiError("not_found", str(exc)).response()

    @app.exception_handler(PageNotFoundError)
    async def on_page_not_found(request: Request, exc: PageNotFoundError):
        return ApiError("not_found", str(exc)).response()

    @app.exception_handler(ConflictError)
    async def on_conflict(request: Request, exc: ConflictError):
        return ApiError("conflict", str(exc)).response()

    @app.exception_handler(NetworkError)
    async def on_network_error(request: Request, exc: NetworkError):
        return ApiError("upstream_unavailable", str(exc)).response()

    @app.exception_handler(RateLimitedError)
    async def on_rate_limited(request: Request, exc: RateLimitedError):
        return ApiError("upstream_unavailable", str(exc)).response()

    @app.exception_handler(Exception)
    async def on_internal(request: Request, exc: Exception):
        return ApiError("internal", f"{type(exc).__name__}: {exc}").response()

    # -- endpoints -------------------------------------------------------

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.get("/criteria")
    async def criteria():
        return {
            "criteria": [
                {
                    "key": criterion.value,
                    "name": criterion.display_name,
                    "anchors": list(criterion.anchors),
                }
                for criterion in rubric.CRITERIA
            ]
        }

    @app.get("/ius")
    async def list_ius(limit: int = Query(default=100, ge=1), offset: int = Query(default=0, ge=0)):
        records = store.ius()[offset : offset + limit]
        return {"ius": [_iu_payload(r) for r in records]}

    @app.post("/ius", status_code=201)
    async def upsert_iu(body: IUIn):
        record = IURecord(
            id=body.id,
            name=body.name,
            description=body.description,
            description_source=body.description_source,
            tags=frozenset(body.tags),
        )
        stored = store.upsert_iu(record)
        return _iu_payload(stored)

    @app.get("/ius/{iu_id}")
    async def get_iu(iu_id: str):
        return _iu_payload(store.get_iu(iu_id))

    @app.get("/ius/{iu_id}/revisions")
    async def list_revisions(iu_id: str):
        return {"revisions": [_revision_payload(r) for r in store.history(iu_id)]}

    @app.post("/ius/{iu_id}/revisions", status_code=201)
    async def append_revision(iu_id: str, body: RevisionIn):
        store.get_iu(iu_id)  # 404 before any parsing
        card = ScoreCard.from_wire(body.scores)
        violations = rubric.validate_scorecard(card)
        if violations:
            raise InvalidScoreCardError(violations)
        if body.parent_revision_no is not None:
            latest = store.latest_score(iu_id)
            head = latest.revision_no if latest else 0
            if body.parent_revision_no != head:
                raise ConflictError(
                    f"draft was based on revision {body.parent_revision_no}, "
                    f"but the current head is {head}; reload and retry"
                )
        revision = store.append_revision(iu_id, card, note=body.note)
        return _revision_payload(revision)

    @app.get("/rank")
    async def rank():
        return {
            "rank": [
                {"iu_id": iu_id, "composite": value} for iu_id, value in store.rank()
            ]
        }

    @app.get("/ius/{iu_id}/whatif")
    async def whatif(
        iu_id: str,
        criterion: list[str] = Query(...),
        level: list[int] = Query(...),
    ):
        # criterion/level repeat pairwise, so a client can preview a full
        # draft (up to all six levels substituted) in one request and
        # never computes the composite itself
        if len(criterion) != len(level):
            return ApiError(
                "invalid_input",
                f"got {len(criterion)} criterion values but {len(level)} levels",
            ).response()
        latest = store.latest_score(iu_id)
        if latest is None:
            raise UnknownIUError(f"{iu_id} has no revisions to explore")
        card = latest.card
        for crit, lvl in zip(criterion, level):
            if not isinstance(lvl, int) or not 1 <= lvl <= 5:
                raise LevelOutOfRangeError(lvl)
            card = card.with_level(rubric.coerce_criterion(crit), lvl)
        new = rubric.composite(card)
        return {
            "iu_id": iu_id,
            "criterion": rubric.coerce_criterion(criterion[0]).value,
            "level": level[0],
            "substitutions": [
                {"criterion": rubric.coerce_criterion(c).value, "level": l}
                for c, l in zip(criterion, level)
            ],
            "composite": new.value,
            "raw_sum": new.raw_sum,
            "delta": new.value - latest.composite.value,
            "base_revision_no": latest.revision_no,
            "base_composite": latest.composite.value,
        }

    @app.get("/ius/{iu_id}/tai")
    async def tai(iu_id: str):
        record = store.get_iu(iu_id)
        latest = store.latest_score(iu_id)
        if latest is None:
            raise UnknownIUError(f"{iu_id} has no revisions to assess")
        assessment = analysis.tai_flag(record, latest.card, config.tai)
        return {
            "iu_id": iu_id,
            "flagged": assessment.flagged,
            "reasons": list(assessment.reasons),
            "reason": assessment.reason,
            "config": asdict(config.tai),
        }

    @app.post("/ingest/{title}")
    async def ingest(title: str, mode: str = "live", iu_id: str | None = None):
        if mode not in ("live", "fixture"):
            return ApiError(
                "invalid_input", f"mode must be 'live' or 'fixture', got {mode!r}"
            ).response()
        fetch = client.fetch_summary(title, mode=mode)
        target_id = iu_id or slugify(fetch.resolved_title)
        source = "wikipedia-live" if mode == "live" else "wikipedia-fixture"
        try:
            existing = store.get_iu(target_id)
            record = replace(
                existing, description=fetch.extract, description_source=source
            )
        except UnknownIUError:
            record = IURecord(
                id=target_id,
                name=fetch.resolved_title,
                description=fetch.extract,
                description_source=source,
            )
        stored = store.upsert_iu(record)
        return {"iu": _iu_payload(stored), "fetch": fetch.to_wire()}

    @app.get("/export/dataset")
    async def export_dataset():
        body = "".join(
            json.dumps(row, ensure_ascii=False) + "\n"
            for row in ingestion.dataset_rows(store)
        )
        return PlainTextResponse(body, media_type="application/x-ndjson")

    return app


def serve(
    store_path,
    config: AppConfig | None = None,
    host: str = "127.0.0.1",
    port: int = 8000,
):
    """Open the store (failing fast if the writer lock is held) and serve.

    Runs until terminated; the store lock is released on shutdown.
    """
    import uvicorn

    store = Store(store_path, writable=True)  # raises StoreLockHeldError
    app = create_app(store, config)
    uvicorn.run(app, host=host, port=port, log_level="info")
