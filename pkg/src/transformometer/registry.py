"""Persistent, revision-tracked registry of IUs and their scorecards.

The store is one append-only UTF-8 file of line-delimited JSON records.
Two record kinds share the file, distinguished by a "kind" field:

    {"kind": "iu", "id", "name", "description", "description_source",
     "created_at", "tags": [...]}
    {"kind": "revision", "iu_id", "revision_no",
     "scores": {criterion: {"level", "rationale"}},
     "composite", "raw_sum", "recorded_at", "note"}

Scores are always recomputed on load and checked against the stored
composite; a mismatch means the file was tampered with or corrupted and
loading fails loudly. Revisions are never rewritten: an IU's history
only ever grows.

Concurrency contract: one writer session per store at a time, enforced
with an exclusive lock file next to the store. Readers take no lock and
see a consistent snapshot as of open.
"""

from __future__ import annotations

import json
import os
import re
import unicodedata
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

from filelock import FileLock, Timeout

from . import rubric
from .rubric import CompositeScore, ScoreCard

SLUG_RE = re.compile(r"^[a-z0-9]+(?:-[a-z0-9]+)*$")

DESCRIPTION_SOURCES = ("manual", "wikipedia-fixture", "wikipedia-live")


class RegistryError(Exception):
    """Base class for registry failures."""


class InvalidRecordError(RegistryError):
    def __init__(self, violations: list[str]):
        super().__init__("invalid IU record: " + "; ".join(violations))
        self.violations = violations


class UnknownIUError(RegistryError):
    def __init__(self, iu_id: str):
        super().__init__(f"unknown IU: {iu_id!r}")
        self.iu_id = iu_id


class StoreLockHeldError(RegistryError):
    def __init__(self, path: Path):
        super().__init__(
            f"store lock is held by another writer: {path} "
            "(is the service running?)"
        )
        self.path = path


class CorruptStoreError(RegistryError):
    """A persisted record fails parsing or the recompute-on-load check."""


def utc_now() -> str:
    """Current UTC time as sortable ISO-8601 text, second precision."""
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def slugify(text: str) -> str:
    """Lowercase, ASCII-fold, and hyphen-join a title into the id slug class."""
    folded = (
        unicodedata.normalize("NFKD", text).encode("ascii", "ignore").decode("ascii")
    )
    slug = re.sub(r"[^a-z0-9]+", "-", folded.lower()).strip("-")
    return slug


@dataclass(frozen=True)
class IURecord:
    """A named Innovation Unit with identity, description, and provenance."""

    id: str
    name: str
    description: str = ""
    description_source: str = "manual"
    created_at: str = ""  # assigned by the store on first insert
    tags: frozenset[str] = field(default_factory=frozenset)

    def validate(self) -> list[str]:
        violations = []
        if not self.id:
            violations.append("id must be non-empty")
        elif not SLUG_RE.match(self.id):
            violations.append(
                f"id must be a lowercase hyphen-separated slug, got {self.id!r}"
            )
        if not self.name:
            violations.append("name must be non-empty")
        if self.description_source not in DESCRIPTION_SOURCES:
            violations.append(
                f"description_source must be one of {DESCRIPTION_SOURCES}, "
                f"got {self.description_source!r}"
            )
        return violations

    def to_wire(self) -> dict:
        return {
            "kind": "iu",
            "id": self.id,
            "name": self.name,
            "description": self.description,
            "description_source": self.description_source,
            "created_at": self.created_at,
            "tags": sorted(self.tags),
        }

    @classmethod
    def from_wire(cls, record: dict) -> "IURecord":
        return cls(
            id=record["id"],
            name=record["name"],
            description=record.get("description", ""),
            description_source=record.get("description_source", "manual"),
            created_at=record.get("created_at", ""),
            tags=frozenset(record.get("tags", [])),
        )


@dataclass(frozen=True)
class ScoreRevision:
    """One committed scorecard in an IU's append-only history."""

    iu_id: str
    revision_no: int
    card: ScoreCard
    composite: CompositeScore
    recorded_at: str
    note: str = ""

    def to_wire(self) -> dict:
        return {
            "kind": "revision",
            "iu_id": self.iu_id,
            "revision_no": self.revision_no,
            "scores": self.card.to_wire(),
            "composite": self.composite.value,
            "raw_sum": self.composite.raw_sum,
            "recorded_at": self.recorded_at,
            "note": self.note,
        }

    @classmethod
    def from_wire(cls, record: dict) -> "ScoreRevision":
        card = ScoreCard.from_wire(record["scores"])
        return cls(
            iu_id=record["iu_id"],
            revision_no=record["revision_no"],
            card=card,
            composite=CompositeScore(
                value=record["composite"], raw_sum=record["raw_sum"]
            ),
            recorded_at=record.get("recorded_at", ""),
            note=record.get("note", ""),
        )


class Store:
    """Append-only registry backed by one line-delimited file.

    Open writable (the default) to mutate; this takes the exclusive
    writer lock for the lifetime of the store. Open with writable=False
    for a lock-free read-only snapshot.
    """

    def __init__(self, path: str | Path, writable: bool = True):
        self.path = Path(path)
        self.writable = writable
        self._ius: dict[str, IURecord] = {}
        self._revisions: dict[str, list[ScoreRevision]] = {}
        self._fh = None
        self._lock = None

        if writable:
            # thread_local=False: the store may be opened and closed on
            # different threads (the service closes it from the event loop)
            lock = FileLock(str(self.path) + ".lock", thread_local=False)
            try:
                lock.acquire(timeout=0)
            except Timeout:
                raise StoreLockHeldError(self.path) from None
            self._lock = lock

        try:
            if not self.path.exists():
                if not writable:
                    raise FileNotFoundError(f"store file not found: {self.path}")
                self.path.touch()
            self._replay()
            if writable:
                self._fh = open(self.path, "a", encoding="utf-8")
        except BaseException:
            self._release_lock()
            raise

    @classmethod
    def create(cls, path: str | Path) -> "Store":
        """Create the store file (and parent directories) and open it writable."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.touch()
        return cls(path, writable=True)

    # -- lifecycle -----------------------------------------------------

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None
        self._release_lock()

    def _release_lock(self) -> None:
        if self._lock is not None:
            self._lock.release()
            self._lock = None

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- persistence ---------------------------------------------------

    def _replay(self) -> None:
        data = self.path.read_bytes()
        if not data:
            return
        lines = data.split(b"\n")
        # A final chunk without its terminating newline is a torn append
        # from an interrupted writer: the write never completed, so the
        # record is treated as absent. A writer truncates it away so the
        # next append starts on a clean line.
        tail = lines.pop()
        if tail and self.writable:
            with open(self.path, "r+b") as fh:
                fh.truncate(len(data) - len(tail))
        for line_no, raw in enumerate(lines, start=1):
            if not raw:
                continue
            try:
                record = json.loads(raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise CorruptStoreError(
                    f"{self.path}:{line_no}: unparseable record: {exc}"
                ) from None
            self._apply(record, line_no)

    def _apply(self, record: dict, line_no: int) -> None:
        kind = record.get("kind")
        if kind == "iu":
            iu = IURecord.from_wire(record)
            violations = iu.validate()
            if violations:
                raise CorruptStoreError(
                    f"{self.path}:{line_no}: invalid iu record: "
                    + "; ".join(violations)
                )
            existing = self._ius.get(iu.id)
            if existing is not None:
                iu = replace(iu, created_at=existing.created_at)
            self._ius[iu.id] = iu
            self._revisions.setdefault(iu.id, [])
        elif kind == "revision":
            try:
                revision = ScoreRevision.from_wire(record)
            except (KeyError, rubric.InvalidScoreCardError) as exc:
                raise CorruptStoreError(
                    f"{self.path}:{line_no}: malformed revision: {exc}"
                ) from None
            history = self._revisions.get(revision.iu_id)
            if history is None:
                raise CorruptStoreError(
                    f"{self.path}:{line_no}: revision for unknown IU "
                    f"{revision.iu_id!r}"
                )
            expected_no = len(history) + 1
            if revision.revision_no != expected_no:
                raise CorruptStoreError(
                    f"{self.path}:{line_no}: revision_no {revision.revision_no} "
                    f"breaks the contiguous sequence (expected {expected_no})"
                )
            recomputed = rubric.composite(revision.card)
            if recomputed != revision.composite:
                raise CorruptStoreError(
                    f"{self.path}:{line_no}: stored composite "
                    f"{revision.composite.value} (raw_sum "
                    f"{revision.composite.raw_sum}) does not match recomputed "
                    f"{recomputed.value} (raw_sum {recomputed.raw_sum})"
                )
            history.append(revision)
        else:
            raise CorruptStoreError(
                f"{self.path}:{line_no}: unknown record kind {kind!r}"
            )

    def _append_line(self, record: dict) -> None:
        if self._fh is None:
            raise RegistryError("store is not open for writing")
        self._fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())

    # -- operations ----------------------------------------------------

    def upsert_iu(self, record: IURecord) -> IURecord:
        """Insert a new IU, or update an existing one's mutable fields.

        Mutable fields are name, description, description_source, and
        tags; identity and revision history are never touched. Returns
        the stored record.
        """
        violations = record.validate()
        if violations:
            raise InvalidRecordError(violations)
        existing = self._ius.get(record.id)
        if existing is None:
            stored = replace(record, created_at=record.created_at or utc_now())
        else:
            stored = replace(record, created_at=existing.created_at)
        self._append_line(stored.to_wire())
        self._ius[stored.id] = stored
        self._revisions.setdefault(stored.id, [])
        return stored

    def append_revision(
        self, iu_id: str, card: ScoreCard, note: str = ""
    ) -> ScoreRevision:
        """Append the next revision for an IU; the composite is computed here.

        The record is durably on disk (flushed and fsynced) before this
        returns.
        """
        if iu_id not in self._ius:
            raise UnknownIUError(iu_id)
        comp = rubric.composite(card)  # raises InvalidScoreCardError
        history = self._revisions[iu_id]
        revision = ScoreRevision(
            iu_id=iu_id,
            revision_no=len(history) + 1,
            card=card,
            composite=comp,
            recorded_at=utc_now(),
            note=note,
        )
        self._append_line(revision.to_wire())
        history.append(revision)
        return revision

    def get_iu(self, iu_id: str) -> IURecord:
        try:
            return self._ius[iu_id]
        except KeyError:
            raise UnknownIUError(iu_id) from None

    def ius(self) -> list[IURecord]:
        """All IU records, ascending by id."""
        return [self._ius[iu_id] for iu_id in sorted(self._ius)]

    def latest_score(self, iu_id: str) -> ScoreRevision | None:
        """The highest-numbered revision, or None if never scored."""
        if iu_id not in self._ius:
            raise UnknownIUError(iu_id)
        history = self._revisions[iu_id]
        return history[-1] if history else None

    def history(self, iu_id: str) -> list[ScoreRevision]:
        """All revisions in ascending revision_no."""
        if iu_id not in self._ius:
            raise UnknownIUError(iu_id)
        return list(self._revisions[iu_id])

    def rank(self) -> list[tuple[str, int]]:
        """Scored IUs as (iu_id, latest composite), best first.

        Descending composite, ties broken by ascending id; IUs without
        revisions are excluded.
        """
        entries = [
            (iu_id, history[-1].composite.value)
            for iu_id, history in self._revisions.items()
            if history
        ]
        entries.sort(key=lambda item: (-item[1], item[0]))
        return entries
