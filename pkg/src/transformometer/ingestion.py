"""Wikipedia summary ingestion and ML dataset export.

IU descriptions come from the structured page-summary endpoint
(GET {base_url}/api/rest_v1/page/summary/{title}) rather than HTML
scraping: the target is the description text, and the summary endpoint
is a stable, polite contract for it. A page with no entry fails the
relevance bar and surfaces as PageNotFoundError.

Fixture mode reads fixtures/{slug}.txt instead of the network and is
byte-deterministic, which is what the test suite runs against. Fetches
in either mode can be cached on disk, keyed by resolved title; cache
hits come back with source="cache".

export_dataset turns every scored-and-described IU into one training
row (description in, six levels plus composite out), line-delimited,
with a sidecar schema file documenting the column order.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import quote

import requests

from .registry import Store, slugify, utc_now
from .rubric import CRITERIA

logger = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://en.wikipedia.org"
SUMMARY_PATH = "/api/rest_v1/page/summary/"
DEFAULT_USER_AGENT = (
    "transformometer/0.1 (innovation-impact scoring dataset builder; "
    "contact: configure ingestion.user_agent)"
)

DATASET_FIELDS: tuple[str, ...] = (
    "iu_id",
    "description",
    *(c.value for c in CRITERIA),
    "composite",
)


class IngestionError(Exception):
    """Base class for ingestion failures."""


class PageNotFoundError(IngestionError):
    """The page has no entry (or no usable extract)."""


class NetworkError(IngestionError):
    """Transient transport or upstream failure, retries exhausted."""


class RateLimitedError(IngestionError):
    """Upstream kept answering 429 until backoff was exhausted."""


class DatasetWriteError(IngestionError):
    """The export destination could not be written."""


@dataclass(frozen=True)
class FetchResult:
    """One fetched description: requested and canonical titles plus extract."""

    title: str
    resolved_title: str
    extract: str
    fetched_at: str
    source: str  # live | fixture | cache

    def to_wire(self) -> dict:
        return {
            "title": self.title,
            "resolved_title": self.resolved_title,
            "extract": self.extract,
            "fetched_at": self.fetched_at,
            "source": self.source,
        }


@dataclass(frozen=True)
class IngestionConfig:
    base_url: str = DEFAULT_BASE_URL
    user_agent: str = DEFAULT_USER_AGENT
    fixture_dir: Path | None = None
    cache_dir: Path | None = None
    rate_per_sec: float = 1.0
    burst: int = 5
    max_retries: int = 3
    backoff_initial: float = 0.5
    parallelism: int = 4
    refresh: bool = False  # skip cache reads, still writes


class TokenBucket:
    """Blocking token bucket shared by all concurrent fetchers."""

    def __init__(self, rate_per_sec: float, burst: int):
        self.rate = rate_per_sec
        self.capacity = float(burst)
        self._tokens = float(burst)
        self._updated = time.monotonic()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = time.monotonic()
                self._tokens = min(
                    self.capacity, self._tokens + (now - self._updated) * self.rate
                )
                self._updated = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self.rate
            time.sleep(wait)


class SummaryClient:
    """Summary fetcher with fixture mode, disk cache, and rate limiting."""

    def __init__(self, config: IngestionConfig | None = None):
        self.config = config or IngestionConfig()
        self._bucket = TokenBucket(self.config.rate_per_sec, self.config.burst)
        self._session = requests.Session()
        self._session.headers["User-Agent"] = self.config.user_agent

    def fetch_summary(self, title: str, mode: str = "live") -> FetchResult:
        """Fetch one page summary; mode is "live" or "fixture".

        Raises PageNotFoundError when the page has no entry, NetworkError
        on exhausted transport retries, RateLimitedError on exhausted 429
        backoff.
        """
        if not title:
            raise ValueError("title must be non-empty")
        if mode not in ("live", "fixture"):
            raise ValueError(f"mode must be 'live' or 'fixture', got {mode!r}")

        if not self.config.refresh:
            cached = self._cache_read(slugify(title))
            if cached is not None:
                return cached

        if mode == "fixture":
            result = self._fetch_fixture(title)
        else:
            result = self._fetch_live(title)

        self._cache_write(result)
        return result

    def fetch_many(self, titles: list[str], mode: str = "live") -> list[FetchResult]:
        """Fetch several titles concurrently (bounded, shared rate limiter)."""
        workers = max(1, self.config.parallelism)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda t: self.fetch_summary(t, mode), titles))

    # -- fixture mode ----------------------------------------------------

    def _fetch_fixture(self, title: str) -> FetchResult:
        if self.config.fixture_dir is None:
            raise IngestionError("fixture mode requires a fixture directory")
        path = Path(self.config.fixture_dir) / f"{slugify(title)}.txt"
        if not path.exists():
            raise PageNotFoundError(f"no fixture for {title!r} at {path}")
        extract = path.read_text(encoding="utf-8").rstrip("\n")
        if not extract:
            raise PageNotFoundError(f"fixture for {title!r} is empty")
        return FetchResult(
            title=title,
            resolved_title=title,
            extract=extract,
            fetched_at=utc_now(),
            source="fixture",
        )

    # -- live mode -------------------------------------------------------

    def _fetch_live(self, title: str) -> FetchResult:
        url = (
            self.config.base_url.rstrip("/")
            + SUMMARY_PATH
            + quote(title.replace(" ", "_"), safe="")
        )
        attempts = self.config.max_retries + 1
        last_rate_limited = False
        last_error = "no attempt made"
        for attempt in range(attempts):
            if attempt:
                delay = self.config.backoff_initial * (2 ** (attempt - 1))
                logger.info("retrying %s in %.2fs (attempt %d)", url, delay, attempt + 1)
                time.sleep(delay)
            self._bucket.acquire()
            logger.info("GET %s", url)
            try:
                response = self._session.get(url, timeout=10)
            except requests.RequestException as exc:
                last_rate_limited = False
                last_error = str(exc)
                continue
            if response.status_code == 404:
                raise PageNotFoundError(f"no page summary for {title!r}")
            if response.status_code == 429:
                last_rate_limited = True
                last_error = "upstream answered 429"
                continue
            if response.status_code >= 500:
                last_rate_limited = False
                last_error = f"upstream answered {response.status_code}"
                continue
            try:
                payload = response.json()
            except ValueError:
                last_rate_limited = False
                last_error = "unparseable summary payload"
                continue
            extract = (payload.get("extract") or "").strip()
            if not extract:
                raise PageNotFoundError(f"page {title!r} has no usable extract")
            resolved = (
                payload.get("titles", {}).get("normalized")
                or payload.get("title")
                or title
            )
            return FetchResult(
                title=title,
                resolved_title=resolved,
                extract=extract,
                fetched_at=utc_now(),
                source="live",
            )
        if last_rate_limited:
            raise RateLimitedError(f"backoff exhausted fetching {title!r}: {last_error}")
        raise NetworkError(f"retries exhausted fetching {title!r}: {last_error}")

    # -- cache -----------------------------------------------------------

    def _cache_path(self, slug: str) -> Path | None:
        if self.config.cache_dir is None or not slug:
            return None
        return Path(self.config.cache_dir) / f"{slug}.json"

    def _cache_read(self, slug: str) -> FetchResult | None:
        path = self._cache_path(slug)
        if path is None or not path.exists():
            return None
        try:
            record = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return None
        return FetchResult(
            title=record["title"],
            resolved_title=record["resolved_title"],
            extract=record["extract"],
            fetched_at=record["fetched_at"],
            source="cache",
        )

    def _cache_write(self, result: FetchResult) -> None:
        if self.config.cache_dir is None:
            return
        # Key by resolved title; alias the requested title when a redirect
        # made them differ, so repeat requests hit the cache either way.
        slugs = {slugify(result.resolved_title), slugify(result.title)}
        payload = json.dumps(result.to_wire(), ensure_ascii=False)
        for slug in slugs:
            path = self._cache_path(slug)
            if path is None:
                continue
            path.parent.mkdir(parents=True, exist_ok=True)
            # temp-then-rename so concurrent fetchers never expose a
            # partially written entry
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.write(payload)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise


def dataset_rows(store: Store) -> list[dict]:
    """Training rows for every IU with a description and at least one revision.

    Ordered by iu_id ascending; one dict per row with DATASET_FIELDS as
    its key order. Rows are self-consistent: the composite column always
    matches the stored (recompute-checked) latest revision.
    """
    rows = []
    for iu in store.ius():
        if not iu.description:
            continue
        latest = store.latest_score(iu.id)
        if latest is None:
            continue
        row: dict = {"iu_id": iu.id, "description": iu.description}
        for criterion in CRITERIA:
            row[criterion.value] = latest.card.level(criterion)
        row["composite"] = latest.composite.value
        rows.append(row)
    return rows


def export_dataset(store: Store, destination: str | Path) -> int:
    """Write the dataset as line-delimited JSON rows; returns the row count.

    A sidecar schema file at <destination>.schema.json documents the
    fixed column order.
    """
    destination = Path(destination)
    rows = dataset_rows(store)
    schema = {
        "format": "jsonl",
        "fields": list(DATASET_FIELDS),
        "level_range": [1, 5],
        "composite_range": [20, 100],
    }
    try:
        destination.parent.mkdir(parents=True, exist_ok=True)
        with open(destination, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
        schema_path = destination.with_name(destination.name + ".schema.json")
        schema_path.write_text(
            json.dumps(schema, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise DatasetWriteError(f"cannot write dataset to {destination}: {exc}") from exc
    return len(rows)
