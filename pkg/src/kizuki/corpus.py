"""Acquire HTML pages and keep them in an append-only JSONL snapshot store.

Fetching is static: the body is downloaded as-is and scripts never run,
so content generated client-side is invisible to every later stage.
"""

from __future__ import annotations

import base64
import codecs
import json
import logging
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator, Optional
from urllib.parse import urlparse

import requests

logger = logging.getLogger(__name__)

STORE_ENV = "KIZUKI_STORE"
STORE_FILE = "snapshots.jsonl"
MAX_REDIRECTS = 5


class CorpusError(Exception):
    pass


class InvalidURLError(CorpusError, ValueError):
    pass


class FetchError(CorpusError):
    retriable = False


class NetworkError(FetchError):
    retriable = True


class FetchTimeout(NetworkError):
    pass


class TruncationError(FetchError):
    """Body exceeded ``FetchConfig.max_bytes``."""


class EncodingError(CorpusError):
    pass


@dataclass(frozen=True)
class SnapshotMeta:
    url: str
    fetched_at: datetime
    http_status: Optional[int]
    content_length: int
    target_language: str
    country_tag: str = ""

    def __post_init__(self):
        if not self.url:
            raise ValueError("url must be non-empty")
        if self.http_status is not None and not 100 <= self.http_status <= 599:
            raise ValueError(f"http_status out of range: {self.http_status}")


@dataclass(frozen=True)
class PageSnapshot:
    """A loaded document. ``raw_html`` is always UTF-8."""

    meta: SnapshotMeta
    raw_html: bytes
    declared_lang: Optional[str] = None

    @property
    def url(self) -> str:
        return self.meta.url

    @property
    def text(self) -> str:
        return self.raw_html.decode("utf-8")


@dataclass(frozen=True)
class FetchConfig:
    timeout: float = 20.0
    user_agent: str = "kizuki/0.1 (+static accessibility audit)"
    max_bytes: int = 10 * 1024 * 1024


_META_CHARSET = re.compile(rb"""<meta[^>]+charset\s*=\s*["']?\s*([A-Za-z0-9_.:-]+)""", re.I)
_HTML_LANG = re.compile(r"""<html\b[^>]*?\blang\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s>]+))""", re.I)


def _try_decode(data: bytes, charset: Optional[str]) -> Optional[str]:
    if not charset:
        return None
    try:
        codecs.lookup(charset)
        return data.decode(charset)
    except (LookupError, UnicodeDecodeError):
        return None


def decode_html(data: bytes, http_charset: Optional[str] = None, lossy: bool = True) -> str:
    """HTTP charset, then a ``<meta charset>`` in the first 1024 bytes, then UTF-8."""
    text = _try_decode(data, http_charset)
    if text is None:
        m = _META_CHARSET.search(data[:1024])
        text = _try_decode(data, m.group(1).decode("ascii") if m else None)
    if text is None:
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            if not lossy:
                raise EncodingError(str(exc)) from exc
            text = data.decode("utf-8", errors="replace")
    return text.lstrip("\ufeff")


def sniff_declared_lang(text: str) -> Optional[str]:
    m = _HTML_LANG.search(text)
    if not m:
        return None
    return next(g for g in m.groups() if g is not None)


def make_snapshot(
    url: str,
    html: str,
    target_language: str,
    http_status: Optional[int] = None,
    country_tag: str = "",
    fetched_at: Optional[datetime] = None,
) -> PageSnapshot:
    raw = html.encode("utf-8")
    meta = SnapshotMeta(
        url=url,
        fetched_at=fetched_at or datetime.now(timezone.utc),
        http_status=http_status,
        content_length=len(raw),
        target_language=target_language,
        country_tag=country_tag,
    )
    return PageSnapshot(meta=meta, raw_html=raw, declared_lang=sniff_declared_lang(html))


def _check_url(url: str) -> None:
    parsed = urlparse(url)
    if parsed.scheme not in ("http", "https") or not parsed.netloc or " " in url:
        raise InvalidURLError(f"not an http(s) URL: {url!r}")


def fetch_page(
    url: str,
    config: FetchConfig = FetchConfig(),
    target_language: str = "",
    country_tag: str = "",
    session: Optional[requests.Session] = None,
) -> PageSnapshot:
    """Download one page. Error statuses still produce a snapshot."""
    _check_url(url)
    sess = session or requests.Session()
    sess.max_redirects = MAX_REDIRECTS
    try:
        resp = sess.get(
            url,
            timeout=config.timeout,
            headers={"User-Agent": config.user_agent},
            stream=True,
            allow_redirects=True,
        )
        try:
            body = bytearray()
            for chunk in resp.iter_content(64 * 1024):
                body.extend(chunk)
                if len(body) > config.max_bytes:
                    raise TruncationError(f"{url}: body exceeds {config.max_bytes} bytes")
        finally:
            resp.close()
    except requests.Timeout as exc:
        raise FetchTimeout(f"{url}: {exc}") from exc
    except requests.ConnectionError as exc:
        raise NetworkError(f"{url}: {exc}") from exc
    except requests.TooManyRedirects as exc:
        raise FetchError(f"{url}: more than {MAX_REDIRECTS} redirects") from exc
    finally:
        if session is None:
            sess.close()

    html = decode_html(bytes(body), resp.encoding if "charset" in resp.headers.get("content-type", "").lower() else None)
    return make_snapshot(url, html, target_language, resp.status_code, country_tag)


def fetch_many(
    urls: Iterable[str],
    config: FetchConfig = FetchConfig(),
    target_language: str = "",
    country_tag: str = "",
    jobs: int = 1,
) -> list[PageSnapshot | FetchError | InvalidURLError]:
    """Fetch in parallel; results keep the input order."""

    def one(url):
        try:
            return fetch_page(url, config, target_language, country_tag)
        except (FetchError, InvalidURLError) as exc:
            logger.warning("fetch failed: %s", exc)
            return exc

    urls = list(urls)
    if jobs <= 1:
        return [one(u) for u in urls]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, urls))


def load_page(
    path: str | Path, target_language: str = "", country_tag: str = "", lossy: bool = True
) -> PageSnapshot:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(str(path))
    html = decode_html(path.read_bytes(), lossy=lossy)
    return make_snapshot(str(path), html, target_language, None, country_tag)


def snapshot_to_record(snapshot: PageSnapshot, record_id: int) -> dict:
    m = snapshot.meta
    return {
        "id": record_id,
        "url": m.url,
        "fetched_at": m.fetched_at.isoformat(),
        "http_status": m.http_status,
        "target_language": m.target_language,
        "country_tag": m.country_tag,
        "declared_lang": snapshot.declared_lang,
        "html_b64": base64.b64encode(snapshot.raw_html).decode("ascii"),
    }


def snapshot_from_record(rec: dict) -> PageSnapshot:
    raw = base64.b64decode(rec["html_b64"], validate=True)
    meta = SnapshotMeta(
        url=rec["url"],
        fetched_at=datetime.fromisoformat(rec["fetched_at"]),
        http_status=rec["http_status"],
        content_length=len(raw),
        target_language=rec["target_language"],
        country_tag=rec.get("country_tag", ""),
    )
    return PageSnapshot(meta=meta, raw_html=raw, declared_lang=rec.get("declared_lang"))


def default_store_dir() -> Path:
    return Path(os.environ.get(STORE_ENV, "kizuki-store"))


@dataclass
class SnapshotStore:
    """Single-writer JSONL store. Ids increase by one per stored snapshot."""

    store_dir: Path
    corrupt_lines: int = field(default=0, init=False)
    _next_id: Optional[int] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.store_dir = Path(self.store_dir)

    @property
    def path(self) -> Path:
        return self.store_dir / STORE_FILE

    def _last_id(self) -> int:
        last = 0
        if self.path.exists():
            with open(self.path, encoding="utf-8") as f:
                for line in f:
                    try:
                        last = max(last, int(json.loads(line)["id"]))
                    except (ValueError, KeyError, TypeError):
                        continue
        return last

    def append(self, snapshot: PageSnapshot) -> int:
        self.store_dir.mkdir(parents=True, exist_ok=True)
        if self._next_id is None:
            self._next_id = self._last_id() + 1
        record_id = self._next_id
        self._next_id += 1
        line = json.dumps(snapshot_to_record(snapshot, record_id), ensure_ascii=False)
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(line + "\n")
        return record_id

    def __iter__(self) -> Iterator[PageSnapshot]:
        self.corrupt_lines = 0
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8", errors="replace") as f:
            for lineno, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    yield snapshot_from_record(json.loads(line))
                except (ValueError, KeyError, TypeError) as exc:
                    self.corrupt_lines += 1
                    logger.warning("%s:%d: skipping corrupt record (%s)", self.path, lineno, exc)


def store_snapshot(snapshot: PageSnapshot, store_dir: str | Path) -> int:
    return SnapshotStore(Path(store_dir)).append(snapshot)


def iterate_snapshots(store_dir: str | Path) -> Iterator[PageSnapshot]:
    return iter(SnapshotStore(Path(store_dir)))
