"""Bounded breadth-first web crawler with a persistent crawl table.

URLs are fetched in strict FIFO discovery order, each URL is enqueued
at most once, and every URL ever seen gets a crawl-table record whose
flag says whether it was actually fetched ('t') or merely discovered
('f').  Fetching is sequential, with an optional per-host politeness
delay.  HTML handling is a tolerant tag-stripper — enough to pull text
and anchor targets out of real-world markup without a DOM dependency.
"""

from __future__ import annotations

import logging
import time
import urllib.error
import urllib.request
from collections import deque
from dataclasses import dataclass, field
from html import unescape
from pathlib import Path
from typing import Callable
from urllib.parse import urldefrag, urljoin, urlsplit
from urllib.robotparser import RobotFileParser

import re

logger = logging.getLogger(__name__)

USER_AGENT = "ontosearch-crawler/0.1"

# A fetcher maps (url, timeout_ms) to (http_status, body_text).
Fetcher = Callable[[str, int], tuple[int, str]]

_COMMENT_RE = re.compile(r"<!--.*?-->", re.DOTALL)
_SCRIPT_STYLE_RE = re.compile(r"<(script|style)\b.*?</\1\s*>", re.DOTALL | re.IGNORECASE)
_ANCHOR_HREF_RE = re.compile(
    r"""<a\b[^>]*?\bhref\s*=\s*("([^"]*)"|'([^']*)'|([^\s>]+))""",
    re.IGNORECASE | re.DOTALL,
)
_TAG_RE = re.compile(r"<[^>]*>")


@dataclass
class CrawlRecord:
    serial: int
    url: str
    is_crawled: bool


@dataclass
class FetchedPage:
    url: str
    status: int
    extracted_text: str
    links: list[str]


@dataclass(frozen=True)
class CrawlConfig:
    seeds: tuple[str, ...]
    max_pages: int = 20
    same_host_only: bool = True
    delay_ms: int = 0
    timeout_ms: int = 5000
    obey_robots: bool = False

    def __post_init__(self) -> None:
        if not self.seeds:
            raise ValueError("at least one seed URL is required")
        if self.max_pages < 1:
            raise ValueError("max_pages must be >= 1")
        if self.delay_ms < 0:
            raise ValueError("delay_ms must be >= 0")
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be > 0")


def extract_text_and_links(html: str, base_url: str) -> tuple[str, list[str]]:
    """Best-effort text and absolute link extraction from HTML.

    Comments, scripts, and styles are removed; remaining tags are
    replaced with spaces and whitespace collapsed.  Links are anchor
    href values resolved against ``base_url``, fragments stripped,
    non-http(s) schemes dropped, duplicates removed keeping the first
    occurrence.
    """
    cleaned = _COMMENT_RE.sub(" ", html)
    cleaned = _SCRIPT_STYLE_RE.sub(" ", cleaned)
    links: list[str] = []
    seen: set[str] = set()
    for m in _ANCHOR_HREF_RE.finditer(cleaned):
        href = unescape((m.group(2) or m.group(3) or m.group(4) or "").strip())
        if not href:
            continue
        resolved, _ = urldefrag(urljoin(base_url, href))
        if urlsplit(resolved).scheme.lower() not in ("http", "https"):
            continue
        if resolved not in seen:
            seen.add(resolved)
            links.append(resolved)
    text = " ".join(unescape(_TAG_RE.sub(" ", cleaned)).split())
    return text, links


def default_fetch(url: str, timeout_ms: int) -> tuple[int, str]:
    """Fetch over urllib; HTTP errors become (status, "") results."""
    req = urllib.request.Request(url, headers={"User-Agent": USER_AGENT})
    try:
        with urllib.request.urlopen(req, timeout=timeout_ms / 1000) as resp:
            charset = resp.headers.get_content_charset() or "utf-8"
            return resp.status, resp.read().decode(charset, errors="replace")
    except urllib.error.HTTPError as err:
        return err.code, ""


def _normalize_seed(seed: str) -> str:
    url, _ = urldefrag(seed)
    parts = urlsplit(url)
    if parts.scheme.lower() not in ("http", "https") or not parts.netloc:
        raise ValueError(f"seed is not an absolute http(s) URL: {seed!r}")
    return url


def _robots_allow(
    cache: dict[str, RobotFileParser | None],
    url: str,
    fetch: Fetcher,
    timeout_ms: int,
) -> bool:
    parts = urlsplit(url)
    host = f"{parts.scheme}://{parts.netloc}"
    if host not in cache:
        try:
            status, body = fetch(f"{host}/robots.txt", timeout_ms)
        except Exception:
            status, body = 0, ""
        if 200 <= status < 300:
            parser = RobotFileParser()
            parser.parse(body.splitlines())
            cache[host] = parser
        else:
            cache[host] = None  # unreadable robots.txt: allow everything
    parser = cache[host]
    return parser is None or parser.can_fetch(USER_AGENT, url)


def crawl(config: CrawlConfig, fetch: Fetcher | None = None) -> tuple[list[FetchedPage], list[CrawlRecord]]:
    """Breadth-first crawl from the seeds, bounded by max_pages fetches.

    Returns the fetched pages in fetch order and the full crawl table in
    serial order (every discovered URL, fetched or not).
    """
    fetch = fetch or default_fetch
    records: dict[str, CrawlRecord] = {}
    frontier: deque[str] = deque()

    def admit(url: str) -> None:
        if url not in records:
            records[url] = CrawlRecord(serial=len(records) + 1, url=url, is_crawled=False)
            frontier.append(url)

    for seed in config.seeds:
        admit(_normalize_seed(seed))

    pages: list[FetchedPage] = []
    last_request: dict[str, float] = {}
    robots_cache: dict[str, RobotFileParser | None] = {}

    while frontier and len(pages) < config.max_pages:
        url = frontier.popleft()
        host = urlsplit(url).netloc
        if config.obey_robots and not _robots_allow(robots_cache, url, fetch, config.timeout_ms):
            logger.warning("robots.txt disallows %s", url)
            continue
        if config.delay_ms and host in last_request:
            remaining = config.delay_ms / 1000 - (time.monotonic() - last_request[host])
            if remaining > 0:
                time.sleep(remaining)
        last_request[host] = time.monotonic()
        try:
            status, body = fetch(url, config.timeout_ms)
        except Exception as exc:
            logger.warning("fetch failed for %s: %s", url, exc)
            continue
        if not 200 <= status < 300:
            logger.warning("fetch of %s returned status %d", url, status)
            continue
        text, links = extract_text_and_links(body, url)
        records[url].is_crawled = True
        pages.append(FetchedPage(url=url, status=status, extracted_text=text, links=links))
        for link in links:
            if config.same_host_only and urlsplit(link).netloc != host:
                continue
            admit(link)
    return pages, list(records.values())


def save_crawl_table(records: list[CrawlRecord], path: str | Path) -> None:
    """TSV with header ``serial<TAB>url<TAB>is_crawled``, flags 't'/'f'."""
    lines = ["serial\turl\tis_crawled"]
    for rec in records:
        lines.append(f"{rec.serial}\t{rec.url}\t{'t' if rec.is_crawled else 'f'}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_crawl_table(path: str | Path) -> list[CrawlRecord]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "serial\turl\tis_crawled":
        raise ValueError(f"{path}: missing crawl-table header")
    records: list[CrawlRecord] = []
    seen_urls: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 3 or parts[2] not in ("t", "f"):
            raise ValueError(f"{path}:{lineno}: expected serial<TAB>url<TAB>t|f")
        try:
            serial = int(parts[0])
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-integer serial") from None
        if serial != lineno - 1:
            raise ValueError(f"{path}:{lineno}: serial {serial} not dense")
        if parts[1] in seen_urls:
            raise ValueError(f"{path}:{lineno}: duplicate url {parts[1]}")
        seen_urls.add(parts[1])
        records.append(CrawlRecord(serial=serial, url=parts[1], is_crawled=parts[2] == "t"))
    return records


def write_corpus(pages: list[FetchedPage], out_dir: str | Path) -> list[Path]:
    """Write one ``.txt`` file per fetched page, in fetch order.

    File names are zero-padded so lexicographic file order equals fetch
    order; a ``sources.tsv`` sidecar maps each file back to its URL so
    indexing can report real source URIs.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(len(pages))))
    paths: list[Path] = []
    mapping: list[str] = []
    for i, page in enumerate(pages, start=1):
        name = f"{i:0{width}d}.txt"
        (out / name).write_text(page.extracted_text, encoding="utf-8")
        mapping.append(f"{name}\t{page.url}")
        paths.append(out / name)
    (out / "sources.tsv").write_text("\n".join(mapping) + ("\n" if mapping else ""), encoding="utf-8")
    return paths
