"""Read-only HTTP facade over the dictionary plus the thin client.

Endpoints:

    GET  /translate?word=W&from=L1&to=L2
    GET  /reverse?term=T&term_lang=L1&entry_lang=L2
    POST /sparql           (body: query text, content-type text/plain)
    GET  /stats

Responses are JSON; errors come back as {"error": message} with a 4xx
or 5xx status. The store is immutable shared state, so concurrent
requests are safe. A pattern-count cap and a request timeout guard the
endpoint against oversized queries.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.error import HTTPError, URLError
from urllib.parse import urlencode, urlparse, parse_qs
from urllib.request import Request, urlopen

from .dictstore import DictionaryStore, DictionaryError
from .errors import LexalignError
from .sparqlet import QueryParseError, evaluate, parse_query
from .triplemap import to_triples

logger = logging.getLogger(__name__)

DEFAULT_MAX_PATTERNS = 64
DEFAULT_TIMEOUT_MS = 5000


class ServiceError(LexalignError):
    pass


class ClientError(LexalignError):
    """Base class for failures seen by the HTTP client."""


class ClientTransportError(ClientError):
    """The endpoint could not be reached at all."""


class ClientStatusError(ClientError):
    """The endpoint answered with a non-200 status."""

    def __init__(self, status: int, message: str):
        super().__init__(f"HTTP {status}: {message}")
        self.status = status


class ClientPayloadError(ClientError):
    """The endpoint answered 200 but the body was not the expected JSON."""


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 0
    store_path: Optional[Path] = None
    max_query_patterns: int = DEFAULT_MAX_PATTERNS
    request_timeout_ms: int = DEFAULT_TIMEOUT_MS

    def __post_init__(self) -> None:
        if not 0 <= self.port <= 65535:
            raise ServiceError(f"port out of range: {self.port}")
        if self.max_query_patterns <= 0:
            raise ServiceError("max_query_patterns must be positive")
        if self.request_timeout_ms <= 0:
            raise ServiceError("request_timeout_ms must be positive")


class _Handler(BaseHTTPRequestHandler):
    # store, triples and config live on the server object
    protocol_version = "HTTP/1.1"

    def setup(self) -> None:
        self.timeout = self.server.config.request_timeout_ms / 1000.0
        super().setup()

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _error(self, status: int, message: str) -> None:
        self._send_json(status, {"error": message})

    def _query_params(self, required: tuple[str, ...]) -> dict[str, str] | None:
        parsed = urlparse(self.path)
        params = {k: v[0] for k, v in parse_qs(parsed.query).items()}
        missing = [name for name in required if name not in params]
        if missing:
            self._error(400, f"missing query parameter(s): {', '.join(missing)}")
            return None
        return params

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        route = urlparse(self.path).path
        try:
            if route == "/translate":
                params = self._query_params(("word", "from", "to"))
                if params is None:
                    return
                words = self.server.store.translations(
                    params["word"], params["from"], params["to"]
                )
                self._send_json(
                    200,
                    {
                        "word": params["word"],
                        "from": params["from"],
                        "to": params["to"],
                        "translations": words,
                        "source": "dictionary",
                    },
                )
            elif route == "/reverse":
                params = self._query_params(("term", "term_lang", "entry_lang"))
                if params is None:
                    return
                headwords = self.server.store.reverse_translations(
                    params["term"], params["term_lang"], params["entry_lang"]
                )
                self._send_json(200, {"term": params["term"], "headwords": headwords})
            elif route == "/stats":
                stats = self.server.store.stats()
                self._send_json(
                    200,
                    {
                        "entry_count": stats.entry_count,
                        "entries_by_language": stats.entries_by_language,
                        "translation_entry_count": stats.translation_entry_count,
                        "translation_pairs": {
                            f"{src}->{tgt}": n
                            for (src, tgt), n in sorted(stats.translation_pairs.items())
                        },
                    },
                )
            else:
                self._error(404, f"no such endpoint: {route}")
        except DictionaryError as exc:
            self._error(400, str(exc))
        except Exception as exc:  # pragma: no cover - defensive
            logger.exception("request failed")
            self._error(500, str(exc))

    def do_POST(self) -> None:  # noqa: N802
        route = urlparse(self.path).path
        if route != "/sparql":
            self._error(404, f"no such endpoint: {route}")
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            text = self.rfile.read(length).decode("utf-8")
            query = parse_query(text)
            if len(query.patterns) > self.server.config.max_query_patterns:
                self._error(
                    400,
                    f"query has {len(query.patterns)} patterns, limit is "
                    f"{self.server.config.max_query_patterns}",
                )
                return
            result = evaluate(query, self.server.triples)
            self._send_json(200, {"head": {"vars": result.header}, "rows": [list(r) for r in result.rows]})
        except QueryParseError as exc:
            self._error(400, str(exc))
        except Exception as exc:  # pragma: no cover - defensive
            logger.exception("sparql request failed")
            self._error(500, str(exc))

    def log_message(self, format: str, *args) -> None:  # quiet by default
        logger.debug("%s - %s", self.address_string(), format % args)


class _Server(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, config: ServiceConfig, store: DictionaryStore):
        super().__init__((config.host, config.port), _Handler)
        self.config = config
        self.store = store
        self.triples = to_triples(store)


class ServiceHandle:
    """Running service; shut down with close() or via context manager."""

    def __init__(self, server: _Server, thread: threading.Thread):
        self._server = server
        self._thread = thread

    @property
    def host(self) -> str:
        return self._server.server_address[0]

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    @property
    def endpoint(self) -> str:
        return f"http://{self.host}:{self.port}"

    def close(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        self._thread.join(timeout=5)

    def __enter__(self) -> "ServiceHandle":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def serve(config: ServiceConfig, store: DictionaryStore) -> ServiceHandle:
    """Bind and start answering in a background thread.

    Bind failures surface as ServiceError. The handle's port reflects
    the actual binding, so port 0 picks a free one.
    """
    try:
        server = _Server(config, store)
    except OSError as exc:
        raise ServiceError(f"cannot bind {config.host}:{config.port}: {exc}") from exc
    thread = threading.Thread(target=server.serve_forever, name="lexiserve", daemon=True)
    thread.start()
    return ServiceHandle(server, thread)


def _get_json(url: str, timeout_ms: int) -> dict:
    try:
        with urlopen(url, timeout=timeout_ms / 1000.0) as resp:
            body = resp.read()
    except HTTPError as exc:
        detail = ""
        try:
            detail = json.loads(exc.read().decode("utf-8")).get("error", "")
        except Exception:
            pass
        raise ClientStatusError(exc.code, detail or exc.reason) from exc
    except (URLError, OSError) as exc:
        raise ClientTransportError(f"cannot reach {url}: {exc}") from exc
    try:
        payload = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ClientPayloadError(f"malformed JSON from {url}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ClientPayloadError(f"unexpected JSON shape from {url}")
    return payload


def _string_list(payload: dict, key: str, url: str) -> list[str]:
    values = payload.get(key)
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise ClientPayloadError(f"field {key!r} missing or malformed in response from {url}")
    return values


def client_translate(
    endpoint: str, word: str, from_lang: str, to_lang: str, timeout_ms: int = DEFAULT_TIMEOUT_MS
) -> list[str]:
    """GET /translate; mirrors DictionaryStore.translations over HTTP."""
    url = f"{endpoint.rstrip('/')}/translate?" + urlencode(
        {"word": word, "from": from_lang, "to": to_lang}
    )
    return _string_list(_get_json(url, timeout_ms), "translations", url)


def client_reverse_translate(
    endpoint: str, term: str, term_lang: str, entry_lang: str, timeout_ms: int = DEFAULT_TIMEOUT_MS
) -> list[str]:
    """GET /reverse; mirrors DictionaryStore.reverse_translations over HTTP."""
    url = f"{endpoint.rstrip('/')}/reverse?" + urlencode(
        {"term": term, "term_lang": term_lang, "entry_lang": entry_lang}
    )
    return _string_list(_get_json(url, timeout_ms), "headwords", url)


def client_sparql(
    endpoint: str, query_text: str, timeout_ms: int = DEFAULT_TIMEOUT_MS
) -> tuple[list[str], list[list[str]]]:
    """POST /sparql; returns (vars, rows)."""
    url = f"{endpoint.rstrip('/')}/sparql"
    request = Request(
        url,
        data=query_text.encode("utf-8"),
        headers={"Content-Type": "text/plain; charset=utf-8"},
        method="POST",
    )
    try:
        with urlopen(request, timeout=timeout_ms / 1000.0) as resp:
            body = resp.read()
    except HTTPError as exc:
        detail = ""
        try:
            detail = json.loads(exc.read().decode("utf-8")).get("error", "")
        except Exception:
            pass
        raise ClientStatusError(exc.code, detail or exc.reason) from exc
    except (URLError, OSError) as exc:
        raise ClientTransportError(f"cannot reach {url}: {exc}") from exc
    try:
        payload = json.loads(body.decode("utf-8"))
        head = payload["head"]["vars"]
        rows = payload["rows"]
    except Exception as exc:
        raise ClientPayloadError(f"malformed JSON from {url}: {exc}") from exc
    return head, rows
