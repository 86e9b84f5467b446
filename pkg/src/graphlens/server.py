"""HTTP sharing service: immutable snapshots stored as flat files by UUID.

Snapshots are write-once blobs; a POST validates the document, assigns a
fresh UUIDv4, and persists the bytes verbatim, so a later GET returns them
byte-identically and responses can be cached forever.  Storage is one
"<uuid>.json" file per snapshot under the configured directory, which makes
self-hosting a matter of pointing the server at a writable path.

Access control is a single optional bearer token gating writes; reads stay
open.  Operators wanting richer policies can front the service with any
HTTP-aware proxy, or subclass the handler.
"""

from __future__ import annotations

import json
import logging
import os
import re
import uuid
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import JsonError, SchemaError, SnapshotError
from .snapshot import is_snapshot_id, validate

log = logging.getLogger("graphlens.server")

API_PREFIX = "/api/v1"
_SNAPSHOT_PATH = re.compile(r"^/api/v1/snapshots/([^/]+)$")

DEFAULT_MAX_SNAPSHOT_BYTES = 16 * 1024 * 1024


@dataclass(frozen=True)
class ServerConfig:
    bind_address: str = "127.0.0.1:8000"
    storage_dir: str | Path = "snapshots"
    max_snapshot_bytes: int = DEFAULT_MAX_SNAPSHOT_BYTES
    write_token: str | None = None
    cors_allowed_origins: tuple[str, ...] = ("*",)

    def __post_init__(self) -> None:
        if self.max_snapshot_bytes <= 0:
            raise ValueError("max_snapshot_bytes must be positive")
        host, _, port = self.bind_address.rpartition(":")
        if not host or not port.isdigit():
            raise ValueError(
                f"bind_address must be host:port, got {self.bind_address!r}"
            )
        object.__setattr__(
            self, "cors_allowed_origins", tuple(self.cors_allowed_origins)
        )

    @property
    def host_port(self) -> tuple[str, int]:
        host, _, port = self.bind_address.rpartition(":")
        return host, int(port)


class SnapshotStore:
    """Filesystem-backed snapshot blobs, one file per id.

    Writes go to a temp file first and are linked into place, so readers
    never observe partial content and an (astronomically unlikely) id
    collision is detected and retried rather than overwritten.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise NotADirectoryError(f"storage directory missing: {self.directory}")
        probe = self.directory / f".write-probe-{os.getpid()}"
        try:
            probe.write_bytes(b"")
        finally:
            probe.unlink(missing_ok=True)

    def _path(self, snapshot_id: str) -> Path:
        return self.directory / f"{snapshot_id}.json"

    def save(self, data: bytes) -> str:
        while True:
            snapshot_id = str(uuid.uuid4())
            tmp = self.directory / f".tmp-{uuid.uuid4()}"
            tmp.write_bytes(data)
            try:
                os.link(tmp, self._path(snapshot_id))
                return snapshot_id
            except FileExistsError:
                continue  # id collision: retry with a fresh one
            finally:
                tmp.unlink(missing_ok=True)

    def load(self, snapshot_id: str) -> bytes | None:
        if not is_snapshot_id(snapshot_id):
            return None
        try:
            return self._path(snapshot_id).read_bytes()
        except FileNotFoundError:
            return None

    def count(self) -> int:
        return sum(
            1
            for p in self.directory.glob("*.json")
            if is_snapshot_id(p.name.removesuffix(".json"))
        )


def _error_entries(errors: list[SnapshotError]) -> list[dict]:
    entries = []
    for error in errors:
        entry: dict[str, object] = {"type": type(error).__name__, "detail": str(error)}
        if isinstance(error, SchemaError):
            entry["path"] = error.path
        if isinstance(error, JsonError):
            entry["position"] = error.position
        entries.append(entry)
    return entries


class SnapshotHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "graphlens"

    # set by create_server
    config: ServerConfig
    store: SnapshotStore

    def log_message(self, format: str, *args: object) -> None:
        log.info("%s %s", self.address_string(), format % args)

    # -- response helpers --------------------------------------------------

    def _cors_origin(self) -> str | None:
        allowed = self.config.cors_allowed_origins
        if "*" in allowed:
            return "*"
        origin = self.headers.get("Origin")
        return origin if origin and origin in allowed else None

    def _send_json(
        self, status: int, payload: object, extra: dict[str, str] | None = None
    ) -> None:
        body = json.dumps(payload, separators=(",", ":")).encode("utf-8")
        self._send_bytes(status, body, extra)

    def _send_bytes(
        self, status: int, body: bytes, extra: dict[str, str] | None = None
    ) -> None:
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        if self.close_connection:
            self.send_header("Connection", "close")
        origin = self._cors_origin()
        if origin:
            self.send_header("Access-Control-Allow-Origin", origin)
            if origin != "*":
                self.send_header("Vary", "Origin")
        for name, value in (extra or {}).items():
            self.send_header(name, value)
        self.end_headers()
        self.wfile.write(body)

    def _send_errors(self, status: int, errors: list[SnapshotError]) -> None:
        self._send_json(status, {"errors": _error_entries(errors)})

    def _send_message(self, status: int, message: str) -> None:
        self._send_json(status, {"errors": [{"type": "Error", "detail": message}]})

    # -- request handlers ---------------------------------------------------

    def do_OPTIONS(self) -> None:  # noqa: N802 (http.server naming)
        self.send_response(204)
        origin = self._cors_origin()
        if origin:
            self.send_header("Access-Control-Allow-Origin", origin)
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type, Authorization")
            self.send_header("Access-Control-Max-Age", "86400")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self) -> None:  # noqa: N802
        if self.path == f"{API_PREFIX}/health":
            self._send_json(200, {"status": "ok", "snapshots": self.store.count()})
            return
        match = _SNAPSHOT_PATH.match(self.path)
        if match:
            snapshot_id = match.group(1)
            if not is_snapshot_id(snapshot_id):
                self._send_message(400, f"malformed snapshot id: {snapshot_id!r}")
                return
            data = self.store.load(snapshot_id)
            if data is None:
                self._send_message(404, f"no snapshot {snapshot_id}")
                return
            self._send_bytes(
                200,
                data,
                {
                    "Cache-Control": "public, max-age=31536000, immutable",
                    "ETag": f'"{snapshot_id}"',
                },
            )
            return
        self._send_message(404, f"no such resource: {self.path}")

    def do_POST(self) -> None:  # noqa: N802
        # every refusal before rfile.read leaves the request body unread in
        # the stream, so the connection must close or a keep-alive client's
        # next request gets parsed starting mid-body
        if self.path != f"{API_PREFIX}/snapshots":
            self.close_connection = True
            self._send_message(404, f"no such resource: {self.path}")
            return
        if self.config.write_token is not None:
            expected = f"Bearer {self.config.write_token}"
            if self.headers.get("Authorization") != expected:
                self.close_connection = True
                self._send_message(401, "missing or invalid write token")
                return
        raw_length = self.headers.get("Content-Length")
        if raw_length is None or not raw_length.isdigit():
            self.close_connection = True
            self._send_message(411, "Content-Length required")
            return
        length = int(raw_length)
        if length > self.config.max_snapshot_bytes:
            self.close_connection = True
            self._send_message(413, "snapshot exceeds the size limit")
            return
        body = self.rfile.read(length)
        errors = validate(body)
        if errors:
            self._send_errors(400, errors)
            return
        snapshot_id = self.store.save(body)
        self._send_json(
            201,
            {"id": snapshot_id, "url_fragment": f"#{snapshot_id}"},
            {"Location": f"{API_PREFIX}/snapshots/{snapshot_id}"},
        )


def create_server(config: ServerConfig) -> ThreadingHTTPServer:
    """Bound, ready-to-serve HTTP server; caller runs serve_forever().

    Raises OSError subclasses when the storage directory is unusable or the
    port cannot be bound.
    """
    store = SnapshotStore(config.storage_dir)
    handler = type(
        "BoundSnapshotHandler", (SnapshotHandler,), {"config": config, "store": store}
    )
    server_class = type(
        "SnapshotServer",
        (ThreadingHTTPServer,),
        # the default backlog of 5 drops connections under client bursts
        {"daemon_threads": True, "request_queue_size": 128},
    )
    return server_class(config.host_port, handler)


def serve(config: ServerConfig) -> None:
    """Run until interrupted (KeyboardInterrupt shuts down cleanly)."""
    with create_server(config) as server:
        host, port = server.server_address[:2]
        log.info("listening on %s:%s, storing under %s", host, port, config.storage_dir)
        server.serve_forever()
