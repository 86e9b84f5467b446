"""Tests for the snapshot sharing service."""

import http.client
import json
import random
import socket
import threading
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import pytest
import requests

from graphlens import (
    ServerConfig,
    SnapshotStore,
    create_server,
    is_snapshot_id,
)
from .generators import random_snapshot_bytes


@contextmanager
def running_server(storage_dir, **config_kwargs):
    config = ServerConfig(
        bind_address="127.0.0.1:0", storage_dir=storage_dir, **config_kwargs
    )
    server = create_server(config)
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{port}"
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)


@pytest.fixture
def snapshot_bytes():
    return random_snapshot_bytes(random.Random(60))


class TestConfig:
    @pytest.mark.parametrize("bad", ["localhost", "127.0.0.1:", ":8000", "host:port"])
    def test_bad_bind_address(self, bad):
        with pytest.raises(ValueError):
            ServerConfig(bind_address=bad)

    def test_bad_size_limit(self):
        with pytest.raises(ValueError):
            ServerConfig(max_snapshot_bytes=0)

    def test_host_port_split(self):
        assert ServerConfig(bind_address="0.0.0.0:9001").host_port == ("0.0.0.0", 9001)


class TestStore:
    def test_missing_directory_rejected(self, tmp_path):
        with pytest.raises(NotADirectoryError):
            SnapshotStore(tmp_path / "nope")

    def test_save_load_roundtrip(self, tmp_path):
        store = SnapshotStore(tmp_path)
        snapshot_id = store.save(b'{"x":1}')
        assert is_snapshot_id(snapshot_id)
        assert store.load(snapshot_id) == b'{"x":1}'

    def test_load_unknown_and_malformed_ids(self, tmp_path):
        store = SnapshotStore(tmp_path)
        assert store.load("6c0d8aaa-5320-4c81-9618-11ea5e0524f4") is None
        assert store.load("../../etc/passwd") is None

    def test_count_ignores_foreign_files(self, tmp_path):
        store = SnapshotStore(tmp_path)
        store.save(b"{}")
        store.save(b"{}")
        (tmp_path / "notes.json").write_text("{}")
        (tmp_path / ".tmp-leftover").write_text("x")
        assert store.count() == 2


class TestPostAndGet:
    def test_post_returns_id_and_fragment(self, tmp_path, snapshot_bytes):
        with running_server(tmp_path) as base:
            response = requests.post(f"{base}/api/v1/snapshots", data=snapshot_bytes)
            assert response.status_code == 201
            body = response.json()
            assert is_snapshot_id(body["id"])
            assert body["url_fragment"] == f"#{body['id']}"
            assert response.headers["Location"] == f"/api/v1/snapshots/{body['id']}"

    def test_get_returns_posted_bytes_verbatim(self, tmp_path, snapshot_bytes):
        with running_server(tmp_path) as base:
            snapshot_id = requests.post(
                f"{base}/api/v1/snapshots", data=snapshot_bytes
            ).json()["id"]
            response = requests.get(f"{base}/api/v1/snapshots/{snapshot_id}")
            assert response.status_code == 200
            assert response.content == snapshot_bytes
            assert response.headers["Content-Type"] == "application/json"

    def test_get_is_cacheable_forever(self, tmp_path, snapshot_bytes):
        with running_server(tmp_path) as base:
            snapshot_id = requests.post(
                f"{base}/api/v1/snapshots", data=snapshot_bytes
            ).json()["id"]
            response = requests.get(f"{base}/api/v1/snapshots/{snapshot_id}")
            assert "immutable" in response.headers["Cache-Control"]
            assert response.headers["ETag"] == f'"{snapshot_id}"'

    def test_unknown_snapshot_404(self, tmp_path):
        with running_server(tmp_path) as base:
            response = requests.get(
                f"{base}/api/v1/snapshots/6c0d8aaa-5320-4c81-9618-11ea5e0524f4"
            )
            assert response.status_code == 404

    def test_malformed_id_400(self, tmp_path):
        with running_server(tmp_path) as base:
            for bad in ("not-a-uuid", "..%2F..%2Fetc%2Fpasswd", "A" * 36):
                response = requests.get(f"{base}/api/v1/snapshots/{bad}")
                assert response.status_code == 400

    def test_unknown_path_404(self, tmp_path):
        with running_server(tmp_path) as base:
            assert requests.get(f"{base}/api/v2/snapshots").status_code == 404
            assert requests.post(f"{base}/api/v1/other", data=b"{}").status_code == 404

    def test_post_invalid_json_400_with_error_entries(self, tmp_path):
        with running_server(tmp_path) as base:
            response = requests.post(f"{base}/api/v1/snapshots", data=b"{broken")
            assert response.status_code == 400
            errors = response.json()["errors"]
            assert errors[0]["type"] == "JsonError"
            assert isinstance(errors[0]["position"], int)

    def test_post_schema_error_reports_path(self, tmp_path, snapshot_bytes):
        doc = json.loads(snapshot_bytes)
        doc["version"] = "one"
        with running_server(tmp_path) as base:
            response = requests.post(
                f"{base}/api/v1/snapshots", data=json.dumps(doc).encode()
            )
            assert response.status_code == 400
            errors = response.json()["errors"]
            assert any(e.get("path") == "version" for e in errors)

    def test_health_counts_snapshots(self, tmp_path, snapshot_bytes):
        with running_server(tmp_path) as base:
            assert requests.get(f"{base}/api/v1/health").json() == {
                "status": "ok",
                "snapshots": 0,
            }
            for _ in range(3):
                requests.post(f"{base}/api/v1/snapshots", data=snapshot_bytes)
            assert requests.get(f"{base}/api/v1/health").json()["snapshots"] == 3


class TestLimitsAndAuth:
    def test_oversized_snapshot_413(self, tmp_path):
        with running_server(tmp_path, max_snapshot_bytes=500) as base:
            response = requests.post(f"{base}/api/v1/snapshots", data=b"x" * 501)
            assert response.status_code == 413

    def test_missing_content_length_411(self, tmp_path):
        with running_server(tmp_path) as base:
            host, port = base.removeprefix("http://").split(":")
            with socket.create_connection((host, int(port)), timeout=5) as sock:
                sock.sendall(
                    b"POST /api/v1/snapshots HTTP/1.1\r\n"
                    b"Host: localhost\r\n"
                    b"Connection: close\r\n\r\n"
                )
                status_line = sock.makefile("rb").readline()
            assert b"411" in status_line

    def test_write_token_required_when_configured(self, tmp_path, snapshot_bytes):
        with running_server(tmp_path, write_token="sesame") as base:
            url = f"{base}/api/v1/snapshots"
            assert requests.post(url, data=snapshot_bytes).status_code == 401
            assert (
                requests.post(
                    url, data=snapshot_bytes, headers={"Authorization": "Bearer nope"}
                ).status_code
                == 401
            )
            granted = requests.post(
                url, data=snapshot_bytes, headers={"Authorization": "Bearer sesame"}
            )
            assert granted.status_code == 201
            # reads stay open
            snapshot_id = granted.json()["id"]
            assert (
                requests.get(f"{base}/api/v1/snapshots/{snapshot_id}").status_code
                == 200
            )

    def test_health_open_with_token(self, tmp_path):
        with running_server(tmp_path, write_token="sesame") as base:
            assert requests.get(f"{base}/api/v1/health").status_code == 200

    def test_refused_post_does_not_poison_keepalive_reuse(
        self, tmp_path, snapshot_bytes
    ):
        # a rejected POST leaves its body unread, so the server must close
        # the connection; otherwise a keep-alive client's next request gets
        # parsed starting mid-body and fails with a bogus 400
        with running_server(tmp_path, write_token="sesame") as base:
            host, port_text = base.removeprefix("http://").split(":")
            conn = http.client.HTTPConnection(host, int(port_text), timeout=5)
            try:
                conn.request("POST", "/api/v1/snapshots", body=snapshot_bytes)
                refusal = conn.getresponse()
                assert refusal.status == 401
                assert refusal.headers["Connection"] == "close"
                refusal.read()
                # http.client reconnects transparently after the close
                conn.request("GET", "/api/v1/health")
                assert conn.getresponse().status == 200
            finally:
                conn.close()


class TestCors:
    def test_wildcard_by_default(self, tmp_path):
        with running_server(tmp_path) as base:
            response = requests.get(f"{base}/api/v1/health")
            assert response.headers["Access-Control-Allow-Origin"] == "*"

    def test_preflight(self, tmp_path):
        with running_server(tmp_path) as base:
            response = requests.options(f"{base}/api/v1/snapshots")
            assert response.status_code == 204
            assert "POST" in response.headers["Access-Control-Allow-Methods"]

    def test_restricted_origins(self, tmp_path):
        origins = ("http://good.example",)
        with running_server(tmp_path, cors_allowed_origins=origins) as base:
            allowed = requests.get(
                f"{base}/api/v1/health", headers={"Origin": "http://good.example"}
            )
            assert (
                allowed.headers["Access-Control-Allow-Origin"] == "http://good.example"
            )
            assert allowed.headers["Vary"] == "Origin"
            denied = requests.get(
                f"{base}/api/v1/health", headers={"Origin": "http://evil.example"}
            )
            assert "Access-Control-Allow-Origin" not in denied.headers


class TestDurabilityAndConcurrency:
    def test_snapshots_survive_restart(self, tmp_path, snapshot_bytes):
        with running_server(tmp_path) as base:
            snapshot_id = requests.post(
                f"{base}/api/v1/snapshots", data=snapshot_bytes
            ).json()["id"]
        with running_server(tmp_path) as base:
            response = requests.get(f"{base}/api/v1/snapshots/{snapshot_id}")
            assert response.content == snapshot_bytes
            assert requests.get(f"{base}/api/v1/health").json()["snapshots"] == 1

    def test_concurrent_posts_all_stored(self, tmp_path):
        rng = random.Random(61)
        payloads = [random_snapshot_bytes(rng) for _ in range(20)]
        with running_server(tmp_path) as base:
            url = f"{base}/api/v1/snapshots"
            with ThreadPoolExecutor(max_workers=8) as pool:
                responses = list(pool.map(lambda p: requests.post(url, data=p), payloads))
            assert all(r.status_code == 201 for r in responses)
            ids = [r.json()["id"] for r in responses]
            assert len(set(ids)) == len(payloads)
            for snapshot_id, payload in zip(ids, payloads):
                got = requests.get(f"{base}/api/v1/snapshots/{snapshot_id}")
                assert got.content == payload
