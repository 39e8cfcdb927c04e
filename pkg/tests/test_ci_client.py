from __future__ import annotations

import logging
import zipfile

import pytest

from perfpages.ci_client import (
    ArchiveError,
    ArtifactNotFound,
    ArtifactSource,
    AuthError,
    MergeStats,
    PathTraversalError,
    TransportError,
    artifact_url,
    download_artifacts,
    extract_archive,
    merge_history,
)

from .http_stub import make_zip, ok_zip, status_only, stub_server

TOKEN = "glpat-sekret-42"


def source_for(server, token=TOKEN) -> ArtifactSource:
    return ArtifactSource(
        base_url=server.url, project_id=123, job_name="perf job", ref="main", token=token
    )


class TestArtifactSource:
    def test_https_required_for_remote_hosts(self):
        with pytest.raises(ValueError):
            ArtifactSource("http://gitlab.example.com", 1, "job", "main")

    def test_loopback_http_allowed(self):
        ArtifactSource("http://127.0.0.1:9999", 1, "job", "main")
        ArtifactSource("http://localhost", 1, "job", "main")

    def test_repr_masks_token(self):
        source = ArtifactSource("https://gitlab.example.com", 1, "job", "main", token=TOKEN)
        assert TOKEN not in repr(source)

    def test_url_shape_and_quoting(self):
        source = ArtifactSource(
            "https://gitlab.example.com", "group/proj", "perf job", "feat/x", token=TOKEN
        )
        url = artifact_url(source)
        assert url == (
            "https://gitlab.example.com/api/v4/projects/group%2Fproj"
            "/jobs/artifacts/feat%2Fx/download?job=perf%20job"
        )

    def test_api_v4_suffix_not_duplicated(self):
        source = ArtifactSource("https://gitlab.example.com/api/v4", 7, "job", "main")
        assert artifact_url(source).count("/api/v4") == 1


class TestDownloadArtifacts:
    def test_archive_passes_through(self):
        entries = {"talp/a.json": b"{}", "talp/b.json": b"{}"}
        with stub_server(ok_zip(entries)) as server:
            body = download_artifacts(source_for(server))
        with zipfile.ZipFile(__import__("io").BytesIO(body)) as archive:
            assert sorted(archive.namelist()) == ["talp/a.json", "talp/b.json"]

    def test_request_path_and_token_header(self):
        with stub_server(ok_zip({})) as server:
            download_artifacts(source_for(server))
            request = server.requests[0]
        assert request["path"] == "/api/v4/projects/123/jobs/artifacts/main/download?job=perf%20job"
        assert request["headers"]["PRIVATE-TOKEN"] == TOKEN

    def test_job_token_fallback(self, monkeypatch):
        monkeypatch.delenv("GITLAB_PRIVATE_TOKEN", raising=False)
        monkeypatch.setenv("CI_JOB_TOKEN", "job-token-1")
        with stub_server(ok_zip({})) as server:
            download_artifacts(source_for(server, token=None))
            headers = server.requests[0]["headers"]
        assert headers["JOB-TOKEN"] == "job-token-1"
        assert "PRIVATE-TOKEN" not in headers

    def test_not_found(self):
        with stub_server(status_only(404)) as server:
            with pytest.raises(ArtifactNotFound):
                download_artifacts(source_for(server))

    @pytest.mark.parametrize("code", [401, 403])
    def test_auth_errors(self, code):
        with stub_server(status_only(code)) as server:
            with pytest.raises(AuthError):
                download_artifacts(source_for(server))

    def test_redirect_followed(self):
        payload = make_zip({"x.json": b"{}"})

        def responder(handler):
            if handler.path.startswith("/api/"):
                return 302, {"Location": "/moved"}, b""
            return 200, {}, payload

        with stub_server(responder) as server:
            assert download_artifacts(source_for(server)) == payload

    def test_server_errors_are_retried(self):
        calls = []

        def responder(handler):
            calls.append(handler.path)
            if len(calls) < 3:
                return 503, {}, b""
            return 200, {}, make_zip({})

        with stub_server(responder) as server:
            download_artifacts(source_for(server), backoff_s=0.01)
        assert len(calls) == 3

    def test_transport_error_after_exhausted_retries(self):
        with stub_server(status_only(500)) as server:
            with pytest.raises(TransportError):
                download_artifacts(source_for(server), attempts=2, backoff_s=0.01)
            assert len(server.requests) == 2

    def test_token_never_in_logs_or_errors(self, caplog):
        caplog.set_level(logging.DEBUG)
        with stub_server(status_only(500)) as server:
            source = source_for(server)
            with pytest.raises(TransportError) as transport_error:
                download_artifacts(source, attempts=2, backoff_s=0.01)
        with stub_server(status_only(401)) as server:
            with pytest.raises(AuthError) as auth_error:
                download_artifacts(source_for(server))
        emitted = caplog.text + str(transport_error.value) + str(auth_error.value) + repr(source)
        assert TOKEN not in emitted


class TestExtractArchive:
    def test_nested_entry(self, tmp_path):
        count = extract_archive(make_zip({"talp/a/b.json": b"{}"}), tmp_path)
        assert count == 1
        assert (tmp_path / "talp" / "a" / "b.json").read_bytes() == b"{}"

    def test_path_traversal_rejected(self, tmp_path):
        with pytest.raises(PathTraversalError):
            extract_archive(make_zip({"../evil.json": b"{}"}), tmp_path)
        assert not (tmp_path.parent / "evil.json").exists()

    def test_absolute_path_rejected(self, tmp_path):
        with pytest.raises(PathTraversalError):
            extract_archive(make_zip({"/etc/owned": b"!"}), tmp_path)

    def test_nothing_extracted_when_any_entry_is_bad(self, tmp_path):
        data = make_zip({"ok.json": b"{}", "../evil.json": b"{}"})
        with pytest.raises(PathTraversalError):
            extract_archive(data, tmp_path)
        assert not (tmp_path / "ok.json").exists()

    def test_empty_archive(self, tmp_path):
        assert extract_archive(make_zip({}), tmp_path) == 0

    def test_corrupt_archive(self, tmp_path):
        with pytest.raises(ArchiveError):
            extract_archive(b"this is not a zip", tmp_path)


def fill(root, files: dict[str, bytes]):
    for name, data in files.items():
        path = root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)


class TestMergeHistory:
    def test_disjoint_trees(self, tmp_path):
        history, current = tmp_path / "hist", tmp_path / "cur"
        fill(history, {"a/x.json": b"1", "a/y.json": b"2", "b/z.json": b"3"})
        fill(current, {"c/p.json": b"4", "c/q.json": b"5"})
        stats = merge_history(history, current)
        assert stats == MergeStats(copied=3, skipped_identical=0, renamed_conflicts=0)
        assert (current / "a" / "x.json").read_bytes() == b"1"

    def test_identical_files_skipped(self, tmp_path):
        history, current = tmp_path / "hist", tmp_path / "cur"
        fill(history, {"a/x.json": b"same"})
        fill(current, {"a/x.json": b"same"})
        assert merge_history(history, current) == MergeStats(0, 1, 0)

    def test_conflict_keeps_both(self, tmp_path):
        history, current = tmp_path / "hist", tmp_path / "cur"
        fill(history, {"a/x.json": b"old"})
        fill(current, {"a/x.json": b"new"})
        stats = merge_history(history, current)
        assert stats == MergeStats(0, 0, 1)
        assert (current / "a" / "x.json").read_bytes() == b"new"
        assert (current / "a" / "x_hist1.json").read_bytes() == b"old"

    def test_merge_is_idempotent(self, tmp_path):
        history, current = tmp_path / "hist", tmp_path / "cur"
        fill(history, {"a/x.json": b"old", "b/y.json": b"fresh"})
        fill(current, {"a/x.json": b"new"})
        merge_history(history, current)
        snapshot = {p.relative_to(current): p.read_bytes() for p in current.rglob("*.json")}
        second = merge_history(history, current)
        assert second == MergeStats(copied=0, skipped_identical=2, renamed_conflicts=0)
        assert {p.relative_to(current): p.read_bytes() for p in current.rglob("*.json")} == snapshot

    def test_non_json_files_ignored(self, tmp_path):
        history, current = tmp_path / "hist", tmp_path / "cur"
        fill(history, {"a/x.json": b"1", "a/readme.txt": b"doc"})
        fill(current, {})
        current.mkdir(exist_ok=True)
        assert merge_history(history, current) == MergeStats(1, 0, 0)
        assert not (current / "a" / "readme.txt").exists()

    def test_everything_reachable_before_still_present(self, tmp_path):
        history, current = tmp_path / "hist", tmp_path / "cur"
        fill(history, {"a/x.json": b"old"})
        fill(current, {"a/x.json": b"new", "keep/me.json": b"untouched"})
        before = (current / "keep" / "me.json").read_bytes()
        merge_history(history, current)
        assert (current / "keep" / "me.json").read_bytes() == before
        assert (current / "a" / "x.json").read_bytes() == b"new"
