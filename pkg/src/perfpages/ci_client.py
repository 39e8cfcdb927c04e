"""GitLab-compatible artifact retrieval and history merging.

The previous pipeline's measurement files are stored as a job artifact
archive; this module downloads the ref-scoped archive of a named job,
extracts it safely (no path traversal), and merges the historical files into
the current measurement tree without ever losing data.

The token is secret: it is sent as a request header and must never appear in
log records, exception messages, or reprs.
"""

from __future__ import annotations

import io
import logging
import os
import posixpath
import time
import zipfile
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import quote, urlsplit

import requests

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT_S = 30.0
DEFAULT_ATTEMPTS = 3
MAX_REDIRECTS = 5

_LOOPBACK_HOSTS = ("localhost", "127.0.0.1", "::1")


class AuthError(RuntimeError):
    """The endpoint rejected the request as unauthorized (401/403)."""


class ArtifactNotFound(RuntimeError):
    """No artifact archive exists for the job/ref (404): a normal first run."""


class TransportError(RuntimeError):
    """The download failed after exhausting all attempts."""


class ArchiveError(RuntimeError):
    """The downloaded bytes are not a readable zip archive."""


class PathTraversalError(RuntimeError):
    """An archive entry would escape the extraction directory."""


@dataclass
class ArtifactSource:
    """Where to fetch the previous pipeline's artifacts from."""

    base_url: str
    project_id: str | int
    job_name: str
    ref: str
    token: str | None = None

    def __post_init__(self):
        parts = urlsplit(self.base_url)
        host = parts.hostname or ""
        if parts.scheme != "https" and not (
            parts.scheme == "http" and (host in _LOOPBACK_HOSTS or host.startswith("127."))
        ):
            raise ValueError(f"base_url must use https (got {parts.scheme}://{host})")

    def __repr__(self) -> str:
        token = "***" if self.token else None
        return (
            f"ArtifactSource(base_url={self.base_url!r}, project_id={self.project_id!r}, "
            f"job_name={self.job_name!r}, ref={self.ref!r}, token={token})"
        )


@dataclass
class MergeStats:
    copied: int = 0
    skipped_identical: int = 0
    renamed_conflicts: int = 0


def normalize_base_url(url: str) -> str:
    """Accept both a plain host URL and a CI_API_V4_URL ending in /api/v4."""
    url = url.rstrip("/")
    if url.endswith("/api/v4"):
        url = url[: -len("/api/v4")]
    return url


def artifact_url(source: ArtifactSource) -> str:
    base = normalize_base_url(source.base_url)
    project = quote(str(source.project_id), safe="")
    ref = quote(source.ref, safe="")
    job = quote(source.job_name, safe="")
    return f"{base}/api/v4/projects/{project}/jobs/artifacts/{ref}/download?job={job}"


def _auth_header(source: ArtifactSource) -> dict[str, str]:
    token = source.token or os.environ.get("GITLAB_PRIVATE_TOKEN")
    if token:
        return {"PRIVATE-TOKEN": token}
    job_token = os.environ.get("CI_JOB_TOKEN")
    if job_token:
        return {"JOB-TOKEN": job_token}
    return {}


def download_artifacts(
    source: ArtifactSource,
    *,
    timeout: float = DEFAULT_TIMEOUT_S,
    attempts: int = DEFAULT_ATTEMPTS,
    backoff_s: float = 0.5,
    session: requests.Session | None = None,
) -> bytes:
    """Download the artifact archive of the latest job for the configured ref.

    Retries with exponential backoff on 5xx responses and transport failures.
    Raises AuthError on 401/403, ArtifactNotFound on 404 (callers should treat
    that as "no history yet"), TransportError once attempts are exhausted.
    """
    url = artifact_url(source)
    headers = _auth_header(source)
    own_session = session is None
    if session is None:
        session = requests.Session()
    session.max_redirects = MAX_REDIRECTS

    last_problem = "no attempt made"
    try:
        for attempt in range(attempts):
            if attempt:
                time.sleep(backoff_s * 2 ** (attempt - 1))
            try:
                response = session.get(url, headers=headers, timeout=timeout, allow_redirects=True)
            except requests.RequestException as exc:
                last_problem = f"transport error: {type(exc).__name__}"
                log.warning("artifact download attempt %d failed: %s", attempt + 1, last_problem)
                continue
            if response.status_code == 200:
                return response.content
            if response.status_code in (401, 403):
                raise AuthError(f"artifact endpoint rejected the request ({response.status_code})")
            if response.status_code == 404:
                raise ArtifactNotFound(f"no artifacts for job {source.job_name!r} on ref {source.ref!r}")
            if 500 <= response.status_code < 600:
                last_problem = f"server error {response.status_code}"
                log.warning("artifact download attempt %d failed: %s", attempt + 1, last_problem)
                continue
            raise TransportError(f"unexpected response {response.status_code} from artifact endpoint")
    finally:
        if own_session:
            session.close()
    raise TransportError(f"artifact download failed after {attempts} attempts ({last_problem})")


def _safe_member_path(name: str) -> str:
    if name.startswith("/") or (len(name) > 1 and name[1] == ":"):
        raise PathTraversalError(f"absolute archive entry rejected: {name!r}")
    normalized = posixpath.normpath(name)
    if normalized == ".." or normalized.startswith("../"):
        raise PathTraversalError(f"archive entry escapes the destination: {name!r}")
    return normalized


def extract_archive(data: bytes, dest: Path | str) -> int:
    """Extract a zip archive under ``dest``; returns the number of files written."""
    dest = Path(dest)
    try:
        archive = zipfile.ZipFile(io.BytesIO(data))
    except zipfile.BadZipFile as exc:
        raise ArchiveError(f"not a readable zip archive: {exc}") from exc

    with archive:
        members = archive.infolist()
        # Validate every entry before writing anything.
        paths = {member.filename: _safe_member_path(member.filename) for member in members}
        extracted = 0
        for member in members:
            if member.is_dir():
                continue
            target = dest / paths[member.filename]
            target.parent.mkdir(parents=True, exist_ok=True)
            with archive.open(member) as src:
                target.write_bytes(src.read())
            extracted += 1
    return extracted


def merge_history(history_root: Path | str, current_root: Path | str) -> MergeStats:
    """Copy historical measurement files into the current tree, losing nothing.

    Files whose destination already holds identical content are skipped; on a
    content conflict the historical file is kept next to the current one with
    a ``_hist{n}`` suffix. Running the merge twice leaves the tree unchanged.
    """
    history_root = Path(history_root)
    current_root = Path(current_root)
    if not history_root.is_dir():
        raise FileNotFoundError(f"history root is not a directory: {history_root}")
    if not current_root.is_dir():
        raise FileNotFoundError(f"current root is not a directory: {current_root}")

    stats = MergeStats()
    for source in sorted(history_root.rglob("*.json")):
        relative = source.relative_to(history_root)
        content = source.read_bytes()
        destination = current_root / relative
        if not destination.exists():
            destination.parent.mkdir(parents=True, exist_ok=True)
            destination.write_bytes(content)
            stats.copied += 1
            continue
        if destination.read_bytes() == content:
            stats.skipped_identical += 1
            continue
        resolution = _conflict_destination(destination, content)
        if resolution is None:
            stats.skipped_identical += 1  # an earlier merge already kept this version
        else:
            resolution.write_bytes(content)
            stats.renamed_conflicts += 1
    return stats


def _conflict_destination(destination: Path, content: bytes) -> Path | None:
    """Smallest free ``_hist{n}`` sibling, or None when one already holds ``content``."""
    n = 1
    while True:
        candidate = destination.with_name(f"{destination.stem}_hist{n}{destination.suffix}")
        if not candidate.exists():
            return candidate
        if candidate.read_bytes() == content:
            return None
        n += 1
