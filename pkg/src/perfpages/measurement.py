"""Measurement files: schema, parsing, folder scanning, git enrichment.

One measurement file is a JSON document describing a single execution of an
instrumented MPI+OpenMP application: the resource configuration it ran with,
when it finished, optional git metadata, and raw per-region aggregates.
Wall-clock quantities are nanoseconds; CPU-time quantities are CPU-nanoseconds
summed over all CPUs. Files carry only raw counters (schema_version 1); every
derived efficiency is computed downstream so the identities stay testable.

Folder convention: all files in one directory form one experiment (a scaling
study or a comparison between resource configurations), and repeated runs of
the same experiment go into the same directory. Any directory directly
containing at least one parseable ``*.json`` file is one experiment; nesting
depth below the scanned root is arbitrary.
"""

from __future__ import annotations

import json
import logging
import os
import re
import subprocess
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Callable, Mapping, NamedTuple

log = logging.getLogger(__name__)

SUPPORTED_SCHEMA_VERSION = 1
GLOBAL_REGION = "Global"

_COMMIT_HASH_RE = re.compile(r"^[0-9a-f]{40}$")

# Non-negative CPU/wall aggregates of a region, in schema order.
_REGION_TIME_FIELDS = (
    "useful_cpu_ns",
    "mpi_cpu_ns",
    "omp_serialization_cpu_ns",
    "omp_scheduling_cpu_ns",
    "max_non_mpi_rank_ns",
)
_REGION_COUNTER_FIELDS = ("instructions", "cycles")


class SchemaError(ValueError):
    """A measurement document is missing a field or a field is ill-typed.

    ``location`` is the JSON path of the offending field (or ``<document>``
    for syntax-level problems, with line/column in the message).
    """

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


class VersionError(ValueError):
    """The document declares a schema_version newer than this reader supports."""

    def __init__(self, found: int, supported: int = SUPPORTED_SCHEMA_VERSION):
        super().__init__(
            f"schema_version {found} is newer than the supported version {supported}"
        )
        self.found = found
        self.supported = supported


class NoMetadataSourceError(RuntimeError):
    """Neither CI environment variables nor the VCS yield full commit metadata."""


@dataclass(frozen=True)
class ResourceConfig:
    """The (MPI ranks x OpenMP threads) pair one run executed with."""

    mpi_ranks: int
    omp_threads: int

    def __post_init__(self):
        if self.mpi_ranks < 1 or self.omp_threads < 1:
            raise ValueError(
                f"resource counts must be >= 1, got {self.mpi_ranks}x{self.omp_threads}"
            )

    @property
    def total_cpus(self) -> int:
        return self.mpi_ranks * self.omp_threads

    @property
    def label(self) -> str:
        return f"{self.mpi_ranks}x{self.omp_threads}"

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.total_cpus, self.mpi_ranks)


@dataclass(frozen=True)
class GitMetadata:
    commit_hash: str
    branch: str
    commit_timestamp: datetime

    def __post_init__(self):
        if not _COMMIT_HASH_RE.match(self.commit_hash):
            raise ValueError(f"commit_hash must be 40 lowercase hex chars: {self.commit_hash!r}")
        if not self.branch:
            raise ValueError("branch must be non-empty")
        if self.commit_timestamp.tzinfo is None:
            raise ValueError("commit_timestamp must carry a UTC offset")

    @property
    def short_hash(self) -> str:
        return self.commit_hash[:7]


@dataclass(frozen=True)
class RegionMeasurement:
    """Raw aggregates of one named region of one run.

    Numeric plausibility (pool sums, per-rank bounds) is deliberately not
    enforced here; see :func:`validate_consistency`.
    """

    name: str
    elapsed_ns: int
    useful_cpu_ns: int
    mpi_cpu_ns: int
    omp_serialization_cpu_ns: int
    omp_scheduling_cpu_ns: int
    max_non_mpi_rank_ns: int
    instructions: int
    cycles: int


@dataclass
class RunMeasurement:
    schema_version: int
    run_timestamp: datetime
    resources: ResourceConfig
    git: GitMetadata | None
    regions: list[RegionMeasurement]

    def find_region(self, name: str) -> RegionMeasurement | None:
        for region in self.regions:
            if region.name == name:
                return region
        return None

    @property
    def region_names(self) -> list[str]:
        return [region.name for region in self.regions]


class SourcedRun(NamedTuple):
    """A run together with the file name it was read from (used in tie-breaks)."""

    filename: str
    run: RunMeasurement


@dataclass(frozen=True)
class ScanWarning:
    path: str
    message: str


@dataclass
class ExperimentTree:
    """Scanned folder structure: experiment path -> runs found in that folder."""

    root: Path
    experiments: dict[str, list[SourcedRun]]
    warnings: list[ScanWarning] = field(default_factory=list)


@dataclass(frozen=True)
class Violation:
    """One failed consistency rule, as data (never raised)."""

    region: str
    rule: str
    observed: float
    bound: float
    detail: str = ""


def _parse_instant(value: object, location: str) -> datetime:
    if not isinstance(value, str):
        raise SchemaError(location, f"expected an ISO 8601 string, got {type(value).__name__}")
    try:
        instant = datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError:
        raise SchemaError(location, f"not a valid ISO 8601 timestamp: {value!r}") from None
    if instant.tzinfo is None:
        raise SchemaError(location, f"timestamp lacks a UTC offset: {value!r}")
    return instant


def _expect_object(value: object, location: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(location, f"expected an object, got {type(value).__name__}")
    return value


def _get(obj: dict, key: str, parent: str) -> object:
    if key not in obj:
        raise SchemaError(_join(parent, key), "missing required field")
    return obj[key]


def _join(parent: str, key: str) -> str:
    return f"{parent}.{key}" if parent else key


def _expect_int(value: object, location: str) -> int:
    # bool is an int subclass but never a valid counter
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(location, f"expected an integer, got {type(value).__name__}")
    return value


def _expect_str(value: object, location: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(location, f"expected a string, got {type(value).__name__}")
    return value


def _parse_git(value: object, location: str) -> GitMetadata:
    obj = _expect_object(value, location)
    commit_hash = _expect_str(_get(obj, "commit_hash", location), _join(location, "commit_hash"))
    if not _COMMIT_HASH_RE.match(commit_hash):
        raise SchemaError(_join(location, "commit_hash"), f"not a 40-char lowercase hex hash: {commit_hash!r}")
    branch = _expect_str(_get(obj, "branch", location), _join(location, "branch"))
    if not branch:
        raise SchemaError(_join(location, "branch"), "must be non-empty")
    timestamp = _parse_instant(_get(obj, "commit_timestamp", location), _join(location, "commit_timestamp"))
    return GitMetadata(commit_hash=commit_hash, branch=branch, commit_timestamp=timestamp)


def _parse_region(value: object, location: str) -> RegionMeasurement:
    obj = _expect_object(value, location)
    name = _expect_str(_get(obj, "name", location), _join(location, "name"))
    if not name:
        raise SchemaError(_join(location, "name"), "must be non-empty")
    numbers = {
        key: _expect_int(_get(obj, key, location), _join(location, key))
        for key in ("elapsed_ns", *_REGION_TIME_FIELDS, *_REGION_COUNTER_FIELDS)
    }
    return RegionMeasurement(name=name, **numbers)


def parse_run_measurement(content: bytes | bytearray | str) -> RunMeasurement:
    """Parse and structurally validate one measurement document.

    Unknown fields anywhere in the document are ignored. Raises
    :class:`SchemaError` for missing or ill-typed fields and
    :class:`VersionError` when the document is from a newer schema.
    """
    if isinstance(content, (bytes, bytearray)):
        try:
            content = bytes(content).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError("<document>", f"not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(content)
    except json.JSONDecodeError as exc:
        raise SchemaError(
            "<document>", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    doc = _expect_object(doc, "<document>")

    version = _expect_int(_get(doc, "schema_version", ""), "schema_version")
    if version < 1:
        raise SchemaError("schema_version", f"must be a positive integer, got {version}")
    if version > SUPPORTED_SCHEMA_VERSION:
        raise VersionError(version)

    run_timestamp = _parse_instant(_get(doc, "run_timestamp", ""), "run_timestamp")

    resources_obj = _expect_object(_get(doc, "resources", ""), "resources")
    mpi_ranks = _expect_int(_get(resources_obj, "mpi_ranks", "resources"), "resources.mpi_ranks")
    omp_threads = _expect_int(_get(resources_obj, "omp_threads", "resources"), "resources.omp_threads")
    if mpi_ranks < 1:
        raise SchemaError("resources.mpi_ranks", f"must be >= 1, got {mpi_ranks}")
    if omp_threads < 1:
        raise SchemaError("resources.omp_threads", f"must be >= 1, got {omp_threads}")
    resources = ResourceConfig(mpi_ranks=mpi_ranks, omp_threads=omp_threads)

    git = None
    if doc.get("git") is not None:
        git = _parse_git(doc["git"], "git")

    regions_value = _get(doc, "regions", "")
    if not isinstance(regions_value, list) or not regions_value:
        raise SchemaError("regions", "expected a non-empty array of region objects")
    regions = [_parse_region(entry, f"regions[{i}]") for i, entry in enumerate(regions_value)]

    seen: set[str] = set()
    for region in regions:
        if region.name in seen:
            raise SchemaError("regions", f"duplicate region name {region.name!r}")
        seen.add(region.name)
    if GLOBAL_REGION not in seen:
        raise SchemaError("regions", f'missing the implicit "{GLOBAL_REGION}" region')

    return RunMeasurement(
        schema_version=version,
        run_timestamp=run_timestamp,
        resources=resources,
        git=git,
        regions=regions,
    )


def run_to_document(run: RunMeasurement) -> dict:
    doc: dict = {
        "schema_version": run.schema_version,
        "run_timestamp": run.run_timestamp.isoformat(),
        "resources": {
            "mpi_ranks": run.resources.mpi_ranks,
            "omp_threads": run.resources.omp_threads,
        },
    }
    if run.git is not None:
        doc["git"] = {
            "commit_hash": run.git.commit_hash,
            "branch": run.git.branch,
            "commit_timestamp": run.git.commit_timestamp.isoformat(),
        }
    doc["regions"] = [
        {
            "name": region.name,
            "elapsed_ns": region.elapsed_ns,
            **{key: getattr(region, key) for key in _REGION_TIME_FIELDS},
            **{key: getattr(region, key) for key in _REGION_COUNTER_FIELDS},
        }
        for region in run.regions
    ]
    return doc


def serialize_run_measurement(run: RunMeasurement) -> bytes:
    """Serialize a run so that parsing the result yields an equal RunMeasurement."""
    return (json.dumps(run_to_document(run), indent=2) + "\n").encode("utf-8")


def validate_region(region: RegionMeasurement, resources: ResourceConfig) -> list[Violation]:
    """Check one region's numeric invariants against its resource configuration."""
    violations: list[Violation] = []
    total_cpus = resources.total_cpus

    for key in _REGION_TIME_FIELDS:
        value = getattr(region, key)
        if value < 0:
            violations.append(Violation(region.name, "non-negative", value, 0, key))
    for key, value in (
        ("elapsed_ns", region.elapsed_ns),
        ("cycles", region.cycles),
        ("instructions", region.instructions),
    ):
        if value <= 0:
            violations.append(Violation(region.name, "positive", value, 1, key))
    if region.useful_cpu_ns == 0:  # < 0 is already flagged as non-negative
        violations.append(
            Violation(
                region.name,
                "positive",
                region.useful_cpu_ns,
                1,
                "useful_cpu_ns (instructions > 0 implies useful time > 0)",
            )
        )
    if violations:
        return violations

    # Cross-field checks in exact integer arithmetic.
    total_time = total_cpus * region.elapsed_ns
    pool_sum = (
        region.useful_cpu_ns
        + region.mpi_cpu_ns
        + region.omp_serialization_cpu_ns
        + region.omp_scheduling_cpu_ns
    )
    if pool_sum > total_time:
        violations.append(
            Violation(
                region.name,
                "pool-sum",
                pool_sum,
                total_time,
                "useful + mpi + serialization + scheduling pools exceed total CPU time",
            )
        )

    non_mpi = total_time - region.mpi_cpu_ns
    # o_avg <= o_max, compared as non_mpi <= o_max * total_cpus to stay exact
    if non_mpi > region.max_non_mpi_rank_ns * total_cpus:
        violations.append(
            Violation(
                region.name,
                "max-bound",
                region.max_non_mpi_rank_ns,
                non_mpi / total_cpus,
                "average per-rank non-MPI wall time exceeds the per-rank maximum",
            )
        )
    if region.max_non_mpi_rank_ns > region.elapsed_ns:
        violations.append(
            Violation(
                region.name,
                "max-bound",
                region.max_non_mpi_rank_ns,
                region.elapsed_ns,
                "per-rank maximum non-MPI wall time exceeds elapsed time",
            )
        )
    return violations


def validate_consistency(run: RunMeasurement) -> list[Violation]:
    """Return every violated region invariant of the run (empty when consistent)."""
    return [v for region in run.regions for v in validate_region(region, run.resources)]


def resolve_timestamp(run: RunMeasurement) -> datetime:
    """Timestamp used for ordering: the git commit instant when present."""
    if run.git is not None:
        return run.git.commit_timestamp
    return run.run_timestamp


def scan_experiment_tree(root: Path | str) -> ExperimentTree:
    """Scan a measurement folder into experiments keyed by relative path.

    Malformed files never abort the scan; they are recorded as warnings and
    skipped. Files directly in the root are skipped with a warning as well,
    since an experiment needs its own directory.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"measurement root is not a readable directory: {root}")

    experiments: dict[str, list[SourcedRun]] = {}
    warnings: list[ScanWarning] = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        json_files = sorted(name for name in filenames if name.endswith(".json"))
        if not json_files:
            continue
        relative = Path(dirpath).relative_to(root)
        if relative == Path("."):
            for name in json_files:
                warnings.append(
                    ScanWarning(name, "file directly in the root is ignored; place it in an experiment folder")
                )
            continue
        key = relative.as_posix()
        runs: list[SourcedRun] = []
        for name in json_files:
            path = Path(dirpath) / name
            try:
                runs.append(SourcedRun(name, parse_run_measurement(path.read_bytes())))
            except (SchemaError, VersionError) as exc:
                warnings.append(ScanWarning(f"{key}/{name}", str(exc)))
            except OSError as exc:
                warnings.append(ScanWarning(f"{key}/{name}", f"unreadable: {exc}"))
        if runs:
            experiments[key] = runs
    return ExperimentTree(root=root, experiments=dict(sorted(experiments.items())), warnings=warnings)


CommitInfoProvider = Callable[[], GitMetadata]


def git_cli_provider(cwd: Path | str | None = None) -> CommitInfoProvider:
    """Commit-info provider backed by the ``git`` command line."""

    def resolve() -> GitMetadata:
        def ask(*args: str) -> str:
            result = subprocess.run(
                ["git", *args], capture_output=True, text=True, check=True, cwd=cwd
            )
            return result.stdout.strip()

        return GitMetadata(
            commit_hash=ask("rev-parse", "HEAD").lower(),
            branch=ask("rev-parse", "--abbrev-ref", "HEAD"),
            commit_timestamp=_parse_instant(
                ask("show", "-s", "--format=%cI", "HEAD"), "git commit timestamp"
            ),
        )

    return resolve


def _metadata_from_env(env: Mapping[str, str]) -> GitMetadata | None:
    sha = env.get("CI_COMMIT_SHA")
    branch = env.get("CI_COMMIT_BRANCH") or env.get("CI_COMMIT_REF_NAME")
    timestamp = env.get("CI_COMMIT_TIMESTAMP")
    if not (sha and branch and timestamp):
        return None
    try:
        return GitMetadata(
            commit_hash=sha.lower(),
            branch=branch,
            commit_timestamp=_parse_instant(timestamp, "CI_COMMIT_TIMESTAMP"),
        )
    except (SchemaError, ValueError):
        return None


def inject_git_metadata(
    directory: Path | str,
    env: Mapping[str, str] | None = None,
    provider: CommitInfoProvider | None = None,
) -> int:
    """Add a git block to every measurement file under ``directory`` lacking one.

    Metadata comes from the CI environment (CI_COMMIT_SHA, CI_COMMIT_BRANCH or
    CI_COMMIT_REF_NAME, CI_COMMIT_TIMESTAMP) when fully available, otherwise
    from the commit-info provider. Files are rewritten in place, preserving any
    unknown fields of the original document; files already carrying git
    metadata are left untouched. Returns the number of files updated.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"not a directory: {directory}")
    if env is None:
        env = os.environ
    if provider is None:
        provider = git_cli_provider(directory)

    metadata: GitMetadata | None = None

    def resolved() -> GitMetadata:
        nonlocal metadata
        if metadata is None:
            metadata = _metadata_from_env(env)
        if metadata is None:
            try:
                metadata = provider()
            except Exception as exc:
                raise NoMetadataSourceError(
                    "no commit metadata: CI environment incomplete and the "
                    f"version-control lookup failed ({exc})"
                ) from exc
        return metadata

    updated = 0
    for path in sorted(directory.rglob("*.json")):
        raw = path.read_bytes()
        try:
            run = parse_run_measurement(raw)
        except (SchemaError, VersionError) as exc:
            log.warning("skipping unparseable measurement file %s: %s", path, exc)
            continue
        if run.git is not None:
            continue
        meta = resolved()
        doc = json.loads(raw.decode("utf-8"))
        doc["git"] = {
            "commit_hash": meta.commit_hash,
            "branch": meta.branch,
            "commit_timestamp": meta.commit_timestamp.isoformat(),
        }
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        updated += 1
    return updated
