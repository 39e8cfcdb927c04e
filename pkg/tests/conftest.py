from __future__ import annotations

import random
from datetime import datetime
from pathlib import Path

import pytest

from perfpages.measurement import (
    RegionMeasurement,
    ResourceConfig,
    RunMeasurement,
    SourcedRun,
)

DATA_DIR = Path(__file__).parent / "data"
LISTING_TREE = DATA_DIR / "listing_tree"
ACCEPTANCE_DIR = DATA_DIR / "acceptance"


def iso(text: str) -> datetime:
    return datetime.fromisoformat(text.replace("Z", "+00:00"))


def make_region(
    name: str = "Global",
    *,
    cpus: int = 1,
    elapsed: int = 1_000_000,
    useful: int | None = None,
    mpi: int = 0,
    omp_serial: int = 0,
    omp_sched: int = 0,
    o_max: int | None = None,
    instructions: int | None = None,
    cycles: int | None = None,
) -> RegionMeasurement:
    """A consistent region; by default all CPU time is useful computation."""
    total = cpus * elapsed
    if useful is None:
        useful = total - mpi - omp_serial - omp_sched
    if o_max is None:
        non_mpi = total - mpi
        o_max = min(elapsed, -(-non_mpi // cpus))  # ceil(o_avg), capped at elapsed
    if cycles is None:
        cycles = max(1, useful)
    if instructions is None:
        instructions = cycles
    return RegionMeasurement(
        name=name,
        elapsed_ns=elapsed,
        useful_cpu_ns=useful,
        mpi_cpu_ns=mpi,
        omp_serialization_cpu_ns=omp_serial,
        omp_scheduling_cpu_ns=omp_sched,
        max_non_mpi_rank_ns=o_max,
        instructions=instructions,
        cycles=cycles,
    )


def make_run(
    *regions: RegionMeasurement,
    ranks: int = 1,
    threads: int = 1,
    timestamp: str = "2024-05-01T12:00:00+00:00",
    git=None,
) -> RunMeasurement:
    return RunMeasurement(
        schema_version=1,
        run_timestamp=iso(timestamp),
        resources=ResourceConfig(ranks, threads),
        git=git,
        regions=list(regions) or [make_region()],
    )


def sourced(run: RunMeasurement, filename: str = "run.json") -> SourcedRun:
    return SourcedRun(filename, run)


def random_valid_case(rng: random.Random) -> tuple[RegionMeasurement, ResourceConfig]:
    """A (region, config) pair that satisfies every consistency rule by construction."""
    config = ResourceConfig(rng.randint(1, 16), rng.randint(1, 64))
    cpus = config.total_cpus
    elapsed = rng.randint(10_000, 10**12)
    o_max = rng.randint(1, elapsed)
    non_mpi = rng.randint(1, o_max * cpus)
    after_serial = rng.randint(1, non_mpi)
    after_sched = rng.randint(1, after_serial)
    useful = rng.randint(1, after_sched)
    region = RegionMeasurement(
        name="Global",
        elapsed_ns=elapsed,
        useful_cpu_ns=useful,
        mpi_cpu_ns=cpus * elapsed - non_mpi,
        omp_serialization_cpu_ns=non_mpi - after_serial,
        omp_scheduling_cpu_ns=after_serial - after_sched,
        max_non_mpi_rank_ns=o_max,
        instructions=rng.randint(1, 10**13),
        cycles=rng.randint(1, 10**13),
    )
    return region, config


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.fspath.basename == "test_acceptance.py":
        verdict = "PASS" if report.passed else "FAIL"
        item.config.pluginmanager.get_plugin("terminalreporter").write_line(
            f"[acceptance] {item.name}: {verdict}"
        )
