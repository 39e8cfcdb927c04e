"""Absolute efficiency hierarchy of one region of one run.

All metrics are plain ratios over the region's raw aggregates. For a run on
P CPUs (P = mpi_ranks * omp_threads) with region elapsed time E:

    T = P * E                      total CPU time
    W = T - mpi_cpu_ns             CPU time outside MPI
    S = W - omp_serialization_ns   ... after serialization losses
    Q = S - omp_scheduling_ns      ... after scheduling losses
    U = useful_cpu_ns              useful computation (Q - U: OpenMP imbalance)

    o_avg = W / P                  average per-rank non-MPI wall time
    o_max = max_non_mpi_rank_ns    best-informed per-rank maximum

The hierarchy is multiplicative by construction, so

    parallel_efficiency     = mpi_parallel_efficiency * omp_parallel_efficiency
    mpi_parallel_efficiency = (o_avg / o_max) * (o_max / E)  = W / T
    omp_parallel_efficiency = (S / W) * (Q / S) * (U / Q)    = U / W

holds exactly, and every factor lies in (0, 1] for measurements that pass
consistency validation. IPC and frequency are defined over useful time only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .measurement import RegionMeasurement, ResourceConfig, validate_region

NS_PER_SECOND = 1e9


class DomainError(ValueError):
    """The measurement violates a precondition of the efficiency model."""


@dataclass(frozen=True)
class PopMetrics:
    """Efficiency hierarchy plus computation-rate indicators for one region."""

    elapsed_s: float
    parallel_efficiency: float
    mpi_parallel_efficiency: float
    mpi_load_balance: float
    mpi_communication_efficiency: float
    omp_parallel_efficiency: float
    omp_load_balance: float
    omp_scheduling_efficiency: float
    omp_serialization_efficiency: float
    ipc: float
    frequency_ghz: float
    instructions: int


def _ensure_consistent(region: RegionMeasurement, config: ResourceConfig) -> None:
    violations = validate_region(region, config)
    if violations:
        summary = "; ".join(
            f"{v.rule} ({v.detail or 'observed'} {v.observed} vs bound {v.bound})"
            for v in violations
        )
        raise DomainError(f"region {region.name!r} fails consistency: {summary}")


def parallel_efficiency(region: RegionMeasurement, config: ResourceConfig) -> float:
    """Fraction of total CPU time spent in useful computation: U / T."""
    _ensure_consistent(region, config)
    return region.useful_cpu_ns / (config.total_cpus * region.elapsed_ns)


def mpi_hierarchy(
    region: RegionMeasurement, config: ResourceConfig
) -> tuple[float, float, float]:
    """(mpi_parallel_efficiency, mpi_load_balance, mpi_communication_efficiency)."""
    _ensure_consistent(region, config)
    if region.max_non_mpi_rank_ns <= 0:
        raise DomainError(
            f"region {region.name!r}: max_non_mpi_rank_ns must be > 0 to decompose MPI losses"
        )
    elapsed = region.elapsed_ns
    non_mpi = config.total_cpus * elapsed - region.mpi_cpu_ns
    o_avg = non_mpi / config.total_cpus
    communication = region.max_non_mpi_rank_ns / elapsed
    load_balance = o_avg / region.max_non_mpi_rank_ns
    return load_balance * communication, load_balance, communication


def omp_hierarchy(
    region: RegionMeasurement, config: ResourceConfig
) -> tuple[float, float, float, float]:
    """(omp_pe, omp_load_balance, omp_scheduling, omp_serialization).

    For MPI-only runs (omp_threads == 1, zero OpenMP pools) serialization and
    scheduling come out as 1.0 and the residual in-rank imbalance collapses
    into omp_load_balance = U / W.
    """
    _ensure_consistent(region, config)
    non_mpi = config.total_cpus * region.elapsed_ns - region.mpi_cpu_ns
    if non_mpi <= 0:
        raise DomainError(
            f"region {region.name!r}: no CPU time outside MPI, OpenMP hierarchy undefined"
        )
    after_serialization = non_mpi - region.omp_serialization_cpu_ns
    after_scheduling = after_serialization - region.omp_scheduling_cpu_ns
    serialization = after_serialization / non_mpi
    scheduling = after_scheduling / after_serialization
    load_balance = region.useful_cpu_ns / after_scheduling
    return load_balance * scheduling * serialization, load_balance, scheduling, serialization


def ipc(region: RegionMeasurement) -> float:
    """Instructions retired per cycle during useful computation."""
    if region.cycles <= 0 or region.useful_cpu_ns <= 0:
        raise DomainError(f"region {region.name!r}: ipc needs cycles > 0 and useful time > 0")
    return region.instructions / region.cycles


def frequency_ghz(region: RegionMeasurement) -> float:
    """Cycles per useful nanosecond, i.e. the effective clock in GHz."""
    if region.cycles <= 0 or region.useful_cpu_ns <= 0:
        raise DomainError(
            f"region {region.name!r}: frequency needs cycles > 0 and useful time > 0"
        )
    return region.cycles / region.useful_cpu_ns


def compute_pop_metrics(region: RegionMeasurement, config: ResourceConfig) -> PopMetrics:
    """Bundle the full hierarchy for one region; raises DomainError on bad input."""
    mpi_pe, mpi_lb, mpi_comm = mpi_hierarchy(region, config)
    omp_pe, omp_lb, omp_sched, omp_serial = omp_hierarchy(region, config)
    return PopMetrics(
        elapsed_s=region.elapsed_ns / NS_PER_SECOND,
        parallel_efficiency=mpi_pe * omp_pe,
        mpi_parallel_efficiency=mpi_pe,
        mpi_load_balance=mpi_lb,
        mpi_communication_efficiency=mpi_comm,
        omp_parallel_efficiency=omp_pe,
        omp_load_balance=omp_lb,
        omp_scheduling_efficiency=omp_sched,
        omp_serialization_efficiency=omp_serial,
        ipc=ipc(region),
        frequency_ghz=frequency_ghz(region),
        instructions=region.instructions,
    )
