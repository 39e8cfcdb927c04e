"""Relative scalability factors and the per-experiment efficiency table.

One experiment folder yields one table per region: a column per resource
configuration (latest run wins), with the configuration using the least
resources as the reference case. Scalability factors relate each column to
that reference; the scaling mode only changes how instruction counts are
normalized (total for strong scaling, per CPU for weak scaling).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Iterable, Sequence

from .measurement import (
    RegionMeasurement,
    ResourceConfig,
    SourcedRun,
    resolve_timestamp,
)
from .pop_model import PopMetrics, compute_pop_metrics

# Relative per-CPU instruction deviation (vs the reference) up to which an
# experiment still counts as weak scaling.
WEAK_INSTRUCTION_TOLERANCE = 0.10


class ScalingMode(Enum):
    WEAK = "weak"
    STRONG = "strong"


class RegionMissingError(KeyError):
    """A run of the experiment does not contain the region being tabulated."""

    def __init__(self, filename: str, region: str):
        super().__init__(f"region {region!r} missing from {filename}")
        self.filename = filename
        self.region = region

    def __str__(self) -> str:
        return f"region {self.region!r} missing from {self.filename}"


@dataclass(frozen=True)
class ScalingFactors:
    """Factors of one column relative to the table's reference column."""

    ipc_scalability: float
    instruction_scalability: float
    frequency_scalability: float
    computation_scalability: float
    global_efficiency: float


@dataclass(frozen=True)
class TableColumn:
    config: ResourceConfig
    metrics: PopMetrics
    factors: ScalingFactors
    timestamp: datetime


@dataclass(frozen=True)
class EfficiencyTable:
    region: str
    mode: ScalingMode
    reference: ResourceConfig
    columns: tuple[TableColumn, ...]

    @property
    def mpi_only(self) -> bool:
        return all(column.config.omp_threads == 1 for column in self.columns)


def latest_per_config(runs: Sequence[SourcedRun]) -> dict[ResourceConfig, SourcedRun]:
    """Pick, per resource configuration, the run with the latest timestamp.

    Ties are broken by run_timestamp, then by source filename (ascending, the
    later name wins).
    """
    if not runs:
        raise ValueError("no runs given")
    latest: dict[ResourceConfig, SourcedRun] = {}
    for sourced in runs:
        config = sourced.run.resources
        current = latest.get(config)
        if current is None or _recency_key(sourced) > _recency_key(current):
            latest[config] = sourced
    return latest


def _recency_key(sourced: SourcedRun) -> tuple[datetime, datetime, str]:
    return (resolve_timestamp(sourced.run), sourced.run.run_timestamp, sourced.filename)


def select_reference(configs: Iterable[ResourceConfig]) -> ResourceConfig:
    """The configuration with the least resources; ties go to fewer MPI ranks."""
    candidates = list(configs)
    if not candidates:
        raise ValueError("no resource configurations given")
    return min(candidates, key=lambda config: config.sort_key)


def detect_scaling_mode(
    points: Sequence[tuple[ResourceConfig, int]], reference: ResourceConfig
) -> ScalingMode:
    """Weak when every per-CPU instruction count stays within tolerance of the reference."""
    per_cpu = {config: instructions / config.total_cpus for config, instructions in points}
    if reference not in per_cpu:
        raise ValueError(f"reference configuration {reference.label} not among the points")
    baseline = per_cpu[reference]
    for value in per_cpu.values():
        if abs(value - baseline) / baseline > WEAK_INSTRUCTION_TOLERANCE:
            return ScalingMode.STRONG
    return ScalingMode.WEAK


def instruction_scaling(
    target: tuple[int, ResourceConfig],
    reference: tuple[int, ResourceConfig],
    mode: ScalingMode,
) -> float:
    """Instruction scalability of target vs reference under the given mode."""
    target_instructions, target_config = target
    reference_instructions, reference_config = reference
    if mode is ScalingMode.STRONG:
        return reference_instructions / target_instructions
    return (reference_instructions / reference_config.total_cpus) / (
        target_instructions / target_config.total_cpus
    )


def scaling_factors(
    target: tuple[PopMetrics, ResourceConfig],
    reference: tuple[PopMetrics, ResourceConfig],
    mode: ScalingMode,
) -> ScalingFactors:
    target_metrics, target_config = target
    reference_metrics, reference_config = reference
    ipc_scal = target_metrics.ipc / reference_metrics.ipc
    frequency_scal = target_metrics.frequency_ghz / reference_metrics.frequency_ghz
    instruction_scal = instruction_scaling(
        (target_metrics.instructions, target_config),
        (reference_metrics.instructions, reference_config),
        mode,
    )
    computation = ipc_scal * instruction_scal * frequency_scal
    return ScalingFactors(
        ipc_scalability=ipc_scal,
        instruction_scalability=instruction_scal,
        frequency_scalability=frequency_scal,
        computation_scalability=computation,
        global_efficiency=target_metrics.parallel_efficiency * computation,
    )


def build_efficiency_table(runs: Sequence[SourcedRun], region: str) -> EfficiencyTable:
    """Assemble the scaling-efficiency table of one experiment folder for one region."""
    if not runs:
        raise ValueError("no runs given")
    for sourced in runs:
        if sourced.run.find_region(region) is None:
            raise RegionMissingError(sourced.filename, region)

    latest = latest_per_config(runs)
    reference_config = select_reference(latest.keys())

    def region_of(config: ResourceConfig) -> RegionMeasurement:
        found = latest[config].run.find_region(region)
        assert found is not None
        return found

    mode = detect_scaling_mode(
        [(config, region_of(config).instructions) for config in latest], reference_config
    )
    metrics = {config: compute_pop_metrics(region_of(config), config) for config in latest}
    reference = (metrics[reference_config], reference_config)

    columns = tuple(
        TableColumn(
            config=config,
            metrics=metrics[config],
            factors=scaling_factors((metrics[config], config), reference, mode),
            timestamp=resolve_timestamp(latest[config].run),
        )
        for config in sorted(latest, key=lambda c: c.sort_key)
    )
    return EfficiencyTable(region=region, mode=mode, reference=reference_config, columns=columns)
