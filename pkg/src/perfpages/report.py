"""Static HTML report: efficiency tables, history data, badges.

The report is a tree of self-contained files: an index page linking every
experiment page, one page per experiment with the per-region efficiency
tables, and a machine-readable data island (script element of type
``application/json``, id ``talp-data``) feeding the interactive charts. The
chart script is inlined at render time from a vendored asset; without it the
pages stay fully readable (tables plus raw data). Badges are flat two-panel
SVGs, one per resource configuration of the badge region.

Rendering is deterministic: equal trees and options produce byte-identical
output. All timestamps come from the measurement data, never the wall clock.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import re
from dataclasses import asdict, dataclass, field
from datetime import datetime
from decimal import ROUND_HALF_UP, Decimal
from html import escape
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence
from urllib.parse import quote

from .measurement import (
    GLOBAL_REGION,
    ExperimentTree,
    ResourceConfig,
    SourcedRun,
    resolve_timestamp,
)
from .pop_model import DomainError, PopMetrics, compute_pop_metrics
from .scaling import EfficiencyTable, RegionMissingError, TableColumn, build_efficiency_table

log = logging.getLogger(__name__)

DATA_ISLAND_ID = "talp-data"
CHART_CONTAINER_ID = "talp-charts"
_CHART_ASSET = "chart-bundle.js"
_AUTO = object()

_BADGE_COLORS = {"green": "#4c1", "orange": "#fe7d37", "red": "#e05d44"}

_PAGE_CSS = """\
body { font-family: sans-serif; margin: 2em auto; max-width: 72em; padding: 0 1em; color: #222; }
table { border-collapse: collapse; margin: 0.8em 0 1.6em; }
th, td { border: 1px solid #999; padding: 0.25em 0.7em; text-align: right; }
th[scope=row], thead th:first-child { text-align: left; }
td.eff-green { background: #4c1; color: #fff; }
td.eff-orange { background: #fe7d37; color: #fff; }
td.eff-red { background: #e05d44; color: #fff; }
td.na { color: #888; text-align: center; }
p.tablemeta { color: #555; margin: 0; }
p.badges img { margin-right: 0.5em; }
ul.experiments li { margin: 0.3em 0; }
"""


class EmptyTreeError(RuntimeError):
    """The scanned tree contains no experiments to report on."""


@dataclass(frozen=True)
class TimeSeriesPoint:
    timestamp: datetime
    commit_hash: str | None
    regions: dict[str, PopMetrics]


@dataclass(frozen=True)
class TimeSeriesBundle:
    """Full run history of one resource configuration of one experiment."""

    experiment_path: str
    config: ResourceConfig
    points: tuple[TimeSeriesPoint, ...]


@dataclass(frozen=True)
class Badge:
    region: str
    config_label: str
    value: float
    color: str


@dataclass
class ReportBundle:
    """What render_report wrote, for callers that want to inspect or link it."""

    output_dir: Path
    index_file: Path
    pages: dict[str, Path]
    data_files: dict[str, Path]
    badge_files: list[Path]
    warnings: list[str] = field(default_factory=list)


def build_time_series(runs: Sequence[SourcedRun], experiment: str) -> list[TimeSeriesBundle]:
    """One bundle per resource configuration, all runs included, oldest first."""
    by_config: dict[ResourceConfig, list[SourcedRun]] = {}
    for sourced in runs:
        by_config.setdefault(sourced.run.resources, []).append(sourced)

    bundles = []
    for config in sorted(by_config, key=lambda c: c.sort_key):
        ordered = sorted(
            by_config[config],
            key=lambda s: (resolve_timestamp(s.run), s.run.run_timestamp, s.filename),
        )
        points = tuple(
            TimeSeriesPoint(
                timestamp=resolve_timestamp(sourced.run),
                commit_hash=sourced.run.git.commit_hash if sourced.run.git else None,
                regions={
                    region.name: compute_pop_metrics(region, config)
                    for region in sourced.run.regions
                },
            )
            for sourced in ordered
        )
        bundles.append(TimeSeriesBundle(experiment_path=experiment, config=config, points=points))
    return bundles


def color_for(value: float, kind: str) -> str:
    """Traffic-light color for a ratio: green >= 0.80, orange >= 0.50, else red.

    Scalability values above 1.0 (superlinear) are green by the same rule.
    """
    if kind not in ("efficiency", "scalability"):
        raise ValueError(f"unknown value kind {kind!r}")
    if value < 0:
        raise ValueError(f"ratio must be non-negative, got {value}")
    if value >= 0.80:
        return "green"
    if value >= 0.50:
        return "orange"
    return "red"


def format_ratio(value: float) -> str:
    """Round half-up to two decimals, the precision used everywhere in reports."""
    return str(Decimal(str(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def render_badge_svg(badge: Badge) -> bytes:
    """Flat two-panel SVG badge, 20px high, deterministic byte-for-byte."""
    label = f"PE {badge.region} {badge.config_label}"
    value = format_ratio(badge.value)
    left_width = 10 + 6 * len(label) + 5
    right_width = 5 + 6 * len(value) + 10
    total = left_width + right_width
    color = _BADGE_COLORS[badge.color]
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="20" '
        f'role="img" aria-label="{escape(label, quote=True)}: {value}">\n'
        f'  <rect width="{left_width}" height="20" fill="#555"/>\n'
        f'  <rect x="{left_width}" width="{right_width}" height="20" fill="{color}"/>\n'
        f'  <g fill="#fff" text-anchor="middle" '
        f'font-family="DejaVu Sans,Verdana,sans-serif" font-size="11">\n'
        f'    <text x="{left_width / 2:g}" y="14">{escape(label)}</text>\n'
        f'    <text x="{left_width + right_width / 2:g}" y="14">{value}</text>\n'
        f"  </g>\n"
        f"</svg>\n"
    )
    return svg.encode("utf-8")


# Table rows in display order: (label, color kind, accessor, part of the OpenMP block).
_TABLE_ROWS: list[tuple[str, str, Callable[[TableColumn], float], bool]] = [
    ("Global efficiency", "scalability", lambda c: c.factors.global_efficiency, False),
    ("Parallel efficiency", "efficiency", lambda c: c.metrics.parallel_efficiency, False),
    ("Computation scalability", "scalability", lambda c: c.factors.computation_scalability, False),
    ("IPC scalability", "scalability", lambda c: c.factors.ipc_scalability, False),
    ("Instruction scalability", "scalability", lambda c: c.factors.instruction_scalability, False),
    ("Frequency scalability", "scalability", lambda c: c.factors.frequency_scalability, False),
    ("MPI Parallel efficiency", "efficiency", lambda c: c.metrics.mpi_parallel_efficiency, False),
    ("MPI Load balance", "efficiency", lambda c: c.metrics.mpi_load_balance, False),
    ("MPI Communication efficiency", "efficiency", lambda c: c.metrics.mpi_communication_efficiency, False),
    ("OpenMP Parallel efficiency", "efficiency", lambda c: c.metrics.omp_parallel_efficiency, True),
    ("OpenMP Load Balance", "efficiency", lambda c: c.metrics.omp_load_balance, True),
    ("OpenMP Scheduling efficiency", "efficiency", lambda c: c.metrics.omp_scheduling_efficiency, True),
    ("OpenMP Serialization efficiency", "efficiency", lambda c: c.metrics.omp_serialization_efficiency, True),
]


def export_table_csv(table: EfficiencyTable) -> str:
    """CSV with one row per hierarchy metric, two-decimal cells, '-' for suppressed rows."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["metric", *(column.config.label for column in table.columns)])
    for label, _kind, value_of, omp_row in _TABLE_ROWS:
        if omp_row and table.mpi_only:
            writer.writerow([label, *["-"] * len(table.columns)])
        else:
            writer.writerow([label, *(format_ratio(value_of(column)) for column in table.columns)])
    return buffer.getvalue()


def _table_html(table: EfficiencyTable) -> str:
    header = "".join(f"<th>{escape(column.config.label)}</th>" for column in table.columns)
    rows = []
    for label, kind, value_of, omp_row in _TABLE_ROWS:
        if omp_row and table.mpi_only:
            cells = '<td class="na">-</td>' * len(table.columns)
        else:
            cells = "".join(
                f'<td class="eff-{color_for(value_of(column), kind)}">'
                f"{format_ratio(value_of(column))}</td>"
                for column in table.columns
            )
        rows.append(f'<tr><th scope="row">{escape(label)}</th>{cells}</tr>')
    body = "\n".join(rows)
    return (
        f'<p class="tablemeta">{table.mode.value} scaling, reference {escape(table.reference.label)}</p>\n'
        f"<table>\n<thead><tr><th>metric</th>{header}</tr></thead>\n"
        f"<tbody>\n{body}\n</tbody>\n</table>"
    )


def _config_json(config: ResourceConfig) -> dict:
    return {
        "mpi_ranks": config.mpi_ranks,
        "omp_threads": config.omp_threads,
        "total_cpus": config.total_cpus,
        "label": config.label,
    }


def time_series_json(bundle: TimeSeriesBundle) -> dict:
    return {
        "experiment_path": bundle.experiment_path,
        "config": _config_json(bundle.config),
        "points": [
            {
                "resolved_timestamp": point.timestamp.isoformat(),
                "commit_hash": point.commit_hash,
                "regions": {name: asdict(metrics) for name, metrics in point.regions.items()},
            }
            for point in bundle.points
        ],
    }


def efficiency_table_json(table: EfficiencyTable) -> dict:
    return {
        "region": table.region,
        "mode": table.mode.value,
        "reference": _config_json(table.reference),
        "columns": [
            {
                "config": _config_json(column.config),
                "metrics": asdict(column.metrics),
                "factors": asdict(column.factors),
                "resolved_timestamp": column.timestamp.isoformat(),
            }
            for column in table.columns
        ],
    }


def _experiment_data(
    experiment: str,
    regions: Sequence[str],
    bundles: Sequence[TimeSeriesBundle],
    tables: Sequence[EfficiencyTable],
) -> str:
    document = {
        "experiment": experiment,
        "regions": list(regions),
        "series": [time_series_json(bundle) for bundle in bundles],
        "tables": [efficiency_table_json(table) for table in tables],
    }
    return json.dumps(document, indent=2)


def _page_regions(requested: Sequence[str]) -> list[str]:
    """The implicit Global region first, then the requested ones in order."""
    ordered = [GLOBAL_REGION]
    for name in requested:
        if name not in ordered:
            ordered.append(name)
    return ordered


def _bundled_chart_script() -> str | None:
    asset = resources.files(__package__).joinpath("assets").joinpath(_CHART_ASSET)
    try:
        return asset.read_text(encoding="utf-8")
    except (FileNotFoundError, NotADirectoryError):
        return None


def _html_page(title: str, body: str) -> str:
    return (
        "<!DOCTYPE html>\n"
        '<html lang="en">\n<head>\n<meta charset="utf-8">\n'
        f"<title>{escape(title)}</title>\n<style>\n{_PAGE_CSS}</style>\n</head>\n"
        f"<body>\n{body}\n</body>\n</html>\n"
    )


def _experiment_page(
    experiment: str,
    tables: Sequence[EfficiencyTable],
    island: str,
    chart_script: str | None,
) -> str:
    depth = experiment.count("/") + 1
    back = "../" * depth + "index.html"
    parts = [f'<p><a href="{back}">&larr; all experiments</a></p>']
    parts.append(f"<h1>{escape(experiment)}</h1>")
    for table in tables:
        parts.append(f"<h2>{escape(table.region)}</h2>")
        parts.append(_table_html(table))
    parts.append("<h2>History</h2>")
    parts.append(f'<div id="{CHART_CONTAINER_ID}"></div>')
    # "</" never appears verbatim, so the island cannot terminate its script tag early
    island_safe = island.replace("</", "<\\/")
    parts.append(
        f'<script type="application/json" id="{DATA_ISLAND_ID}">\n{island_safe}\n</script>'
    )
    if chart_script is not None:
        parts.append(f"<script>\n{chart_script}\n</script>")
    return _html_page(f"{experiment} - performance report", "\n".join(parts))


def _index_page(experiments: Sequence[str], badge_files: Sequence[Path]) -> str:
    parts = ["<h1>Performance report</h1>"]
    if badge_files:
        images = "".join(
            f'<img src="badges/{quote(path.name)}" alt="{escape(path.stem)}">'
            for path in badge_files
        )
        parts.append(f'<p class="badges">{images}</p>')
    items = "\n".join(
        f'<li><a href="{quote(path)}/index.html">{escape(path)}</a></li>' for path in experiments
    )
    parts.append(f'<ul class="experiments">\n{items}\n</ul>')
    return _html_page("Performance report", "\n".join(parts))


def _badge_filename(badge: Badge) -> str:
    # region names are user input; keep badge files directly under badges/
    safe_region = re.sub(r"[^A-Za-z0-9._-]", "-", badge.region)
    return f"{safe_region}_{badge.config_label}.svg"


def _collect_badges(tree: ExperimentTree, badge_region: str, warnings: list[str]) -> list[Badge]:
    candidates: dict[ResourceConfig, tuple[tuple, SourcedRun]] = {}
    for runs in tree.experiments.values():
        for sourced in runs:
            if sourced.run.find_region(badge_region) is None:
                continue
            config = sourced.run.resources
            key = (resolve_timestamp(sourced.run), sourced.run.run_timestamp, sourced.filename)
            if config not in candidates or key > candidates[config][0]:
                candidates[config] = (key, sourced)

    badges = []
    for config in sorted(candidates, key=lambda c: c.sort_key):
        sourced = candidates[config][1]
        region = sourced.run.find_region(badge_region)
        assert region is not None
        try:
            value = compute_pop_metrics(region, config).parallel_efficiency
        except DomainError as exc:
            warnings.append(f"badge {badge_region} {config.label}: {exc}")
            continue
        badges.append(
            Badge(
                region=badge_region,
                config_label=config.label,
                value=value,
                color=color_for(value, "efficiency"),
            )
        )
    return badges


def render_report(
    tree: ExperimentTree,
    output_dir: Path | str,
    *,
    regions: Sequence[str] = (),
    badge_region: str | None = None,
    chart_script: object = _AUTO,
) -> ReportBundle:
    """Render the full report for a scanned experiment tree.

    ``regions`` selects the efficiency tables of every experiment page (the
    implicit Global region is always included); regions missing from an
    experiment are reported as warnings, not errors. Badges are written only
    when ``badge_region`` is set, one per resource configuration, from the
    latest run containing that region.
    """
    if not tree.experiments:
        raise EmptyTreeError(f"no experiments found under {tree.root}")
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    warnings = [f"{w.path}: {w.message}" for w in tree.warnings]
    requested = _page_regions(regions)
    if chart_script is _AUTO:
        chart_script = _bundled_chart_script()

    badge_files: list[Path] = []
    if badge_region is not None:
        badges = _collect_badges(tree, badge_region, warnings)
        if badges:
            badge_dir = output_dir / "badges"
            badge_dir.mkdir(parents=True, exist_ok=True)
            for badge in badges:
                path = badge_dir / _badge_filename(badge)
                path.write_bytes(render_badge_svg(badge))
                badge_files.append(path)
        else:
            warnings.append(f"badge region {badge_region!r} not found in any run; no badges written")

    pages: dict[str, Path] = {}
    data_files: dict[str, Path] = {}
    for experiment, runs in tree.experiments.items():
        try:
            bundles = build_time_series(runs, experiment)
        except DomainError as exc:
            warnings.append(f"{experiment}: skipped, inconsistent measurements ({exc})")
            continue

        tables = []
        for region in requested:
            if not any(sourced.run.find_region(region) for sourced in runs):
                if region != GLOBAL_REGION:
                    warnings.append(f"{experiment}: region {region!r} not present, table skipped")
                continue
            try:
                tables.append(build_efficiency_table(runs, region))
            except (RegionMissingError, DomainError) as exc:
                warnings.append(f"{experiment}: table for {region!r} skipped ({exc})")

        island = _experiment_data(experiment, requested, bundles, tables)
        page_dir = output_dir / Path(experiment)
        page_dir.mkdir(parents=True, exist_ok=True)
        data_path = page_dir / "data.json"
        data_path.write_text(island + "\n", encoding="utf-8")
        page_path = page_dir / "index.html"
        page_path.write_text(
            _experiment_page(experiment, tables, island, chart_script), encoding="utf-8"
        )
        pages[experiment] = page_path
        data_files[experiment] = data_path

    index_file = output_dir / "index.html"
    index_file.write_text(_index_page(list(pages), badge_files), encoding="utf-8")

    for message in warnings:
        log.warning("%s", message)
    return ReportBundle(
        output_dir=output_dir,
        index_file=index_file,
        pages=pages,
        data_files=data_files,
        badge_files=badge_files,
        warnings=warnings,
    )
