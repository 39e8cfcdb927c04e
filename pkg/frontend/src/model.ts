/** Chart model: the island data reorganized into rows of per-metric series. */

import type { IslandData, MetricKey, SeriesBundleJson } from "./types";

export interface SeriesPoint {
  /** Milliseconds since epoch of the resolved run timestamp. */
  t: number;
  /** Point label: short commit hash when available, otherwise the date. */
  label: string;
  value: number;
}

export interface Series {
  region: string;
  config: string;
  points: SeriesPoint[];
}

export interface ChartSpec {
  key: MetricKey;
  title: string;
  /** Tooltip precision; efficiencies are shown with two decimals. */
  decimals: number;
  /** Efficiencies share a fixed 0..1 value axis. */
  unitScale: boolean;
  series: Series[];
}

export interface ChartRow {
  title: string;
  charts: ChartSpec[];
}

export interface ChartModel {
  experiment: string;
  /** All regions, highlighted ones first; fixed legend order. */
  regions: string[];
  highlighted: string[];
  visible: Record<string, boolean>;
  rows: ChartRow[];
}

const EFFICIENCY_METRICS: Array<[MetricKey, string]> = [
  ["parallel_efficiency", "Parallel efficiency"],
  ["mpi_parallel_efficiency", "MPI parallel efficiency"],
  ["mpi_load_balance", "MPI load balance"],
  ["mpi_communication_efficiency", "MPI communication efficiency"],
  ["omp_parallel_efficiency", "OpenMP parallel efficiency"],
  ["omp_load_balance", "OpenMP load balance"],
  ["omp_scheduling_efficiency", "OpenMP scheduling efficiency"],
  ["omp_serialization_efficiency", "OpenMP serialization efficiency"],
];

export function parseIsland(text: string | null | undefined): IslandData | null {
  if (!text) {
    return null;
  }
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) {
    return null;
  }
  const island = data as Partial<IslandData>;
  if (typeof island.experiment !== "string" || !Array.isArray(island.series)) {
    return null;
  }
  return {
    experiment: island.experiment,
    regions: Array.isArray(island.regions) ? island.regions.filter((r) => typeof r === "string") : [],
    series: island.series as SeriesBundleJson[],
    tables: Array.isArray(island.tables) ? island.tables : [],
  };
}

function regionNames(data: IslandData): string[] {
  const present = new Set<string>();
  for (const bundle of data.series) {
    for (const point of bundle.points) {
      for (const name of Object.keys(point.regions)) {
        present.add(name);
      }
    }
  }
  const highlighted = data.regions.filter((name) => present.has(name));
  const rest = [...present].filter((name) => !highlighted.includes(name)).sort();
  return [...highlighted, ...rest];
}

function seriesFor(data: IslandData, regions: string[], key: MetricKey): Series[] {
  const series: Series[] = [];
  for (const region of regions) {
    for (const bundle of data.series) {
      const points = pointsFor(bundle, region, key);
      if (points.length > 0) {
        series.push({ region, config: bundle.config.label, points });
      }
    }
  }
  return series;
}

function pointsFor(bundle: SeriesBundleJson, region: string, key: MetricKey): SeriesPoint[] {
  const points: SeriesPoint[] = [];
  // plotted in island order, which the generator guarantees to be sorted
  for (const point of bundle.points) {
    const metrics = point.regions[region];
    if (!metrics) {
      continue;
    }
    const t = Date.parse(point.resolved_timestamp);
    const label = point.commit_hash ? point.commit_hash.slice(0, 7) : point.resolved_timestamp.slice(0, 10);
    points.push({ t, label, value: metrics[key] });
  }
  return points;
}

export function buildModel(data: IslandData): ChartModel {
  const regions = regionNames(data);
  const visible: Record<string, boolean> = {};
  for (const region of regions) {
    visible[region] = true;
  }
  const chart = (key: MetricKey, title: string, decimals: number, unitScale: boolean): ChartSpec => ({
    key,
    title,
    decimals,
    unitScale,
    series: seriesFor(data, regions, key),
  });

  const rows: ChartRow[] = [
    { title: "Elapsed time", charts: [chart("elapsed_s", "Elapsed time [s]", 3, false)] },
    {
      title: "Computation",
      charts: [
        chart("ipc", "IPC", 2, false),
        chart("frequency_ghz", "Frequency [GHz]", 2, false),
        chart("instructions", "Instructions", 0, false),
      ],
    },
    ...EFFICIENCY_METRICS.map(([key, title]) => ({
      title,
      charts: [chart(key, title, 2, true)],
    })),
  ];

  return {
    experiment: data.experiment,
    regions,
    highlighted: data.regions.filter((name) => regions.includes(name)),
    visible,
    rows,
  };
}

/** Flip one region's visibility across every row; unknown names are a no-op. */
export function toggleRegion(model: ChartModel, region: string): ChartModel {
  if (region in model.visible) {
    model.visible[region] = !model.visible[region];
  }
  return model;
}
