/** Shape of the data island embedded in every experiment page. */

export interface ConfigJson {
  mpi_ranks: number;
  omp_threads: number;
  total_cpus: number;
  label: string;
}

export interface MetricsJson {
  elapsed_s: number;
  parallel_efficiency: number;
  mpi_parallel_efficiency: number;
  mpi_load_balance: number;
  mpi_communication_efficiency: number;
  omp_parallel_efficiency: number;
  omp_load_balance: number;
  omp_scheduling_efficiency: number;
  omp_serialization_efficiency: number;
  ipc: number;
  frequency_ghz: number;
  instructions: number;
}

export interface SeriesPointJson {
  resolved_timestamp: string;
  commit_hash: string | null;
  regions: Record<string, MetricsJson>;
}

export interface SeriesBundleJson {
  experiment_path: string;
  config: ConfigJson;
  points: SeriesPointJson[];
}

export interface IslandData {
  experiment: string;
  regions: string[];
  series: SeriesBundleJson[];
  tables: unknown[];
}

export type MetricKey = keyof MetricsJson;
