import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { IslandData } from "../src/types";

const here = dirname(fileURLToPath(import.meta.url));

/** A real data.json produced by the report generator: 3 regions x 2 configs x 2 points. */
export function loadIsland(): IslandData {
  return JSON.parse(readFileSync(join(here, "fixtures", "weak_scaling_data.json"), "utf-8"));
}

export function islandText(): string {
  return readFileSync(join(here, "fixtures", "weak_scaling_data.json"), "utf-8");
}
