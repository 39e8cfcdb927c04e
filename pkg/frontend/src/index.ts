export { buildModel, parseIsland, toggleRegion } from "./model";
export type { ChartModel, ChartRow, ChartSpec, Series } from "./model";
export { renderModel } from "./render";
export { CONTAINER_ID, DATA_ISLAND_ID, hydrate } from "./hydrate";

import { hydrate } from "./hydrate";

// Self-hydrate when inlined into a report page.
if (typeof document !== "undefined") {
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", () => hydrate(document));
  } else {
    hydrate(document);
  }
}
