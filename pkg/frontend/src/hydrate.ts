/** Wiring: read the in-page data island, render charts, bind legend toggles. */

import { buildModel, parseIsland, toggleRegion, type ChartModel } from "./model";
import { renderModel } from "./render";

export const DATA_ISLAND_ID = "talp-data";
export const CONTAINER_ID = "talp-charts";

export interface Hydrated {
  model: ChartModel;
  container: Element;
  rerender: () => void;
}

function showNotice(container: Element, message: string): void {
  container.innerHTML = `<p class="talp-no-data">${message}</p>`;
}

/**
 * Render the charts of the current page. Reads only the embedded island;
 * never performs network requests. Returns null (leaving a visible notice)
 * when the island is missing, unparsable, or empty.
 */
export function hydrate(doc: Document): Hydrated | null {
  const container = doc.getElementById(CONTAINER_ID);
  if (!container) {
    return null;
  }
  const island = doc.getElementById(DATA_ISLAND_ID);
  const data = parseIsland(island ? island.textContent : null);
  if (!data) {
    showNotice(container, "No chart data available on this page.");
    return null;
  }
  const model = buildModel(data);
  if (model.regions.length === 0) {
    showNotice(container, "No measurement history to plot yet.");
    return null;
  }

  const rerender = () => {
    container.innerHTML = renderModel(model);
  };
  rerender();

  container.addEventListener("click", (event) => {
    const target = event.target as Element | null;
    const entry = target && target.closest ? target.closest("[data-region]") : null;
    if (entry && entry.classList.contains("talp-legend-entry")) {
      toggleRegion(model, entry.getAttribute("data-region") || "");
      rerender();
    }
  });

  return { model, container, rerender };
}
