import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { hydrate } from "../src/hydrate";
import { buildModel, toggleRegion } from "../src/model";
import { renderModel } from "../src/render";
import { islandText, loadIsland } from "./fixture";

function mountPage(island: string | null): void {
  const script =
    island === null
      ? ""
      : `<script type="application/json" id="talp-data">${island.replace(/<\//g, "<\\/")}</script>`;
  document.body.innerHTML = `<div id="talp-charts"></div>${script}`;
}

function seriesIn(row: Element): string[] {
  return Array.from(row.querySelectorAll(".talp-series")).map(
    (el) => `${el.getAttribute("data-region")}/${el.getAttribute("data-config")}`,
  );
}

let fetchSpy: ReturnType<typeof vi.fn>;

beforeEach(() => {
  fetchSpy = vi.fn(() => {
    throw new Error("network access is forbidden at report runtime");
  });
  vi.stubGlobal("fetch", fetchSpy);
  vi.stubGlobal(
    "XMLHttpRequest",
    class {
      constructor() {
        fetchSpy();
      }
    },
  );
});

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("hydrate", () => {
  it("renders every chart row with one series per region and configuration", () => {
    mountPage(islandText());
    const hydrated = hydrate(document);
    expect(hydrated).not.toBeNull();

    const rows = document.querySelectorAll(".talp-row");
    expect(rows).toHaveLength(10);
    // first row: elapsed time, 3 regions x 2 configs
    expect(seriesIn(rows[0])).toHaveLength(6);
    // every row shows series of all three regions
    for (const row of rows) {
      const regions = new Set(
        Array.from(row.querySelectorAll(".talp-series")).map((el) => el.getAttribute("data-region")),
      );
      expect(regions).toEqual(new Set(["Global", "initialize", "timestep"]));
    }
    const legend = document.querySelectorAll(".talp-legend-entry");
    expect(legend).toHaveLength(3);
  });

  it("toggling a region removes its series from every row and back", () => {
    mountPage(islandText());
    const hydrated = hydrate(document)!;
    const container = hydrated.container;
    const initial = container.innerHTML;

    toggleRegion(hydrated.model, "initialize");
    hydrated.rerender();
    for (const row of Array.from(container.querySelectorAll(".talp-row"))) {
      expect(row.querySelectorAll('.talp-series[data-region="initialize"]')).toHaveLength(0);
    }
    expect(seriesIn(container.querySelectorAll(".talp-row")[0])).toHaveLength(4);

    toggleRegion(hydrated.model, "initialize");
    hydrated.rerender();
    expect(container.innerHTML).toBe(initial);
  });

  it("legend clicks drive the toggle", () => {
    mountPage(islandText());
    const hydrated = hydrate(document)!;
    const button = document.querySelector(
      '.talp-legend-entry[data-region="timestep"]',
    ) as HTMLButtonElement;
    button.click();
    expect(hydrated.model.visible["timestep"]).toBe(false);
    expect(
      document.querySelectorAll('.talp-series[data-region="timestep"]'),
    ).toHaveLength(0);
    button2().click();
    expect(hydrated.model.visible["timestep"]).toBe(true);

    function button2(): HTMLButtonElement {
      return document.querySelector(
        '.talp-legend-entry[data-region="timestep"]',
      ) as HTMLButtonElement;
    }
  });

  it("returns null when the chart container is absent", () => {
    document.body.innerHTML = `<p>bare page</p>`;
    expect(hydrate(document)).toBeNull();
  });

  it("shows a notice instead of throwing on a malformed island", () => {
    mountPage("{definitely: not json");
    expect(hydrate(document)).toBeNull();
    expect(document.querySelector(".talp-no-data")).not.toBeNull();
  });

  it("shows a notice when the island is missing", () => {
    mountPage(null);
    expect(hydrate(document)).toBeNull();
    expect(document.querySelector(".talp-no-data")).not.toBeNull();
  });

  it("shows an empty-state notice for an island without series", () => {
    mountPage(JSON.stringify({ experiment: "x", regions: [], series: [], tables: [] }));
    expect(hydrate(document)).toBeNull();
    expect(document.querySelector(".talp-no-data")).not.toBeNull();
  });

  it("performs zero network requests", () => {
    mountPage(islandText());
    const hydrated = hydrate(document)!;
    toggleRegion(hydrated.model, "Global");
    hydrated.rerender();
    expect(fetchSpy).not.toHaveBeenCalled();
  });
});

describe("tooltips", () => {
  it("shows efficiencies with two decimals, matching the island values", () => {
    const data = loadIsland();
    const model = buildModel(data);
    const html = renderModel(model);
    const bundle = data.series[0];
    const point = bundle.points[0];
    const expected = point.regions["Global"].parallel_efficiency.toFixed(2);
    const label = point.commit_hash!.slice(0, 7);
    expect(html).toContain(`Global ${bundle.config.label} @ ${label}: ${expected}`);
  });
});
