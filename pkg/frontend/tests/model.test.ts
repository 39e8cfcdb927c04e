import { describe, expect, it } from "vitest";

import { buildModel, parseIsland, toggleRegion } from "../src/model";
import { loadIsland } from "./fixture";

describe("parseIsland", () => {
  it("accepts the generator output", () => {
    const data = parseIsland(JSON.stringify(loadIsland()));
    expect(data).not.toBeNull();
    expect(data!.experiment).toBe("mesh_2/weak_scaling");
    expect(data!.series).toHaveLength(2);
  });

  it("rejects malformed JSON", () => {
    expect(parseIsland("{not json")).toBeNull();
  });

  it("rejects missing or empty input", () => {
    expect(parseIsland(null)).toBeNull();
    expect(parseIsland("")).toBeNull();
    expect(parseIsland("42")).toBeNull();
    expect(parseIsland('{"experiment": 3, "series": []}')).toBeNull();
  });
});

describe("buildModel", () => {
  const model = buildModel(loadIsland());

  it("keeps the highlighted region order first", () => {
    expect(model.regions).toEqual(["Global", "initialize", "timestep"]);
    expect(model.highlighted).toEqual(["Global", "initialize", "timestep"]);
  });

  it("puts highlighted regions before the remaining ones", () => {
    const data = loadIsland();
    data.regions = ["timestep"];
    const reordered = buildModel(data);
    expect(reordered.regions).toEqual(["timestep", "Global", "initialize"]);
    expect(reordered.highlighted).toEqual(["timestep"]);
  });

  it("has the documented row layout", () => {
    expect(model.rows[0].title).toBe("Elapsed time");
    expect(model.rows[1].charts.map((chart) => chart.key)).toEqual([
      "ipc",
      "frequency_ghz",
      "instructions",
    ]);
    expect(model.rows).toHaveLength(10); // elapsed + computation + 8 efficiency metrics
  });

  it("builds one series per region and configuration", () => {
    const elapsed = model.rows[0].charts[0];
    expect(elapsed.series).toHaveLength(6);
    const pairs = elapsed.series.map((series) => `${series.region}/${series.config}`);
    expect(new Set(pairs).size).toBe(6);
  });

  it("keeps points in island order", () => {
    for (const series of model.rows[0].charts[0].series) {
      expect(series.points).toHaveLength(2);
      expect(series.points[0].t).toBeLessThan(series.points[1].t);
      expect(series.points[0].label).toBe("9dc04ca");
      expect(series.points[1].label).toBe("ed8b9ef");
    }
  });

  it("starts with every region visible", () => {
    expect(Object.values(model.visible).every(Boolean)).toBe(true);
  });
});

describe("toggleRegion", () => {
  it("is an involution", () => {
    const model = buildModel(loadIsland());
    toggleRegion(model, "initialize");
    expect(model.visible["initialize"]).toBe(false);
    toggleRegion(model, "initialize");
    expect(model.visible["initialize"]).toBe(true);
  });

  it("ignores unknown regions", () => {
    const model = buildModel(loadIsland());
    const before = { ...model.visible };
    toggleRegion(model, "does-not-exist");
    expect(model.visible).toEqual(before);
  });
});
