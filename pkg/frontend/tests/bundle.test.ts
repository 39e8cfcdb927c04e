import { existsSync, readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { islandText } from "./fixture";

const here = dirname(fileURLToPath(import.meta.url));
const bundlePath = join(here, "..", "dist", "chart-bundle.js");

// Runs the built artifact exactly as a report page would (requires `npm run build`).
describe.skipIf(!existsSync(bundlePath))("built bundle", () => {
  it("self-hydrates the page it is inlined into", () => {
    document.body.innerHTML =
      `<div id="talp-charts"></div>` +
      `<script type="application/json" id="talp-data">${islandText().replace(/<\//g, "<\\/")}</script>`;
    const source = readFileSync(bundlePath, "utf-8");
    new Function(source)();
    expect(document.querySelectorAll(".talp-row")).toHaveLength(10);
    expect(
      document.querySelectorAll('.talp-row[data-row="0"] .talp-series'),
    ).toHaveLength(6);
  });
});
