/** Pure string rendering of the chart model into legend + SVG rows. */

import type { ChartModel, ChartSpec, Series } from "./model";

const WIDTH = 520;
const HEIGHT = 170;
const MARGIN = { top: 14, right: 14, bottom: 26, left: 52 };

const REGION_COLORS = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];
const CONFIG_DASHES = ["", "6 3", "2 3", "8 3 2 3"];

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function regionColor(model: ChartModel, region: string): string {
  const index = model.regions.indexOf(region);
  return REGION_COLORS[(index + REGION_COLORS.length) % REGION_COLORS.length];
}

function configDash(model: ChartModel, config: string): string {
  const configs = configsOf(model);
  const index = configs.indexOf(config);
  return CONFIG_DASHES[(index + CONFIG_DASHES.length) % CONFIG_DASHES.length];
}

function configsOf(model: ChartModel): string[] {
  const labels: string[] = [];
  for (const row of model.rows) {
    for (const chart of row.charts) {
      for (const series of chart.series) {
        if (!labels.includes(series.config)) {
          labels.push(series.config);
        }
      }
    }
  }
  return labels;
}

interface Scale {
  tMin: number;
  tSpan: number;
  vMin: number;
  vSpan: number;
}

/** Scales cover every series (hidden ones included) so toggling never rescales. */
function chartScale(chart: ChartSpec): Scale {
  let tMin = Infinity;
  let tMax = -Infinity;
  let vMin = chart.unitScale ? 0 : Infinity;
  let vMax = chart.unitScale ? 1 : -Infinity;
  for (const series of chart.series) {
    for (const point of series.points) {
      tMin = Math.min(tMin, point.t);
      tMax = Math.max(tMax, point.t);
      if (!chart.unitScale) {
        vMin = Math.min(vMin, point.value);
        vMax = Math.max(vMax, point.value);
      }
    }
  }
  if (!isFinite(tMin)) {
    tMin = 0;
    tMax = 1;
  }
  if (!isFinite(vMin)) {
    vMin = 0;
    vMax = 1;
  }
  if (!chart.unitScale) {
    const pad = (vMax - vMin || Math.abs(vMax) || 1) * 0.1;
    vMin = Math.min(0, vMin - pad);
    vMax = vMax + pad;
  }
  return { tMin, tSpan: Math.max(1, tMax - tMin), vMin, vSpan: Math.max(1e-12, vMax - vMin) };
}

function x(scale: Scale, t: number): number {
  const inner = WIDTH - MARGIN.left - MARGIN.right;
  return MARGIN.left + ((t - scale.tMin) / scale.tSpan) * inner;
}

function y(scale: Scale, value: number): number {
  const inner = HEIGHT - MARGIN.top - MARGIN.bottom;
  return MARGIN.top + inner - ((value - scale.vMin) / scale.vSpan) * inner;
}

function formatValue(value: number, decimals: number): string {
  if (decimals === 0) {
    return value.toExponential(3);
  }
  return value.toFixed(decimals);
}

function renderSeries(model: ChartModel, chart: ChartSpec, series: Series, scale: Scale): string {
  const color = regionColor(model, series.region);
  const dash = configDash(model, series.config);
  const coords = series.points.map((p) => `${x(scale, p.t).toFixed(1)},${y(scale, p.value).toFixed(1)}`);
  const markers = series.points
    .map((p) => {
      const tooltip = `${series.region} ${series.config} @ ${p.label}: ${formatValue(p.value, chart.decimals)}`;
      return (
        `<circle cx="${x(scale, p.t).toFixed(1)}" cy="${y(scale, p.value).toFixed(1)}" r="3" fill="${color}">` +
        `<title>${escapeHtml(tooltip)}</title></circle>`
      );
    })
    .join("");
  return (
    `<g class="talp-series" data-region="${escapeHtml(series.region)}" data-config="${escapeHtml(series.config)}">` +
    `<polyline fill="none" stroke="${color}" stroke-width="1.6"` +
    (dash ? ` stroke-dasharray="${dash}"` : "") +
    ` points="${coords.join(" ")}"/>` +
    markers +
    `</g>`
  );
}

function renderChart(model: ChartModel, chart: ChartSpec): string {
  const scale = chartScale(chart);
  const axisY = HEIGHT - MARGIN.bottom;
  const shown = chart.series.filter((series) => model.visible[series.region]);
  const body = shown.map((series) => renderSeries(model, chart, series, scale)).join("");
  const labels =
    `<text x="${MARGIN.left}" y="${HEIGHT - 6}" font-size="10" fill="#555">${gridLabel(scale, scale.tMin)}</text>` +
    `<text x="${WIDTH - MARGIN.right}" y="${HEIGHT - 6}" font-size="10" fill="#555" text-anchor="end">${gridLabel(
      scale,
      scale.tMin + scale.tSpan,
    )}</text>` +
    `<text x="4" y="${MARGIN.top + 4}" font-size="10" fill="#555">${formatAxis(scale.vMin + scale.vSpan, chart)}</text>` +
    `<text x="4" y="${axisY}" font-size="10" fill="#555">${formatAxis(scale.vMin, chart)}</text>`;
  return (
    `<figure class="talp-chart">` +
    `<figcaption>${escapeHtml(chart.title)}</figcaption>` +
    `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" width="${WIDTH}" height="${HEIGHT}" role="img">` +
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${WIDTH - MARGIN.left - MARGIN.right}"` +
    ` height="${HEIGHT - MARGIN.top - MARGIN.bottom}" fill="none" stroke="#ccc"/>` +
    labels +
    body +
    `</svg></figure>`
  );
}

function gridLabel(scale: Scale, t: number): string {
  return new Date(t).toISOString().slice(0, 10);
}

function formatAxis(value: number, chart: ChartSpec): string {
  return formatValue(value, chart.decimals === 0 ? 0 : 2);
}

function renderLegend(model: ChartModel): string {
  const entries = model.regions
    .map((region) => {
      const color = regionColor(model, region);
      const off = model.visible[region] ? "" : " talp-off";
      return (
        `<button type="button" class="talp-legend-entry${off}" data-region="${escapeHtml(region)}">` +
        `<span class="talp-swatch" style="background:${color}"></span>${escapeHtml(region)}</button>`
      );
    })
    .join("");
  return `<div class="talp-legend">${entries}</div>`;
}

const STYLE = `
.talp-legend { margin: 0.4em 0 0.8em; }
.talp-legend-entry { margin-right: 0.5em; border: 1px solid #bbb; background: #fff;
  padding: 0.15em 0.5em; cursor: pointer; font: inherit; }
.talp-legend-entry.talp-off { opacity: 0.4; }
.talp-swatch { display: inline-block; width: 0.8em; height: 0.8em; margin-right: 0.35em; }
.talp-row { display: flex; flex-wrap: wrap; gap: 1em; margin-bottom: 1em; }
.talp-chart figcaption { font-size: 0.85em; color: #444; }
`;

export function renderModel(model: ChartModel): string {
  const rows = model.rows
    .map(
      (row, index) =>
        `<div class="talp-row" data-row="${index}">` +
        row.charts.map((chart) => renderChart(model, chart)).join("") +
        `</div>`,
    )
    .join("");
  return `<style>${STYLE}</style>` + renderLegend(model) + rows;
}
