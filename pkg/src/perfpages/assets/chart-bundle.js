"use strict";
(() => {
  // src/model.ts
  var EFFICIENCY_METRICS = [
    ["parallel_efficiency", "Parallel efficiency"],
    ["mpi_parallel_efficiency", "MPI parallel efficiency"],
    ["mpi_load_balance", "MPI load balance"],
    ["mpi_communication_efficiency", "MPI communication efficiency"],
    ["omp_parallel_efficiency", "OpenMP parallel efficiency"],
    ["omp_load_balance", "OpenMP load balance"],
    ["omp_scheduling_efficiency", "OpenMP scheduling efficiency"],
    ["omp_serialization_efficiency", "OpenMP serialization efficiency"]
  ];
  function parseIsland(text) {
    if (!text) {
      return null;
    }
    let data;
    try {
      data = JSON.parse(text);
    } catch (e) {
      return null;
    }
    if (typeof data !== "object" || data === null) {
      return null;
    }
    const island = data;
    if (typeof island.experiment !== "string" || !Array.isArray(island.series)) {
      return null;
    }
    return {
      experiment: island.experiment,
      regions: Array.isArray(island.regions) ? island.regions.filter((r) => typeof r === "string") : [],
      series: island.series,
      tables: Array.isArray(island.tables) ? island.tables : []
    };
  }
  function regionNames(data) {
    const present = /* @__PURE__ */ new Set();
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
  function seriesFor(data, regions, key) {
    const series = [];
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
  function pointsFor(bundle, region, key) {
    const points = [];
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
  function buildModel(data) {
    const regions = regionNames(data);
    const visible = {};
    for (const region of regions) {
      visible[region] = true;
    }
    const chart = (key, title, decimals, unitScale) => ({
      key,
      title,
      decimals,
      unitScale,
      series: seriesFor(data, regions, key)
    });
    const rows = [
      { title: "Elapsed time", charts: [chart("elapsed_s", "Elapsed time [s]", 3, false)] },
      {
        title: "Computation",
        charts: [
          chart("ipc", "IPC", 2, false),
          chart("frequency_ghz", "Frequency [GHz]", 2, false),
          chart("instructions", "Instructions", 0, false)
        ]
      },
      ...EFFICIENCY_METRICS.map(([key, title]) => ({
        title,
        charts: [chart(key, title, 2, true)]
      }))
    ];
    return {
      experiment: data.experiment,
      regions,
      highlighted: data.regions.filter((name) => regions.includes(name)),
      visible,
      rows
    };
  }
  function toggleRegion(model, region) {
    if (region in model.visible) {
      model.visible[region] = !model.visible[region];
    }
    return model;
  }

  // src/render.ts
  var WIDTH = 520;
  var HEIGHT = 170;
  var MARGIN = { top: 14, right: 14, bottom: 26, left: 52 };
  var REGION_COLORS = [
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f"
  ];
  var CONFIG_DASHES = ["", "6 3", "2 3", "8 3 2 3"];
  function escapeHtml(text) {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
  }
  function regionColor(model, region) {
    const index = model.regions.indexOf(region);
    return REGION_COLORS[(index + REGION_COLORS.length) % REGION_COLORS.length];
  }
  function configDash(model, config) {
    const configs = configsOf(model);
    const index = configs.indexOf(config);
    return CONFIG_DASHES[(index + CONFIG_DASHES.length) % CONFIG_DASHES.length];
  }
  function configsOf(model) {
    const labels = [];
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
  function chartScale(chart) {
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
  function x(scale, t) {
    const inner = WIDTH - MARGIN.left - MARGIN.right;
    return MARGIN.left + (t - scale.tMin) / scale.tSpan * inner;
  }
  function y(scale, value) {
    const inner = HEIGHT - MARGIN.top - MARGIN.bottom;
    return MARGIN.top + inner - (value - scale.vMin) / scale.vSpan * inner;
  }
  function formatValue(value, decimals) {
    if (decimals === 0) {
      return value.toExponential(3);
    }
    return value.toFixed(decimals);
  }
  function renderSeries(model, chart, series, scale) {
    const color = regionColor(model, series.region);
    const dash = configDash(model, series.config);
    const coords = series.points.map((p) => `${x(scale, p.t).toFixed(1)},${y(scale, p.value).toFixed(1)}`);
    const markers = series.points.map((p) => {
      const tooltip = `${series.region} ${series.config} @ ${p.label}: ${formatValue(p.value, chart.decimals)}`;
      return `<circle cx="${x(scale, p.t).toFixed(1)}" cy="${y(scale, p.value).toFixed(1)}" r="3" fill="${color}"><title>${escapeHtml(tooltip)}</title></circle>`;
    }).join("");
    return `<g class="talp-series" data-region="${escapeHtml(series.region)}" data-config="${escapeHtml(series.config)}"><polyline fill="none" stroke="${color}" stroke-width="1.6"` + (dash ? ` stroke-dasharray="${dash}"` : "") + ` points="${coords.join(" ")}"/>` + markers + `</g>`;
  }
  function renderChart(model, chart) {
    const scale = chartScale(chart);
    const axisY = HEIGHT - MARGIN.bottom;
    const shown = chart.series.filter((series) => model.visible[series.region]);
    const body = shown.map((series) => renderSeries(model, chart, series, scale)).join("");
    const labels = `<text x="${MARGIN.left}" y="${HEIGHT - 6}" font-size="10" fill="#555">${gridLabel(scale, scale.tMin)}</text><text x="${WIDTH - MARGIN.right}" y="${HEIGHT - 6}" font-size="10" fill="#555" text-anchor="end">${gridLabel(
      scale,
      scale.tMin + scale.tSpan
    )}</text><text x="4" y="${MARGIN.top + 4}" font-size="10" fill="#555">${formatAxis(scale.vMin + scale.vSpan, chart)}</text><text x="4" y="${axisY}" font-size="10" fill="#555">${formatAxis(scale.vMin, chart)}</text>`;
    return `<figure class="talp-chart"><figcaption>${escapeHtml(chart.title)}</figcaption><svg viewBox="0 0 ${WIDTH} ${HEIGHT}" width="${WIDTH}" height="${HEIGHT}" role="img"><rect x="${MARGIN.left}" y="${MARGIN.top}" width="${WIDTH - MARGIN.left - MARGIN.right}" height="${HEIGHT - MARGIN.top - MARGIN.bottom}" fill="none" stroke="#ccc"/>` + labels + body + `</svg></figure>`;
  }
  function gridLabel(scale, t) {
    return new Date(t).toISOString().slice(0, 10);
  }
  function formatAxis(value, chart) {
    return formatValue(value, chart.decimals === 0 ? 0 : 2);
  }
  function renderLegend(model) {
    const entries = model.regions.map((region) => {
      const color = regionColor(model, region);
      const off = model.visible[region] ? "" : " talp-off";
      return `<button type="button" class="talp-legend-entry${off}" data-region="${escapeHtml(region)}"><span class="talp-swatch" style="background:${color}"></span>${escapeHtml(region)}</button>`;
    }).join("");
    return `<div class="talp-legend">${entries}</div>`;
  }
  var STYLE = `
.talp-legend { margin: 0.4em 0 0.8em; }
.talp-legend-entry { margin-right: 0.5em; border: 1px solid #bbb; background: #fff;
  padding: 0.15em 0.5em; cursor: pointer; font: inherit; }
.talp-legend-entry.talp-off { opacity: 0.4; }
.talp-swatch { display: inline-block; width: 0.8em; height: 0.8em; margin-right: 0.35em; }
.talp-row { display: flex; flex-wrap: wrap; gap: 1em; margin-bottom: 1em; }
.talp-chart figcaption { font-size: 0.85em; color: #444; }
`;
  function renderModel(model) {
    const rows = model.rows.map(
      (row, index) => `<div class="talp-row" data-row="${index}">` + row.charts.map((chart) => renderChart(model, chart)).join("") + `</div>`
    ).join("");
    return `<style>${STYLE}</style>` + renderLegend(model) + rows;
  }

  // src/hydrate.ts
  var DATA_ISLAND_ID = "talp-data";
  var CONTAINER_ID = "talp-charts";
  function showNotice(container, message) {
    container.innerHTML = `<p class="talp-no-data">${message}</p>`;
  }
  function hydrate(doc) {
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
      const target = event.target;
      const entry = target && target.closest ? target.closest("[data-region]") : null;
      if (entry && entry.classList.contains("talp-legend-entry")) {
        toggleRegion(model, entry.getAttribute("data-region") || "");
        rerender();
      }
    });
    return { model, container, rerender };
  }

  // src/index.ts
  if (typeof document !== "undefined") {
    if (document.readyState === "loading") {
      document.addEventListener("DOMContentLoaded", () => hydrate(document));
    } else {
      hydrate(document);
    }
  }
})();
