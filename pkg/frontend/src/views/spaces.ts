// Global inspection: the input space (2-D projection), the mapping (pairwise
// distortion matrix, between-group pairs purple / within pink, darker =
// more distorted) and the output space (rank strip). Hovering an instance
// highlights it (black) and its stored nearest neighbors (blue) in all three
// panels and opens the local inspection panel.

import type { RunDocument } from "../api.js";
import { COLORS, scaleLinear } from "../charts.js";
import { fmtMeasure } from "../format.js";
import type { ViewState } from "../state.js";

const SCATTER = 300;

function scatter(run: RunDocument, state: ViewState): string {
  const xs = run.embedding.map((c) => c[0]);
  const ys = run.embedding.map((c) => c[1]);
  const sx = scaleLinear(Math.min(...xs), Math.max(...xs), 12, SCATTER - 12);
  const sy = scaleLinear(Math.min(...ys), Math.max(...ys), SCATTER - 12, 12);
  const neighbors = new Set(state.detail?.neighbors ?? []);
  const circles = run.embedding
    .map(([x, y], id) => {
      const hover = state.hoverId === id;
      const isNeighbor = neighbors.has(id);
      const stroke = hover
        ? `stroke="${COLORS.highlight}" stroke-width="2.5"`
        : isNeighbor
          ? `stroke="${COLORS.neighbor}" stroke-width="2"`
          : "";
      return `<circle data-instance="${id}" cx="${sx(x).toFixed(1)}" cy="${sy(y).toFixed(1)}" r="${hover || isNeighbor ? 5 : 3}"
        fill="${run.ranking.protected[id] ? COLORS.protected : COLORS.nonProtected}" fill-opacity="0.75" ${stroke}/>`;
    })
    .join("");
  return `<svg width="${SCATTER}" height="${SCATTER}" class="panel-svg" id="input-scatter">${circles}</svg>
    <div class="panel-caption">MDS projection (abstract units)</div>`;
}

function outputStrip(run: RunDocument, state: ViewState): string {
  const n = run.n;
  const sx = scaleLinear(0, n, 0, SCATTER);
  const w = Math.max(SCATTER / n - 0.5, 0.8);
  const neighbors = new Set(state.detail?.neighbors ?? []);
  const bars = run.ranking.order
    .map((id, pos) => {
      const hover = state.hoverId === id;
      const isNeighbor = neighbors.has(id);
      const stroke = hover
        ? `stroke="${COLORS.highlight}" stroke-width="2"`
        : isNeighbor
          ? `stroke="${COLORS.neighbor}" stroke-width="1.5"`
          : "";
      return `<rect data-instance="${id}" x="${sx(pos).toFixed(1)}" y="6" width="${w.toFixed(1)}" height="38"
        fill="${run.ranking.protected[id] ? COLORS.protected : COLORS.nonProtected}" ${stroke}/>`;
    })
    .join("");
  return `<svg width="${SCATTER}" height="50" class="panel-svg" id="output-strip">${bars}</svg>
    <div class="panel-caption">output space (rank order)</div>`;
}

export function renderSpaces(root: HTMLElement, state: ViewState): void {
  const run = state.run;
  if (!run) {
    root.innerHTML = `<h2>Global inspection</h2><p class="muted">No run loaded.</p>`;
    return;
  }
  const m = run.measures;
  const individualTab = state.tab === "individual";
  const mappingMeasures = individualTab
    ? `<div class="readout"><span>rNN mean</span><b>${fmtMeasure(m.rnn_mean)}</b></div>`
    : `<div class="readout"><span>group skew</span><b>${fmtMeasure(m.group_skew)}</b></div>
       <div class="readout"><span>rNN S+</span><b>${fmtMeasure(m.rnn_s_plus)}</b></div>
       <div class="readout"><span>rNN S−</span><b>${fmtMeasure(m.rnn_s_minus)}</b></div>`;
  const matrix = run.distortion
    ? `<canvas id="distortion-canvas" class="matrix-canvas" title="between-group pairs purple, within-group pink; darker = more distortion"></canvas>`
    : `<p class="muted">distortion matrix hidden (n > 500)</p>`;
  root.innerHTML = `<h2>Global inspection</h2>
    <div class="tabs">
      <button class="tab ${individualTab ? "active" : ""}" data-tab="individual">Individual</button>
      <button class="tab ${individualTab ? "" : "active"}" data-tab="group">Group</button>
    </div>
    <div class="spaces-grid">
      <div class="space-panel">
        <h4>Data · input space</h4>
        <div class="readout"><span>group separation</span><b>${fmtMeasure(m.group_separation)}</b></div>
        ${scatter(run, state)}
      </div>
      <div class="space-panel">
        <h4>Model · mapping</h4>
        ${mappingMeasures}
        ${matrix}
      </div>
      <div class="space-panel">
        <h4>Outcome · output space</h4>
        <div class="readout"><span>GFDCG</span><b>${fmtMeasure(m.gfdcg)}</b></div>
        <div class="readout"><span>parity</span><b>${fmtMeasure(m.parity)}</b></div>
        ${outputStrip(run, state)}
      </div>
    </div>`;
}
