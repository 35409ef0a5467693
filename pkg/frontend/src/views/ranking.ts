// Ranking view: one vertical bar per individual ordered by rank (group
// indicator at the bottom, hatched when the true label is negative), the
// within-ranking fairness/utility trend lines, the top-k slider, and the
// measure readouts. Slider moves read stored curves; nothing is recomputed.

import type { RunDocument } from "../api.js";
import { COLORS, hatchDefs, polyline, scaleLinear } from "../charts.js";
import { fmtMeasure } from "../format.js";
import type { ViewState } from "../state.js";

const W = 760;
const H = 170;
const STRIP_H = 110;

function measureReadouts(run: RunDocument, state: ViewState): string {
  const m = run.measures;
  const idx = state.sliderK - 1;
  const c = m.curves;
  const rows = [
    ["between-ranking", [
      ["parity", m.parity],
      ["utility (linear nDCG)", m.utility],
      ["rNN mean", m.rnn_mean],
    ]],
    [`within-ranking @ k=${state.sliderK}`, [
      ["GFDCG", c.gfdcg[idx]],
      ["precision", c.precision[idx]],
      ["parity", c.parity[idx]],
    ]],
  ] as const;
  return rows
    .map(
      ([title, entries]) => `<div class="readout-group"><h4>${title}</h4>${entries
        .map(
          ([name, v]) => `<div class="readout"><span>${name}</span><b data-measure="${name}">${fmtMeasure(
            v as number | null,
          )}</b></div>`,
        )
        .join("")}</div>`,
    )
    .join("");
}

export function renderRanking(root: HTMLElement, state: ViewState): void {
  const run = state.run;
  if (!run) {
    root.innerHTML = `<h2>Ranking</h2><p class="muted">No run loaded.</p>`;
    return;
  }
  const n = run.n;
  const [lo, hi] = state.viewWindow;
  const shown = Math.max(1, hi - lo + 1);
  const sx = scaleLinear(lo, hi + 1, 0, W);
  const barW = Math.max(W / shown - 1, 1);
  const maxScore = Math.max(...run.ranking.scores, 1e-12);

  const bars: string[] = [];
  for (let pos = lo - 1; pos < hi; pos++) {
    const id = run.ranking.order[pos];
    const score = run.ranking.scores[id];
    const h = Math.max((score / maxScore) * (STRIP_H - 14), 1);
    const x = sx(pos + 1);
    const group = run.ranking.protected[id] ? COLORS.protected : COLORS.nonProtected;
    const hover = state.hoverId === id;
    const isNeighbor = state.detail?.neighbors.includes(id) ?? false;
    const fill = run.ranking.labels[id] === 0 ? "url(#hatch)" : group;
    bars.push(
      `<g data-instance="${id}">
        <rect x="${x.toFixed(1)}" y="${(STRIP_H - 12 - h).toFixed(1)}" width="${barW.toFixed(1)}" height="${h.toFixed(1)}"
          fill="${fill}" stroke="${hover ? COLORS.highlight : isNeighbor ? COLORS.neighbor : "none"}"
          stroke-width="${hover || isNeighbor ? 2 : 0}"/>
        <rect x="${x.toFixed(1)}" y="${STRIP_H - 9}" width="${barW.toFixed(1)}" height="7" fill="${group}"/>
      </g>`,
    );
  }

  // within-ranking trend lines across every k (fairness blue, utility red)
  const sy = scaleLinear(0, 1.5, H - 4, 4);
  const kx = scaleLinear(1, n, 0, W);
  const curved = (values: (number | null)[]): Array<[number, number] | null> =>
    values.map((v, i) => (v === null || !isFinite(v) ? null : [kx(i + 1), sy(Math.min(v, 1.5))]));
  const trends =
    polyline(curved(run.measures.curves.gfdcg), COLORS.fairness) +
    polyline(curved(run.measures.curves.precision), COLORS.utility);
  const kMark = kx(state.sliderK);

  root.innerHTML = `<h2>Ranking ${run.ranking.reranked ? `<span class="tag">re-ranked</span>` : ""}</h2>
    <div class="readouts">${measureReadouts(run, state)}</div>
    <svg width="${W}" height="${H}" class="trend">
      ${polyline([[0, sy(1)], [W, sy(1)]], "#ddd", 1)}
      ${trends}
      <line x1="${kMark.toFixed(1)}" y1="0" x2="${kMark.toFixed(1)}" y2="${H}" stroke="#888" stroke-dasharray="4 3"/>
      <text x="${Math.min(kMark + 4, W - 40).toFixed(1)}" y="12" class="axis">k=${state.sliderK}</text>
      <text x="4" y="${sy(1) - 3}" class="axis">1.0</text>
    </svg>
    <svg width="${W}" height="${STRIP_H}" class="strip" id="rank-strip">
      ${hatchDefs()}
      ${bars.join("")}
    </svg>
    <div class="sliders">
      <label>top-k
        <input type="range" id="k-slider" min="1" max="${n}" value="${state.sliderK}">
        <span>${state.sliderK}</span>
      </label>
      <label>window
        <input type="number" id="win-lo" min="1" max="${n}" value="${lo}"> –
        <input type="number" id="win-hi" min="1" max="${n}" value="${hi}">
      </label>
    </div>
    <div class="legend">
      <span><i style="background:${COLORS.protected}"></i> protected</span>
      <span><i style="background:${COLORS.nonProtected}"></i> non-protected</span>
      <span><i class="hatched"></i> negative label</span>
      <span><i style="background:${COLORS.fairness}"></i> within-ranking fairness (GFDCG)</span>
      <span><i style="background:${COLORS.utility}"></i> within-ranking utility (precision)</span>
    </div>`;
}
