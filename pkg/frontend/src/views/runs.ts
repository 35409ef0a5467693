// Ranking list: one row per generated ranking with linear gauges for the
// representative group fairness (parity), individual fairness (rNN mean) and
// utility measures; the diamond marks the ideal score. Clicking a row loads
// that run into every view.

import type { RunSummary } from "../api.js";
import { esc, gauge } from "../charts.js";
import { fmtMeasure } from "../format.js";
import type { ViewState } from "../state.js";

const GAUGE_W = 110;

export function renderRuns(root: HTMLElement, state: ViewState): void {
  if (state.runs.length === 0) {
    root.innerHTML = `<h2>Ranking list</h2><p class="muted">No runs yet.</p>`;
    return;
  }
  const rows = state.runs
    .map((r: RunSummary) => {
      const active = state.run?.run_id === r.run_id;
      const label = `${r.config.model_kind === "acf_logistic" ? "ACF" : "LR"} · ${
        r.config.features.length
      }f · k=${r.config.k}${r.config.rerank ? " · rr" : ""}`;
      return `<tr class="run-row ${active ? "active" : ""}" data-run="${r.run_id}">
        <td>R${r.run_id}</td>
        <td class="muted">${esc(label)}</td>
        <td>${gauge(r.parity, r.ideal_parity, 2, GAUGE_W)}<br>
          <span class="gauge-value" data-measure="parity">${fmtMeasure(r.parity)}</span></td>
        <td>${gauge(r.rnn_mean, r.ideal_rnn_mean, 1.2, GAUGE_W)}<br>
          <span class="gauge-value" data-measure="rnn_mean">${fmtMeasure(r.rnn_mean)}</span></td>
        <td>${gauge(r.utility, r.ideal_utility, 1.2, GAUGE_W)}<br>
          <span class="gauge-value" data-measure="utility">${fmtMeasure(r.utility)}</span></td>
      </tr>`;
    })
    .join("");
  root.innerHTML = `<h2>Ranking list</h2>
    <table class="runs-table">
      <thead><tr><th></th><th>config</th><th>group fairness (parity)</th><th>individual fairness (rNN)</th><th>utility</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>
    <div class="muted">◇ ideal score · ▼ this ranking</div>`;
}
