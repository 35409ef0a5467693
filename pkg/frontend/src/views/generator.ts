// Generator panel: dataset upload, sensitive/protected/group setup, feature
// table with per-group distributions and correlation scores, model and
// mitigation pickers, run trigger.

import type { FeatureInfo } from "../api.js";
import { COLORS, esc, miniHistogram } from "../charts.js";
import { fmt12 } from "../format.js";
import type { ViewState } from "../state.js";

function featureRow(f: FeatureInfo, state: ViewState): string {
  const checked = state.selected.has(f.name) ? "checked" : "";
  const corr = f.is_sensitive
    ? `<span class="muted">sensitive</span>`
    : `<span class="corr" data-corr="${f.name}" title="distance between the two groups' value distributions">${
        f.correlation === null ? "—" : fmt12(f.correlation)
      }</span>`;
  const hp = miniHistogram(f.histogram.s_plus, 64, 18, COLORS.protected);
  const hm = miniHistogram(f.histogram.s_minus, 64, 18, COLORS.nonProtected);
  return `<tr class="${f.is_sensitive ? "sensitive-row" : ""}">
    <td><label><input type="checkbox" data-feature="${esc(f.name)}" ${checked}> ${esc(f.name)}</label></td>
    <td class="muted">${f.kind === "continuous" ? "cont" : "cat"}</td>
    <td class="hist-cell" title="top: protected, bottom: non-protected">${hp}<br>${hm}</td>
    <td>${corr}</td>
  </tr>`;
}

export function renderGenerator(root: HTMLElement, state: ViewState): void {
  const doc = state.featureDoc;
  let body = `
    <div class="upload">
      <label>CSV <input type="file" id="csv-file" accept=".csv"></label>
      <label>Schema <input type="file" id="schema-file" accept=".json"></label>
      <button id="upload-btn">Load dataset</button>
    </div>`;
  if (doc) {
    const catFeatures = doc.features.filter((f) => f.kind === "categorical");
    const sensitiveOptions = catFeatures
      .map((f) => `<option value="${esc(f.name)}" ${f.name === state.sensitive ? "selected" : ""}>${esc(f.name)}</option>`)
      .join("");
    const sensFeature = doc.features.find((f) => f.name === state.sensitive);
    const protectedOptions = (sensFeature?.categories ?? [])
      .map((c) => `<option value="${esc(c)}" ${c === state.protectedValue ? "selected" : ""}>${esc(c)}</option>`)
      .join("");
    const rows = doc.features.map((f) => featureRow(f, state)).join("");
    const sensitiveSelected = state.sensitive !== null && state.selected.has(state.sensitive);
    body += `
      <div class="dataset-meta">n=${doc.n}, |S+|=${doc.s_plus_size}, |S−|=${doc.s_minus_size}</div>
      <div class="pickers">
        <label>Sensitive <select id="sensitive-pick">${sensitiveOptions}</select></label>
        <label>Protected <select id="protected-pick">${protectedOptions}</select></label>
      </div>
      ${sensitiveSelected ? `<div class="warn">⚠ the sensitive attribute is among the selected features</div>` : ""}
      <table class="feature-table">
        <thead><tr><th>feature</th><th></th><th>by-group</th><th>corr.</th></tr></thead>
        <tbody>${rows}</tbody>
      </table>
      <div class="pickers">
        <label>Model
          <select id="model-pick">
            <option value="logistic" ${state.model === "logistic" ? "selected" : ""}>Logistic Regression</option>
            <option value="acf_logistic" ${state.model === "acf_logistic" ? "selected" : ""}>Logistic + counterfactually fair</option>
          </select>
        </label>
        <label>k <input type="number" id="k-input" min="1" max="${doc.n}" value="${state.k}"></label>
        <label>h <input type="number" id="h-input" min="1" max="${doc.n - 1}" value="${state.h}"></label>
        <label>seed <input type="number" id="seed-input" value="${state.seed}"></label>
      </div>
      <div class="pickers rerank-box">
        <label><input type="checkbox" id="rerank-toggle" ${state.rerank.enabled ? "checked" : ""}> fair re-rank</label>
        <label>p <input type="number" id="rerank-p" step="0.05" min="0" max="1" value="${state.rerank.p}" ${state.rerank.enabled ? "" : "disabled"}></label>
        <label>seed <input type="number" id="rerank-seed" value="${state.rerank.seed}" ${state.rerank.enabled ? "" : "disabled"}></label>
      </div>
      <button id="run-btn" ${state.selected.size === 0 || state.busy ? "disabled" : ""}>
        ${state.busy ? "Running…" : "Generate ranking"}
      </button>`;
  } else {
    body += `<p class="muted">Upload a CSV and its JSON schema sidecar to begin
      (see the repository README for the demo generator).</p>`;
  }
  if (state.error) body += `<div class="error">${esc(state.error)}</div>`;
  root.innerHTML = `<h2>Generator</h2>${body}`;
}
